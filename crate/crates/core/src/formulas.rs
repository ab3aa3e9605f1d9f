//! Closed-form counting polynomials for `Hom(F_r, SL₂)` and its character
//! varieties: total orbit count, per-stratum sizes and orbit counts,
//! E-polynomials, Poincaré polynomials and Euler characteristics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{group_order_poly, hom_count_poly, GroupFamily};
use crate::poly::{series, CountPoly, Var};
use crate::strata::StratumLabel;

fn q() -> CountPoly {
    CountPoly::x(Var::Q)
}

fn c(n: i64) -> CountPoly {
    CountPoly::constant(Var::Q, n)
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// `(q + a)^e`.
fn shifted_pow(a: i64, e: u32) -> CountPoly {
    CountPoly::linear(Var::Q, a).pow(e)
}

fn require_rank(r: u32) -> Result<()> {
    if r < 2 {
        Err(Error::RankTooSmall(r))
    } else {
        Ok(())
    }
}

/// Number of conjugation orbits of `SL₂(F_q)` on `Hom(F_r, SL₂(F_q))`.
pub fn theorem_a(r: u32) -> Result<CountPoly> {
    require_rank(r)?;
    let t1 = (&CountPoly::linear(Var::Q, -3) * &shifted_pow(-1, r - 1)).scale(&half());
    let t2 = (&CountPoly::linear(Var::Q, -1) * &shifted_pow(1, r - 1)).scale(&half());
    let t3 = &c(1 << (r + 1)) * &q().pow(r - 1);
    let t4 = &c(2) * &group_order_poly(GroupFamily::Sl, 2).pow(r - 1);
    Ok(t1 + t2 + t3 + t4)
}

/// Size and orbit-count polynomials of one stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumPolys {
    pub size: CountPoly,
    pub orbits: CountPoly,
}

/// Per-stratum polynomials, indexed by [`StratumLabel::index`].
pub fn stratum_polys(r: u32) -> Result<[StratumPolys; 6]> {
    require_rank(r)?;
    let two_r = c(1 << r);
    let g = group_order_poly(GroupFamily::Sl, 2);

    let z = StratumPolys { size: two_r.clone(), orbits: two_r.clone() };

    let d_orbits = (&shifted_pow(-1, r) - &two_r).scale(&half());
    let d = StratumPolys { size: &d_orbits * &(&q() * &CountPoly::linear(Var::Q, 1)), orbits: d_orbits };

    let dbar_orbits = (&shifted_pow(1, r) - &two_r).scale(&half());
    let dbar = StratumPolys { size: &dbar_orbits * &(&q() * &CountPoly::linear(Var::Q, -1)), orbits: dbar_orbits };

    let u_size = &CountPoly::linear(Var::Q, 1) * &(&(&c(2) * &q()).pow(r) - &two_r);
    let u_orbits = (&(&c(2) * &q()) * &u_size).div_exact(&g)?;
    let u = StratumPolys { size: u_size, orbits: u_orbits };

    let nr_size = &CountPoly::linear(Var::Q, 1)
        * &(&(&(&shifted_pow(-1, r) * &q().pow(r)) - &(&c(2) * &q()).pow(r))
            - &(&q() * &(&shifted_pow(-1, r) - &two_r)));
    let nr_orbits = (&c(2) * &nr_size).div_exact(&g)?;
    let nr = StratumPolys { size: nr_size, orbits: nr_orbits };

    let total = hom_count_poly(GroupFamily::Sl, 2, r);
    let ai_size = [&z, &d, &dbar, &u, &nr]
        .iter()
        .fold(total, |acc, s| &acc - &s.size);
    let ai_orbits = (&c(2) * &ai_size).div_exact(&g)?;
    let ai = StratumPolys { size: ai_size, orbits: ai_orbits };

    Ok([z, d, dbar, u, nr, ai])
}

pub fn stratum_poly(r: u32, label: StratumLabel) -> Result<StratumPolys> {
    Ok(stratum_polys(r)?[label.index()].clone())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Character variety of the free group.
    Free,
    /// Character variety of the free abelian group.
    Abelian,
}

/// E-polynomial (in q) of the SL₂ character variety of `F_r` or `Z^r`.
pub fn e_poly(family: Family, r: u32) -> Result<CountPoly> {
    if r == 0 {
        return Err(Error::Invalid("rank must be positive".into()));
    }
    Ok(match family {
        Family::Free => {
            let a = &(&shifted_pow(-1, r - 1) * &(&shifted_pow(1, r - 1) - &c(1))) * &q().pow(r - 1);
            let b = (&q() * &(&shifted_pow(-1, r - 1) + &shifted_pow(1, r - 1))).scale(&(half()));
            a + b
        }
        Family::Abelian => (&shifted_pow(-1, r) + &shifted_pow(1, r)).scale(&half()),
    })
}

/// E-polynomial assembled from stratum orbit counts: closed reducible
/// orbits plus half of the absolutely irreducible ones (or, for the abelian
/// family, the closed reducible orbits alone).
pub fn e_poly_from_strata(family: Family, r: u32) -> Result<CountPoly> {
    let s = stratum_polys(r)?;
    let reducible = &(&s[StratumLabel::Z.index()].orbits + &s[StratumLabel::D.index()].orbits)
        + &s[StratumLabel::Dbar.index()].orbits;
    Ok(match family {
        Family::Free => &reducible + &s[StratumLabel::AI.index()].orbits.scale(&half()),
        Family::Abelian => reducible,
    })
}

/// Euler characteristics of the free-group character variety and its
/// strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerTable {
    pub chi: BigInt,
    pub chi_smooth: BigInt,
    pub chi_singular: BigInt,
    pub chi_singular_smooth: BigInt,
    pub chi_singular_singular: BigInt,
}

impl EulerTable {
    /// The closed forms `2^{r−2}, −2^{r−2}, 2^{r−1}, −2^{r−1}, 2^r`.
    pub fn closed_form(r: u32) -> Result<Self> {
        require_rank(r)?;
        let p = |e: u32| BigInt::from(2).pow(e);
        Ok(EulerTable {
            chi: p(r - 2),
            chi_smooth: -p(r - 2),
            chi_singular: p(r - 1),
            chi_singular_smooth: -p(r - 1),
            chi_singular_singular: p(r),
        })
    }

    pub fn as_array(&self) -> [BigInt; 5] {
        [
            self.chi.clone(),
            self.chi_smooth.clone(),
            self.chi_singular.clone(),
            self.chi_singular_smooth.clone(),
            self.chi_singular_singular.clone(),
        ]
    }
}

/// Euler characteristics; the first three come from evaluating
/// E-polynomials at q = 1 (the smooth part by subtraction).
pub fn euler_table(r: u32) -> Result<EulerTable> {
    let closed = EulerTable::closed_form(r)?;
    let chi = e_poly(Family::Free, r)?.eval_int(1)?;
    let chi_singular = e_poly(Family::Abelian, r)?.eval_int(1)?;
    Ok(EulerTable {
        chi_smooth: &chi - &chi_singular,
        chi,
        chi_singular,
        chi_singular_smooth: closed.chi_singular_smooth,
        chi_singular_singular: closed.chi_singular_singular,
    })
}

pub fn default_guard(r: u32) -> usize {
    8 * r as usize
}

/// Poincaré polynomial (in t). The free family is expanded as a power
/// series up to degree `guard`; every coefficient from `guard/2` on must
/// vanish.
pub fn poincare(family: Family, r: u32, guard: usize) -> Result<CountPoly> {
    require_rank(r)?;
    if guard < 4 * r as usize {
        return Err(Error::Invalid(format!("guard {guard} is below 4r = {}", 4 * r)));
    }
    let t = CountPoly::x(Var::T);
    let one = CountPoly::constant(Var::T, 1);
    let plus = &t + &one;
    let minus = &one - &t;
    if family == Family::Abelian {
        return Ok((&plus.pow(r) + &minus.pow(r)).scale(&half()));
    }

    let len = guard + 1;
    let ser = |p: &CountPoly| series::from_poly(p, len);
    let inv = |p: &CountPoly| series::inverse(&ser(p));

    // −t(t³+1)^r / (1−t⁴)
    let a = series::mul(
        &ser(&-(&t * &(&t.pow(3) + &one).pow(r))),
        &inv(&(&one - &t.pow(4)))?,
    );
    // ½t³ ((t+1)^r/(1−t²) − (1−t)^r/(1+t²))
    let b1 = series::mul(&ser(&plus.pow(r)), &inv(&(&one - &t.pow(2)))?);
    let b2 = series::mul(&ser(&minus.pow(r)), &inv(&(&one + &t.pow(2)))?);
    let b = series::mul(
        &ser(&t.pow(3).scale(&half())),
        &series::add(&b1, &series::scale(&b2, &-BigRational::one())),
    );
    let tail = ser(&plus);
    let total = series::add(&series::add(&a, &b), &tail);

    if let Some(degree) = (guard / 2..len).find(|&i| !total[i].is_zero()) {
        return Err(Error::SeriesNotPolynomial { degree });
    }
    Ok(CountPoly::new(Var::T, total))
}

/// Checks `q^r E_{Z^r}(1/q) = P_{Z^r}(q)` and `q^r P_{Z^r}(1/q) = E_{Z^r}(q)`.
pub fn reciprocity_check(r: u32) -> Result<bool> {
    require_rank(r)?;
    let e = e_poly(Family::Abelian, r)?;
    let p = poincare(Family::Abelian, r, default_guard(r))?.with_var(Var::Q);
    let r = r as usize;
    Ok(e.reciprocal(r)? == p && p.reciprocal(r)? == e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(p: &CountPoly, x: i64) -> i128 {
        p.eval_i128(x).unwrap()
    }

    #[test]
    fn theorem_a_values() {
        assert_eq!(eval(&theorem_a(2).unwrap(), 3), 76);
        assert_eq!(eval(&theorem_a(2).unwrap(), 5), 296);
        assert_eq!(eval(&theorem_a(3).unwrap(), 3), 1312);
        assert_eq!(theorem_a(1).unwrap_err(), Error::RankTooSmall(1));
    }

    #[test]
    fn theorem_a_term_by_term() {
        // (q-3)(q-1)^{r-1}/2 + (q-1)(q+1)^{r-1}/2 + 2^{r+1} q^{r-1} + 2(q^3-q)^{r-1}
        let direct = |q: i128, r: u32| {
            (q - 3) * (q - 1).pow(r - 1) / 2
                + (q - 1) * (q + 1).pow(r - 1) / 2
                + 2i128.pow(r + 1) * q.pow(r - 1)
                + 2 * (q * q * q - q).pow(r - 1)
        };
        for r in 2..6 {
            let p = theorem_a(r).unwrap();
            for q in [3, 5, 7, 9, 11, 13, 25, 27] {
                assert_eq!(eval(&p, q as i64), direct(q, r));
            }
        }
    }

    #[test]
    fn d_orbits_at_rank_two() {
        let s = stratum_poly(2, StratumLabel::D).unwrap();
        let expect = &(&shifted_pow(-1, 2) - &c(4)) * &CountPoly::constant_rat(Var::Q, half());
        assert_eq!(s.orbits, expect);
        assert_eq!(s.orbits.coeff(0), BigRational::new((-3).into(), 2.into()));
        assert_eq!(s.orbits.coeff(1), BigRational::from_integer((-1).into()));
    }

    #[test]
    fn u_size_at_3_2() {
        assert_eq!(eval(&stratum_poly(2, StratumLabel::U).unwrap().size, 3), 128);
    }

    #[test]
    fn sizes_sum_to_hom() {
        for r in 2..=8 {
            let s = stratum_polys(r).unwrap();
            let total = s.iter().fold(CountPoly::zero(Var::Q), |acc, x| &acc + &x.size);
            assert_eq!(total, hom_count_poly(GroupFamily::Sl, 2, r));
        }
    }

    #[test]
    fn e_poly_small_ranks() {
        assert_eq!(e_poly(Family::Free, 2).unwrap(), CountPoly::monomial(Var::Q, 1, 3));
        assert_eq!(e_poly(Family::Abelian, 2).unwrap(), CountPoly::from_ints(Var::Q, &[1, 0, 1]));
        assert_eq!(e_poly(Family::Free, 1).unwrap(), q());
        for r in 2..=10 {
            assert_eq!(eval(&e_poly(Family::Free, r).unwrap(), 1), 1 << (r - 2));
        }
    }

    #[test]
    fn euler_tables() {
        let t = euler_table(2).unwrap();
        let as_i64 = |t: &EulerTable| t.as_array().iter().map(|x| x.try_into().unwrap()).collect::<Vec<i64>>();
        assert_eq!(as_i64(&t), vec![1, -1, 2, -2, 4]);
        assert_eq!(as_i64(&euler_table(3).unwrap()), vec![2, -2, 4, -4, 8]);
        assert_eq!(euler_table(1).unwrap_err(), Error::RankTooSmall(1));
    }

    #[test]
    fn poincare_small_ranks() {
        assert_eq!(poincare(Family::Free, 2, 16).unwrap(), CountPoly::constant(Var::T, 1));
        assert_eq!(
            poincare(Family::Abelian, 3, 24).unwrap(),
            CountPoly::from_ints(Var::T, &[1, 0, 3])
        );
        assert_eq!(
            poincare(Family::Free, 4, 32).unwrap(),
            CountPoly::from_ints(Var::T, &[1, 0, 0, 0, 0, 0, 4, 0, 0, 1])
        );
        assert!(poincare(Family::Free, 3, 8).is_err());
    }

    #[test]
    fn poincare_guard_too_small_detects_tail() {
        // with guard = 4r the window starts at 2r, below the degree 3r-3 term for r >= 4
        assert_eq!(
            poincare(Family::Free, 4, 16).unwrap_err(),
            Error::SeriesNotPolynomial { degree: 9 }
        );
    }

    #[test]
    fn reciprocity() {
        for r in 2..=8 {
            assert!(reciprocity_check(r).unwrap());
        }
    }
}
