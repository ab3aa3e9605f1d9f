mod common;

use common::fields::*;
use common::{brute_irreducible, coeffs, PolyField};
use proptest::prelude::*;
use sl2census::gf::{make_field, make_field_with_cap, ArithOp, FieldCtx};
use sl2census::Error;

#[test]
fn small_fields_exhaustive() {
    for (p, k) in odd_prime_powers(49) {
        let f = make_field(p, k).unwrap();
        check_modulus(&f).unwrap();
        check_axioms_exhaustive(&f).unwrap();
        check_legendre_pairs(&f).unwrap();
    }
}

#[test]
fn frobenius_and_residues_up_to_81() {
    for (p, k) in odd_prime_powers(81) {
        let f = make_field(p, k).unwrap();
        check_frobenius_exhaustive(&f).unwrap();
        check_residues(&f).unwrap();
    }
}

#[test]
fn large_fields_sampled() {
    for (i, &(p, k)) in LARGE_FIELDS.iter().enumerate() {
        let f = make_field(p, k).unwrap();
        check_modulus(&f).unwrap();
        check_axioms_sampled(&f, 10_000, 7 + i as u64).unwrap();
    }
}

#[test]
fn modulus_is_smallest_irreducible() {
    // enumerate monic polynomials in lexicographic order of (c0, .., c_{k−1})
    for (p, k) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2), (3, 4)] {
        let f = make_field(p, k).unwrap();
        let smallest = (0..p.pow(k))
            .map(|code| {
                let mut m: Vec<u64> = (0..k).rev().map(|i| code / p.pow(i) % p).collect();
                m.push(1);
                m
            })
            .find(|m| brute_irreducible(m, p))
            .unwrap();
        let got: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
        assert_eq!(got, smallest, "GF({p}^{k})");
    }
    assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
    assert_eq!(make_field(3, 1).unwrap().modulus(), &[0, 1]);
}

#[test]
fn construction_errors() {
    assert_eq!(make_field(2, 1).unwrap_err(), Error::EvenCharacteristic);
    assert_eq!(make_field(9, 1).unwrap_err(), Error::NonPrime(9));
    assert_eq!(make_field(3, 0).unwrap_err(), Error::ZeroDegree);
    assert!(matches!(make_field(3, 7), Err(Error::CapExceeded { .. })));
    assert_eq!(make_field_with_cap(3, 7, 3000).unwrap().q(), 2187);
}

#[test]
fn worked_values() {
    let f3 = make_field(3, 1).unwrap();
    assert_eq!(f3.add(f3.from_int(2), f3.from_int(2)), f3.from_int(1));
    assert_eq!(f3.smallest_nonresidue(), f3.from_int(2));

    let f7 = make_field(7, 1).unwrap();
    assert_eq!(f7.mul(f7.from_int(3), f7.from_int(5)), f7.one());
    assert_eq!(f7.legendre(f7.from_int(2)), 1);
    assert_eq!(f7.legendre(f7.from_int(3)), -1);
    assert_eq!(f7.sqrt(f7.from_int(2)), Some((f7.from_int(3), f7.from_int(4))));
    assert_eq!(f7.sqrt(f7.from_int(3)), None);
    assert_eq!(f7.sqrt(f7.zero()), Some((f7.zero(), f7.zero())));
    assert_eq!(f7.smallest_nonresidue(), f7.from_int(3));

    // x·x in GF(9) reduces by the modulus x² + 1 to −1
    let f9 = make_field(3, 2).unwrap();
    let x = f9.from_coeffs(&[0, 1]).unwrap();
    let oracle = PolyField::of(&f9);
    assert_eq!(coeffs(&f9, f9.mul(x, x)), oracle.mul(&[0, 1], &[0, 1]));
    assert_eq!(f9.mul(x, x), f9.from_int(-1));
}

#[test]
fn checked_arithmetic_errors() {
    let f = make_field(5, 1).unwrap();
    let g = make_field(7, 1).unwrap();
    assert_eq!(f.div(f.one(), f.zero()).unwrap_err(), Error::DivisionByZero);
    assert_eq!(f.pow(f.zero(), -1).unwrap_err(), Error::DivisionByZero);
    assert_eq!(f.arith(f.one(), g.one(), ArithOp::Add).unwrap_err(), Error::MixedFields);
    assert_eq!(f.pow(f.from_int(2), -1).unwrap(), f.from_int(3));
}

#[test]
fn extension_roots_satisfy_vieta() {
    for (p, k) in odd_prime_powers(49) {
        let f = make_field(p, k).unwrap();
        for t in f.elements() {
            let [a, b] = f.ext_sqrt_roots(t);
            assert_eq!(f.ext_mul(a, b), f.ext_one());
            assert_eq!(f.ext_add(a, b), f.embed(t));
            let disc = f.sub(f.mul(t, t), f.from_int(4));
            assert_eq!(a.is_base(), f.legendre(disc) >= 0);
        }
    }
    // x² + 1 over GF(3) has no rational root
    let f3 = make_field(3, 1).unwrap();
    assert!(f3.ext_sqrt_roots(f3.zero()).iter().all(|r| !r.is_base()));
    assert_eq!(f3.ext_sqrt_roots(f3.from_int(2)), [f3.ext_one(); 2]);
}

fn field_strategy() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![(3u64, 4u32), (11, 2), (13, 1), (5, 3), (3, 6), (43, 2)])
}

fn with_field<T>(pk: (u64, u32), body: impl FnOnce(&FieldCtx) -> T) -> T {
    body(&make_field(pk.0, pk.1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn pow_matches_repeated_multiplication(pk in field_strategy(), i in 0usize..4096, e in -40i64..40) {
        with_field(pk, |f| {
            let a = f.elem(i % f.q() as usize).unwrap();
            prop_assume!(!a.is_zero() || e >= 0);
            let mut acc = f.one();
            let base = if e < 0 { f.inv(a).unwrap() } else { a };
            for _ in 0..e.unsigned_abs() {
                acc = f.mul(acc, base);
            }
            prop_assert_eq!(f.pow(a, e).unwrap(), acc);
            Ok(())
        })?;
    }

    #[test]
    fn extension_arithmetic_is_a_field(pk in field_strategy(), xs in prop::array::uniform4(0usize..4096)) {
        with_field(pk, |f| {
            let q = f.q() as usize;
            let a = f.ext(f.elem(xs[0] % q).unwrap(), f.elem(xs[1] % q).unwrap());
            let b = f.ext(f.elem(xs[2] % q).unwrap(), f.elem(xs[3] % q).unwrap());
            prop_assert_eq!(f.ext_mul(a, b), f.ext_mul(b, a));
            prop_assert_eq!(f.ext_norm(f.ext_mul(a, b)), f.mul(f.ext_norm(a), f.ext_norm(b)));
            if !a.is_zero() {
                prop_assert_eq!(f.ext_mul(a, f.ext_inv(a).unwrap()), f.ext_one());
            }
            // embedding is a ring map
            let (x, y) = (a.re, b.re);
            prop_assert_eq!(f.ext_mul(f.embed(x), f.embed(y)), f.embed(f.mul(x, y)));
            prop_assert_eq!(f.ext_add(f.embed(x), f.embed(y)), f.embed(f.add(x, y)));
            Ok(())
        })?;
    }

    #[test]
    fn ext_sqrt_squares_back(pk in field_strategy(), i in 0usize..4096) {
        with_field(pk, |f| {
            let a = f.elem(i % f.q() as usize).unwrap();
            let s = f.ext_sqrt(a);
            prop_assert_eq!(f.ext_mul(s, s), f.embed(a));
            Ok(())
        })?;
    }
}
