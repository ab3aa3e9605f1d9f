//! Field-layer property checks, shared by the field tests and the
//! acceptance run. Each returns the first violation as an error string.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2census::gf::{make_field, FieldCtx, FieldElem};

use super::{brute_irreducible, coeffs, PolyField};

/// Odd prime powers up to `limit`, as `(p, k)`.
pub fn odd_prime_powers(limit: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in (3..=limit).step_by(2) {
        if (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            continue;
        }
        let mut q = p;
        let mut k = 1;
        while q <= limit {
            out.push((p, k));
            q *= p;
            k += 1;
        }
    }
    out.sort_by_key(|&(p, k)| p.pow(k));
    out
}

/// Fields between 100 and the default cap, used for sampled checks.
pub const LARGE_FIELDS: [(u64, u32); 10] =
    [(101, 1), (11, 2), (5, 3), (3, 5), (7, 3), (5, 4), (3, 6), (11, 3), (43, 2), (2039, 1)];

fn fail(f: &FieldCtx, what: &str, args: &[FieldElem]) -> String {
    let shown: Vec<_> = args.iter().map(|&a| f.coeffs(a)).collect();
    format!("GF({}): {what} fails at {shown:?}", f.q())
}

pub fn check_modulus(f: &FieldCtx) -> Result<(), String> {
    let m: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
    if m.len() != f.k() as usize + 1 || m[f.k() as usize] != 1 || !brute_irreducible(&m, f.p() as u64) {
        return Err(format!("GF({}): modulus {m:?} is not monic irreducible of degree {}", f.q(), f.k()));
    }
    Ok(())
}

/// Axioms over all triples plus agreement with schoolbook arithmetic.
pub fn check_axioms_exhaustive(f: &FieldCtx) -> Result<(), String> {
    let oracle = PolyField::of(f);
    let els: Vec<FieldElem> = f.elements().collect();
    for &a in &els {
        if f.add(a, f.zero()) != a || f.mul(a, f.one()) != a || f.add(a, f.neg(a)) != f.zero() {
            return Err(fail(f, "identities", &[a]));
        }
        if !a.is_zero() && f.inv(a).map(|i| f.mul(a, i)) != Some(f.one()) {
            return Err(fail(f, "inverse", &[a]));
        }
        for &b in &els {
            if coeffs(f, f.mul(a, b)) != oracle.mul(&coeffs(f, a), &coeffs(f, b))
                || coeffs(f, f.add(a, b)) != oracle.add(&coeffs(f, a), &coeffs(f, b))
            {
                return Err(fail(f, "schoolbook agreement", &[a, b]));
            }
            if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
                return Err(fail(f, "commutativity", &[a, b]));
            }
            for &c in &els {
                if !triple_ok(f, a, b, c) {
                    return Err(fail(f, "associativity/distributivity", &[a, b, c]));
                }
            }
        }
    }
    Ok(())
}

fn triple_ok(f: &FieldCtx, a: FieldElem, b: FieldElem, c: FieldElem) -> bool {
    f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
}

pub fn check_axioms_sampled(f: &FieldCtx, cases: usize, seed: u64) -> Result<(), String> {
    let oracle = PolyField::of(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = || f.elem(rng.gen_range(0..f.q() as usize)).unwrap();
    for _ in 0..cases {
        let (a, b, c) = (pick(), pick(), pick());
        if !triple_ok(f, a, b, c) {
            return Err(fail(f, "associativity/distributivity", &[a, b, c]));
        }
        if coeffs(f, f.mul(a, b)) != oracle.mul(&coeffs(f, a), &coeffs(f, b)) {
            return Err(fail(f, "schoolbook agreement", &[a, b]));
        }
        if !a.is_zero() && f.mul(a, f.inv(a).unwrap()) != f.one() {
            return Err(fail(f, "inverse", &[a]));
        }
        let l = |x| f.legendre(x) as i32;
        if !a.is_zero() && !b.is_zero() && l(a) * l(b) != l(f.mul(a, b)) {
            return Err(fail(f, "legendre multiplicativity", &[a, b]));
        }
        if f.frobenius(f.add(a, b)) != f.add(f.frobenius(a), f.frobenius(b))
            || f.frobenius(f.mul(a, b)) != f.mul(f.frobenius(a), f.frobenius(b))
        {
            return Err(fail(f, "frobenius", &[a, b]));
        }
    }
    // the multiplicative group has order q − 1
    let g = f.elem(f.q() as usize - 1).unwrap();
    if coeffs(f, g) != oracle.pow(&coeffs(f, g), f.q() as u64) {
        return Err(fail(f, "a^q = a", &[g]));
    }
    Ok(())
}

/// Frobenius is a ring map and agrees with `a^p` computed by the oracle.
pub fn check_frobenius_exhaustive(f: &FieldCtx) -> Result<(), String> {
    let oracle = PolyField::of(f);
    let els: Vec<FieldElem> = f.elements().collect();
    for &a in &els {
        if coeffs(f, f.frobenius(a)) != oracle.pow(&coeffs(f, a), f.p() as u64) {
            return Err(fail(f, "frobenius = a^p", &[a]));
        }
        for &b in &els {
            if f.frobenius(f.add(a, b)) != f.add(f.frobenius(a), f.frobenius(b))
                || f.frobenius(f.mul(a, b)) != f.mul(f.frobenius(a), f.frobenius(b))
            {
                return Err(fail(f, "frobenius homomorphism", &[a, b]));
            }
        }
    }
    Ok(())
}

/// Residue count by squaring every element, and agreement of `legendre`
/// with that set.
pub fn check_residues(f: &FieldCtx) -> Result<(), String> {
    let q = f.q() as usize;
    let mut square = vec![false; q];
    for a in f.nonzero_elements() {
        square[f.mul(a, a).index()] = true;
    }
    let count = square.iter().filter(|&&s| s).count();
    if count != (q - 1) / 2 {
        return Err(format!("GF({q}): {count} nonzero squares, expected {}", (q - 1) / 2));
    }
    for a in f.nonzero_elements() {
        let expect = if square[a.index()] { 1 } else { -1 };
        if f.legendre(a) != expect {
            return Err(fail(f, "legendre vs squares", &[a]));
        }
        match f.sqrt(a) {
            Some((s, t)) if f.mul(s, s) == a && t == f.neg(s) && s <= t => {}
            None if expect == -1 => {}
            _ => return Err(fail(f, "sqrt", &[a])),
        }
    }
    let n = f.smallest_nonresidue();
    if square[n.index()] || f.nonzero_elements().take_while(|&a| a < n).any(|a| !square[a.index()]) {
        return Err(fail(f, "smallest nonresidue", &[n]));
    }
    Ok(())
}

/// Legendre multiplicativity over all nonzero pairs, and the quotient of
/// two non-residues being a residue.
pub fn check_legendre_pairs(f: &FieldCtx) -> Result<(), String> {
    for a in f.nonzero_elements() {
        for b in f.nonzero_elements() {
            let (la, lb) = (f.legendre(a), f.legendre(b));
            if la * lb != f.legendre(f.mul(a, b)) {
                return Err(fail(f, "legendre multiplicativity", &[a, b]));
            }
            if la == -1 && lb == -1 && f.legendre(f.div(a, b).unwrap()) != 1 {
                return Err(fail(f, "nonresidue quotient", &[a, b]));
            }
        }
    }
    Ok(())
}

/// Everything: exhaustive checks up to q = 49 (81 for Frobenius and
/// residue counts), then sampled checks on larger fields.
pub fn check_field_layer(cases: usize, seed: u64) -> Result<String, String> {
    let mut exhaustive = 0;
    for (p, k) in odd_prime_powers(81) {
        let f = make_field(p, k).map_err(|e| e.to_string())?;
        check_modulus(&f)?;
        check_frobenius_exhaustive(&f)?;
        check_residues(&f)?;
        if f.q() <= 49 {
            check_axioms_exhaustive(&f)?;
            check_legendre_pairs(&f)?;
        }
        exhaustive += 1;
    }
    for (i, &(p, k)) in LARGE_FIELDS.iter().enumerate() {
        let f = make_field(p, k).map_err(|e| e.to_string())?;
        check_modulus(&f)?;
        check_axioms_sampled(&f, cases, seed + i as u64)?;
    }
    Ok(format!(
        "{exhaustive} fields exhaustive up to q = 81, {} larger fields with {cases} sampled cases each",
        LARGE_FIELDS.len()
    ))
}
