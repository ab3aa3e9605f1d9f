//! Independent oracles for the integration tests. Nothing here calls the
//! code under test except to read a field's modulus and element encoding.

#![allow(dead_code)]

use sl2census::gf::{FieldCtx, FieldElem};

/// Schoolbook arithmetic on coefficient vectors modulo `(p, modulus)`.
pub struct PolyField {
    pub p: u64,
    pub k: usize,
    /// Monic, low to high, length k + 1.
    pub modulus: Vec<u64>,
}

impl PolyField {
    pub fn of(f: &FieldCtx) -> Self {
        PolyField {
            p: f.p() as u64,
            k: f.k() as usize,
            modulus: f.modulus().iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0u64; 2 * self.k];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce from the top using x^k = −(m_0 + .. + m_{k−1} x^{k−1})
        for deg in (self.k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, m) in self.modulus[..self.k].iter().enumerate() {
                let idx = deg - self.k + i;
                prod[idx] = (prod[idx] + self.p * self.p - c * m % self.p) % self.p;
            }
        }
        prod.truncate(self.k);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = 1;
        v
    }
}

pub fn coeffs(f: &FieldCtx, a: FieldElem) -> Vec<u64> {
    f.coeffs(a).into_iter().map(u64::from).collect()
}

/// True when the monic `m` (low to high) has no monic factor of degree
/// 1..=deg/2, by trial division against every monic polynomial.
pub fn brute_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
            g.push(1);
            if poly_rem(m, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, gc) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * gc % p) % p;
        }
        r.pop();
    }
    r
}

/// Brute-force count of determinant-1 quadruples over GF(q).
pub fn count_sl2(f: &FieldCtx) -> u64 {
    let els: Vec<_> = f.elements().collect();
    let mut n = 0;
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    if f.sub(f.mul(a, d), f.mul(b, c)) == f.one() {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// The stratum closed forms written out term by term in i128:
/// `(size, orbits)` per label in the order Z, D, Dbar, U, NR, AI.
pub fn stratum_closed_forms(q: i128, r: u32) -> [(i128, i128); 6] {
    let g = q * (q * q - 1);
    let two_r = 2i128.pow(r);
    let z = (two_r, two_r);
    let d_orb = ((q - 1).pow(r) - two_r) / 2;
    let d = (d_orb * q * (q + 1), d_orb);
    let dbar_orb = ((q + 1).pow(r) - two_r) / 2;
    let dbar = (dbar_orb * q * (q - 1), dbar_orb);
    let u_size = (q + 1) * ((2 * q).pow(r) - two_r);
    let u = (u_size, u_size * 2 * q / g);
    let nr_size = (q + 1) * ((q - 1).pow(r) * q.pow(r) - (2 * q).pow(r) - q * ((q - 1).pow(r) - two_r));
    let nr = (nr_size, nr_size * 2 / g);
    let ai_size = g.pow(r) - z.0 - d.0 - dbar.0 - u.0 - nr.0;
    let ai = (ai_size, ai_size * 2 / g);
    [z, d, dbar, u, nr, ai]
}

/// Total orbit count, term by term.
pub fn total_orbits_closed_form(q: i128, r: u32) -> i128 {
    (q - 3) * (q - 1).pow(r - 1) / 2
        + (q - 1) * (q + 1).pow(r - 1) / 2
        + 2i128.pow(r + 1) * q.pow(r - 1)
        + 2 * (q * q * q - q).pow(r - 1)
}

/// Free-family E-polynomial evaluated directly.
pub fn e_free(q: i128, r: u32) -> i128 {
    (q - 1).pow(r - 1) * ((q + 1).pow(r - 1) - 1) * q.pow(r - 1) + q * ((q - 1).pow(r - 1) + (q + 1).pow(r - 1)) / 2
}

pub fn e_abelian(q: i128, r: u32) -> i128 {
    ((q - 1).pow(r) + (q + 1).pow(r)) / 2
}

pub mod fields;
