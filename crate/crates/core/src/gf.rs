//! Finite fields GF(p^k) for odd p, their quadratic extension, and
//! quadratic-residue helpers.
//!
//! Elements are stored as a packed index into the field. The index is the
//! coefficient vector `[c0, .., c_{k-1}]` read as a base-p number with `c0`
//! the most significant digit, so comparing indices is the same as comparing
//! coefficient vectors lexicographically. That ordering is the canonical
//! element order used for orbit representatives everywhere else.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on `q = p^k`.
pub const DEFAULT_FIELD_CAP: u64 = 2048;

/// One element of a [`FieldCtx`]. The field is identified by its order,
/// which determines it uniquely because the modulus choice is deterministic.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    field: u32,
    idx: u32,
}

impl FieldElem {
    /// Position of the element in the canonical element order.
    #[inline]
    pub fn index(self) -> usize {
        self.idx as usize
    }

    #[inline]
    pub fn field_order(self) -> u32 {
        self.field
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.idx == 0
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field, self.idx).cmp(&(other.field, other.idx))
    }
}

/// An element `re + im·√n` of GF(q²), where `n` is the field's smallest
/// quadratic non-residue.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ExtElem {
    pub re: FieldElem,
    pub im: FieldElem,
}

impl ExtElem {
    #[inline]
    pub fn is_base(self) -> bool {
        self.im.is_zero()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serializable description of a field: `{p, k, modulus: [c0, .., ck]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

/// A concrete finite field GF(p^k) with lookup tables.
///
/// Immutable after construction and `Sync`, so one context can be shared by
/// every worker thread.
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp[i] = g^i for a fixed generator g, log is its inverse on nonzero elements
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    nonresidue: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds GF(p^k) with the default cap.
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx> {
    make_field_with_cap(p, k, DEFAULT_FIELD_CAP)
}

pub fn make_field_with_cap(p: u64, k: u32, cap: u64) -> Result<FieldCtx> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q <= cap && q <= u32::MAX as u64)
        .ok_or(Error::CapExceeded { p, k, cap })?;
    let (p, q) = (p as u32, q as u32);
    let modulus = smallest_irreducible(p, k);
    FieldCtx::from_modulus(p, k, q, modulus)
}

/// Polynomials over GF(p) as coefficient vectors, low degree first.
mod poly_p {
    pub fn trim(v: &mut Vec<u32>) {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut result = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        result as u32
    }

    /// Remainder of `a` modulo `m` (m nonzero, any leading coefficient).
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut m = m.to_vec();
        trim(&mut m);
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        let p64 = p as u64;
        for i in (dm..r.len()).rev() {
            if r[i] == 0 {
                continue;
            }
            let factor = r[i] as u64 * lead_inv % p64;
            let shift = i - dm;
            for (j, &c) in m.iter().enumerate() {
                let sub = factor * c as u64 % p64;
                r[shift + j] = ((r[shift + j] as u64 + p64 - sub) % p64) as u32;
            }
        }
        r.truncate(dm.max(1));
        if dm == 0 {
            r[0] = 0;
        }
        r
    }

    pub fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut r = rem(&prod, m, p);
        r.resize(m.len() - 1, 0);
        r
    }
}

/// Decodes the k low coefficients of the candidate with the given rank in
/// element order (c0 most significant).
fn digits_of(mut idx: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = vec![0; k as usize];
    for slot in out.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

fn encode_digits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().fold(0, |acc, &c| acc * p + c)
}

fn has_root(f: &[u32], p: u32) -> bool {
    (0..p).any(|x| {
        let v = f
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64);
        v == 0
    })
}

/// Irreducibility over GF(p) by root check (degree ≤ 3) or trial division
/// by every monic polynomial of degree at most half.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    if deg <= 3 {
        return !has_root(f, p);
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits_of(idx as u32, p, d as u32);
            g.push(1);
            if poly_p::is_zero(&poly_p::rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k) as u32;
    (0..count)
        .map(|idx| {
            let mut f = digits_of(idx, p, k);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}

impl FieldCtx {
    fn from_modulus(p: u32, k: u32, q: u32, modulus: Vec<u32>) -> Result<Self> {
        debug_assert_eq!(modulus.len(), k as usize + 1);
        debug_assert!(is_irreducible(&modulus, p));

        let mul_slow = |a: u32, b: u32| -> u32 {
            let x: Vec<u32> = digits_of(a, p, k);
            let y: Vec<u32> = digits_of(b, p, k);
            encode_digits(&poly_p::mul_mod(&x, &y, &modulus, p), p)
        };
        let pow_slow = |a: u32, mut e: u64| -> u32 {
            let one = encode_digits(&one_digits(k), p);
            let (mut result, mut base) = (one, a);
            while e > 0 {
                if e & 1 == 1 {
                    result = mul_slow(result, base);
                }
                base = mul_slow(base, base);
                e >>= 1;
            }
            result
        };
        let one = encode_digits(&one_digits(k), p);
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&a| factors.iter().all(|&l| pow_slow(a, order / l) != one))
            .ok_or_else(|| Error::Invalid("no multiplicative generator".into()))?;

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = one;
        for i in 0..q - 1 {
            if log[x as usize] != u32::MAX {
                return Err(Error::Invalid("multiplicative group is not cyclic of order q-1".into()));
            }
            exp.push(x);
            log[x as usize] = i;
            x = mul_slow(x, generator);
        }
        if x != one {
            return Err(Error::Invalid("generator order mismatch".into()));
        }

        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits_of(a, p, k).into_iter().map(|c| (p - c) % p).collect();
                encode_digits(&d, p)
            })
            .collect();

        let mut ctx = FieldCtx {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            neg,
            nonresidue: 0,
        };
        // log of the generator is 1, so odd logs are exactly the non-residues
        ctx.nonresidue = (1..q)
            .find(|&a| ctx.log[a as usize] % 2 == 1)
            .expect("odd q has non-residues");
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, coefficients low to high (length k+1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
        }
    }

    #[inline]
    fn wrap(&self, idx: u32) -> FieldElem {
        FieldElem { field: self.q, idx }
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        self.wrap(self.exp[0])
    }

    /// Element at position `idx` of the canonical order.
    pub fn elem(&self, idx: usize) -> Result<FieldElem> {
        if idx < self.q as usize {
            Ok(self.wrap(idx as u32))
        } else {
            Err(Error::InvalidElement(format!("index {idx} >= {}", self.q)))
        }
    }

    /// Image of an integer under Z → GF(p) ⊂ GF(q).
    pub fn from_int(&self, n: i64) -> FieldElem {
        let c = n.rem_euclid(self.p as i64) as u32;
        let mut digits = vec![0; self.k as usize];
        digits[0] = c;
        self.wrap(encode_digits(&digits, self.p))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.k as usize {
            return Err(Error::InvalidElement(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidElement(format!("coefficient {c} not in [0, {})", self.p)));
        }
        Ok(self.wrap(encode_digits(coeffs, self.p)))
    }

    /// Coefficient vector `[c0, .., c_{k-1}]` of `a` in the power basis.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        digits_of(a.idx, self.p, self.k)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |i| self.wrap(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.q).map(move |i| self.wrap(i))
    }

    #[inline]
    pub fn contains(&self, a: FieldElem) -> bool {
        a.field == self.q
    }

    fn check(&self, a: FieldElem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(self.contains(a) && self.contains(b));
        if self.k == 1 {
            let s = a.idx + b.idx;
            return self.wrap(if s >= self.p { s - self.p } else { s });
        }
        let (p, mut x, mut y) = (self.p, a.idx, b.idx);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.k {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        self.wrap(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.wrap(self.neg[a.idx as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.idx == 0 || b.idx == 0 {
            return self.zero();
        }
        let n = self.q - 1;
        let l = self.log[a.idx as usize] + self.log[b.idx as usize];
        self.wrap(self.exp[(if l >= n { l - n } else { l }) as usize])
    }

    #[inline]
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.idx == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a.idx as usize];
        Some(self.wrap(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    /// `a^e` for any integer exponent; negative exponents need `a != 0`.
    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem> {
        self.check(a)?;
        if a.idx == 0 {
            return match e.cmp(&0) {
                Ordering::Less => Err(Error::DivisionByZero),
                Ordering::Equal => Ok(self.one()),
                Ordering::Greater => Ok(self.zero()),
            };
        }
        let n = (self.q - 1) as i64;
        let l = (self.log[a.idx as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Ok(self.wrap(self.exp[l as usize]))
    }

    /// Checked binary arithmetic.
    pub fn arith(&self, a: FieldElem, b: FieldElem, op: ArithOp) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }

    /// `a ↦ a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as i64).expect("nonnegative exponent")
    }

    /// Legendre symbol: 0 for zero, +1 for nonzero squares, -1 otherwise.
    pub fn legendre(&self, a: FieldElem) -> i8 {
        if a.idx == 0 {
            return 0;
        }
        let half = (self.q as i64 - 1) / 2;
        let v = self.pow(a, half).expect("nonnegative exponent");
        if v == self.one() {
            1
        } else {
            debug_assert_eq!(v, self.neg(self.one()));
            -1
        }
    }

    /// Both square roots of `a`, smaller first in element order; `None` for
    /// non-residues. Zero yields `(0, 0)`.
    pub fn sqrt(&self, a: FieldElem) -> Option<(FieldElem, FieldElem)> {
        if a.idx == 0 {
            return Some((a, a));
        }
        let l = self.log[a.idx as usize];
        if l % 2 == 1 {
            return None;
        }
        let s = self.wrap(self.exp[(l / 2) as usize]);
        let t = self.neg(s);
        Some(if s.idx < t.idx { (s, t) } else { (t, s) })
    }

    /// Smallest quadratic non-residue; GF(q²) is modelled as F[x]/(x² − n).
    pub fn smallest_nonresidue(&self) -> FieldElem {
        self.wrap(self.nonresidue)
    }

    // ---- GF(q²) = F(√n) ----

    pub fn ext(&self, re: FieldElem, im: FieldElem) -> ExtElem {
        ExtElem { re, im }
    }

    pub fn embed(&self, a: FieldElem) -> ExtElem {
        ExtElem { re: a, im: self.zero() }
    }

    pub fn ext_zero(&self) -> ExtElem {
        self.embed(self.zero())
    }

    pub fn ext_one(&self) -> ExtElem {
        self.embed(self.one())
    }

    /// The adjoined square root `√n`.
    pub fn sqrt_nonresidue(&self) -> ExtElem {
        self.ext(self.zero(), self.one())
    }

    pub fn ext_add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        self.ext(self.add(a.re, b.re), self.add(a.im, b.im))
    }

    pub fn ext_sub(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        self.ext(self.sub(a.re, b.re), self.sub(a.im, b.im))
    }

    pub fn ext_neg(&self, a: ExtElem) -> ExtElem {
        self.ext(self.neg(a.re), self.neg(a.im))
    }

    pub fn ext_mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let n = self.smallest_nonresidue();
        let re = self.add(self.mul(a.re, b.re), self.mul(n, self.mul(a.im, b.im)));
        let im = self.add(self.mul(a.re, b.im), self.mul(a.im, b.re));
        self.ext(re, im)
    }

    /// Galois conjugate `re − im·√n`.
    pub fn ext_conj(&self, a: ExtElem) -> ExtElem {
        self.ext(a.re, self.neg(a.im))
    }

    /// Norm `a·conj(a)`, a base-field element.
    pub fn ext_norm(&self, a: ExtElem) -> FieldElem {
        let n = self.smallest_nonresidue();
        self.sub(self.mul(a.re, a.re), self.mul(n, self.mul(a.im, a.im)))
    }

    pub fn ext_inv(&self, a: ExtElem) -> Option<ExtElem> {
        let norm_inv = self.inv(self.ext_norm(a))?;
        let c = self.ext_conj(a);
        Some(self.ext(self.mul(c.re, norm_inv), self.mul(c.im, norm_inv)))
    }

    pub fn ext_arith(&self, a: ExtElem, b: ExtElem, op: ArithOp) -> Result<ExtElem> {
        for x in [a.re, a.im, b.re, b.im] {
            self.check(x)?;
        }
        Ok(match op {
            ArithOp::Add => self.ext_add(a, b),
            ArithOp::Sub => self.ext_sub(a, b),
            ArithOp::Mul => self.ext_mul(a, b),
            ArithOp::Div => self.ext_mul(a, self.ext_inv(b).ok_or(Error::DivisionByZero)?),
        })
    }

    /// A square root in GF(q²) of a base-field element (always exists).
    pub fn ext_sqrt(&self, a: FieldElem) -> ExtElem {
        match self.sqrt(a) {
            Some((s, _)) => self.embed(s),
            None => {
                // a = n·u² with u in the base field
                let u = self
                    .sqrt(self.div(a, self.smallest_nonresidue()).expect("n != 0"))
                    .expect("quotient of non-residues is a residue")
                    .0;
                self.ext(self.zero(), u)
            }
        }
    }

    /// Both roots of `x² − t·x + 1` in GF(q²), smaller first.
    pub fn ext_sqrt_roots(&self, t: FieldElem) -> [ExtElem; 2] {
        let two = self.from_int(2);
        let four = self.from_int(4);
        let disc = self.sub(self.mul(t, t), four);
        let s = self.ext_sqrt(disc);
        let half = self.inv(two).expect("odd characteristic");
        let t_half = self.embed(self.mul(t, half));
        let s_half = self.ext(self.mul(s.re, half), self.mul(s.im, half));
        let r1 = self.ext_add(t_half, s_half);
        let r2 = self.ext_sub(t_half, s_half);
        if r1 <= r2 {
            [r1, r2]
        } else {
            [r2, r1]
        }
    }
}

fn one_digits(k: u32) -> Vec<u32> {
    let mut d = vec![0; k as usize];
    d[0] = 1;
    d
}
