//! 2×2 matrices over GF(q) and GF(q²), SL₂ enumeration, eigen-data, and the
//! orders of GL_n / SL_n and of their representation spaces.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{ExtElem, FieldCtx, FieldElem};
use crate::poly::{CountPoly, Var};

/// Largest group order [`enumerate_sl2`] will materialize by default.
pub const DEFAULT_SL2_ENUM_CAP: u64 = 1 << 24;

/// Row-major 2×2 matrix `[[a, b], [c, d]]` over a base field.
///
/// The derived ordering compares `(a, b, c, d)` lexicographically in element
/// order, which is the canonical matrix order.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

/// 2×2 matrix over GF(q²).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtMat2 {
    pub a: ExtElem,
    pub b: ExtElem,
    pub c: ExtElem,
    pub d: ExtElem,
}

impl Mat2 {
    /// Builds an SL₂ matrix, rejecting determinant ≠ 1.
    pub fn new_sl2(f: &FieldCtx, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<Self> {
        for x in [a, b, c, d] {
            if !f.contains(x) {
                return Err(Error::MixedFields);
            }
        }
        let m = Mat2 { a, b, c, d };
        if m.det(f) != f.one() {
            return Err(Error::NotSpecialLinear);
        }
        Ok(m)
    }

    /// Convenience constructor from integers reduced mod p.
    pub fn from_ints(f: &FieldCtx, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new_sl2(f, f.from_int(a), f.from_int(b), f.from_int(c), f.from_int(d))
    }

    pub fn identity(f: &FieldCtx) -> Self {
        Self::scalar(f, f.one())
    }

    pub fn scalar(f: &FieldCtx, s: FieldElem) -> Self {
        Mat2 { a: s, b: f.zero(), c: f.zero(), d: s }
    }

    pub fn diag(f: &FieldCtx, x: FieldElem) -> Result<Self> {
        let inv = f.inv(x).ok_or(Error::DivisionByZero)?;
        Ok(Mat2 { a: x, b: f.zero(), c: f.zero(), d: inv })
    }

    pub fn mul(&self, f: &FieldCtx, o: &Mat2) -> Mat2 {
        Mat2 {
            a: f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            b: f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            c: f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            d: f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        }
    }

    /// Product with field checks.
    pub fn try_mul(&self, f: &FieldCtx, o: &Mat2) -> Result<Mat2> {
        if [self.a, self.b, self.c, self.d, o.a, o.b, o.c, o.d]
            .iter()
            .any(|&x| !f.contains(x))
        {
            return Err(Error::MixedFields);
        }
        Ok(self.mul(f, o))
    }

    /// Adjugate, which is the inverse for determinant-1 matrices.
    pub fn inverse(&self, f: &FieldCtx) -> Mat2 {
        Mat2 { a: self.d, b: f.neg(self.b), c: f.neg(self.c), d: self.a }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, f: &FieldCtx, g: &Mat2) -> Mat2 {
        g.mul(f, self).mul(f, &g.inverse(f))
    }

    pub fn trace(&self, f: &FieldCtx) -> FieldElem {
        f.add(self.a, self.d)
    }

    pub fn det(&self, f: &FieldCtx) -> FieldElem {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn commutes(&self, f: &FieldCtx, o: &Mat2) -> bool {
        self.mul(f, o) == o.mul(f, self)
    }

    /// True for ±I.
    pub fn is_central(&self, f: &FieldCtx) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && f.mul(self.a, self.a) == f.one()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn to_ext(&self, f: &FieldCtx) -> ExtMat2 {
        ExtMat2 { a: f.embed(self.a), b: f.embed(self.b), c: f.embed(self.c), d: f.embed(self.d) }
    }
}

impl ExtMat2 {
    pub fn identity(f: &FieldCtx) -> Self {
        ExtMat2 { a: f.ext_one(), b: f.ext_zero(), c: f.ext_zero(), d: f.ext_one() }
    }

    pub fn mul(&self, f: &FieldCtx, o: &ExtMat2) -> ExtMat2 {
        let dot = |x: ExtElem, y: ExtElem, z: ExtElem, w: ExtElem| f.ext_add(f.ext_mul(x, y), f.ext_mul(z, w));
        ExtMat2 {
            a: dot(self.a, o.a, self.b, o.c),
            b: dot(self.a, o.b, self.b, o.d),
            c: dot(self.c, o.a, self.d, o.c),
            d: dot(self.c, o.b, self.d, o.d),
        }
    }

    pub fn det(&self, f: &FieldCtx) -> ExtElem {
        f.ext_sub(f.ext_mul(self.a, self.d), f.ext_mul(self.b, self.c))
    }

    pub fn inverse(&self, f: &FieldCtx) -> Option<ExtMat2> {
        let di = f.ext_inv(self.det(f))?;
        Some(ExtMat2 {
            a: f.ext_mul(self.d, di),
            b: f.ext_mul(f.ext_neg(self.b), di),
            c: f.ext_mul(f.ext_neg(self.c), di),
            d: f.ext_mul(self.a, di),
        })
    }

    /// `self · m · self⁻¹` for a base-field `m`.
    pub fn conjugate(&self, f: &FieldCtx, m: &ExtMat2) -> Option<ExtMat2> {
        Some(self.mul(f, m).mul(f, &self.inverse(f)?))
    }

    pub fn is_base(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|x| x.is_base())
    }

    /// Projection to a base-field matrix when every entry lies in GF(q).
    pub fn to_base(&self) -> Option<Mat2> {
        self.is_base().then_some(Mat2 { a: self.a.re, b: self.b.re, c: self.c.re, d: self.d.re })
    }

    pub fn is_diagonal(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c.is_zero()
    }
}

/// All of SL₂(F_q) in lexicographic `(a, b, c, d)` order.
pub fn enumerate_sl2(f: &FieldCtx) -> Result<Vec<Mat2>> {
    enumerate_sl2_with_cap(f, DEFAULT_SL2_ENUM_CAP)
}

pub fn enumerate_sl2_with_cap(f: &FieldCtx, cap: u64) -> Result<Vec<Mat2>> {
    let q = f.q() as u64;
    let order = q * (q * q - 1);
    if order > cap {
        return Err(Error::CapExceeded { p: f.p() as u64, k: f.k(), cap });
    }
    let mut out = Vec::with_capacity(order as usize);
    let one = f.one();
    let minus_one = f.neg(one);
    for a in f.elements() {
        let a_inv = f.inv(a);
        for b in f.elements() {
            for c in f.elements() {
                let bc = f.mul(b, c);
                match a_inv {
                    Some(ai) => {
                        let d = f.mul(f.add(one, bc), ai);
                        out.push(Mat2 { a, b, c, d });
                    }
                    None if bc == minus_one => {
                        out.extend(f.elements().map(|d| Mat2 { a, b, c, d }));
                    }
                    None => {}
                }
            }
        }
    }
    debug_assert_eq!(out.len() as u64, order);
    Ok(out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupFamily {
    #[serde(rename = "GL")]
    Gl,
    #[serde(rename = "SL")]
    Sl,
}

/// `|GL_n(F_q)|` or `|SL_n(F_q)|` as a polynomial in q:
/// `q^{n(n-1)/2} · ∏ (q^k − 1)` with k from 1 (GL) or 2 (SL) up to n.
pub fn group_order_poly(family: GroupFamily, n: u32) -> CountPoly {
    let q = CountPoly::x(Var::Q);
    let start = match family {
        GroupFamily::Gl => 1,
        GroupFamily::Sl => 2,
    };
    let mut p = q.pow(n * n.saturating_sub(1) / 2);
    for k in start..=n {
        p = &p * &(&q.pow(k) - &CountPoly::constant(Var::Q, 1));
    }
    assert!(p.has_integer_coeffs(), "group order polynomial must be integral");
    p
}

pub fn group_order(family: GroupFamily, n: u32, q: i64) -> BigInt {
    group_order_poly(family, n)
        .eval_int(q)
        .expect("integer polynomial evaluates to an integer")
}

/// `|Hom(F_r, G)| = |G|^r`.
pub fn hom_count_poly(family: GroupFamily, n: u32, r: u32) -> CountPoly {
    group_order_poly(family, n).pow(r)
}

pub fn hom_count(family: GroupFamily, n: u32, r: u32, q: i64) -> BigInt {
    hom_count_poly(family, n, r)
        .eval_int(q)
        .expect("integer polynomial evaluates to an integer")
}

/// A line in GF(q²)², stored with its first nonzero coordinate scaled to 1.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Line {
    pub x: ExtElem,
    pub y: ExtElem,
}

impl Line {
    /// Canonical representative of the span of `(x, y)`; `None` for the zero
    /// vector.
    pub fn through(f: &FieldCtx, x: ExtElem, y: ExtElem) -> Option<Line> {
        if !x.is_zero() {
            let s = f.ext_inv(x)?;
            Some(Line { x: f.ext_one(), y: f.ext_mul(y, s) })
        } else if !y.is_zero() {
            Some(Line { x: f.ext_zero(), y: f.ext_one() })
        } else {
            None
        }
    }

    pub fn e1(f: &FieldCtx) -> Line {
        Line { x: f.ext_one(), y: f.ext_zero() }
    }

    pub fn e2(f: &FieldCtx) -> Line {
        Line { x: f.ext_zero(), y: f.ext_one() }
    }

    /// Both coordinates lie in the base field.
    pub fn is_base(&self) -> bool {
        self.x.is_base() && self.y.is_base()
    }

    /// Whether the line is invariant under `m`, i.e. `det[v | m·v] = 0`.
    pub fn is_eigenline_of(&self, f: &FieldCtx, m: &Mat2) -> bool {
        let m = m.to_ext(f);
        let mx = f.ext_add(f.ext_mul(m.a, self.x), f.ext_mul(m.b, self.y));
        let my = f.ext_add(f.ext_mul(m.c, self.x), f.ext_mul(m.d, self.y));
        f.ext_sub(f.ext_mul(self.x, my), f.ext_mul(self.y, mx)).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenspaces {
    /// The matrix is ±I and every line is an eigenline.
    All,
    /// One line (Jordan block) or two distinct lines.
    Lines(Vec<Line>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigData {
    pub trace: FieldElem,
    pub eigenvalues: [ExtElem; 2],
    pub rational: bool,
    pub diagonalizable: bool,
    pub eigenspaces: Eigenspaces,
}

impl EigData {
    pub fn is_central(&self) -> bool {
        matches!(self.eigenspaces, Eigenspaces::All)
    }

    pub fn distinct_eigenvalues(&self) -> bool {
        self.eigenvalues[0] != self.eigenvalues[1]
    }

    /// Eigenlines for display: ±I reports the two standard lines.
    pub fn display_lines(&self, f: &FieldCtx) -> Vec<Line> {
        match &self.eigenspaces {
            Eigenspaces::All => vec![Line::e1(f), Line::e2(f)],
            Eigenspaces::Lines(l) => l.clone(),
        }
    }
}

/// Eigenvalues, rationality, and eigenlines of a determinant-1 matrix,
/// computed over GF(q²).
pub fn eigen(f: &FieldCtx, m: &Mat2) -> EigData {
    let trace = m.trace(f);
    let eigenvalues = f.ext_sqrt_roots(trace);
    let disc = f.sub(f.mul(trace, trace), f.from_int(4));
    let rational = f.legendre(disc) >= 0;
    debug_assert_eq!(rational, eigenvalues.iter().all(|e| e.is_base()));

    if m.is_central(f) {
        return EigData { trace, eigenvalues, rational, diagonalizable: true, eigenspaces: Eigenspaces::All };
    }
    let me = m.to_ext(f);
    let mut lines: Vec<Line> = Vec::with_capacity(2);
    for &lambda in &eigenvalues {
        // kernel of [[a-λ, b], [c, d-λ]]; the matrix is nonzero since m is not scalar
        let r1 = (f.ext_sub(me.a, lambda), me.b);
        let r2 = (me.c, f.ext_sub(me.d, lambda));
        let line = if !(r1.0.is_zero() && r1.1.is_zero()) {
            Line::through(f, r1.1, f.ext_neg(r1.0))
        } else {
            Line::through(f, r2.1, f.ext_neg(r2.0))
        }
        .expect("non-scalar matrix has a one-dimensional eigenspace");
        if !lines.contains(&line) {
            lines.push(line);
        }
    }
    let diagonalizable = eigenvalues[0] != eigenvalues[1];
    debug_assert_eq!(lines.len(), if diagonalizable { 2 } else { 1 });
    EigData { trace, eigenvalues, rational, diagonalizable, eigenspaces: Eigenspaces::Lines(lines) }
}
