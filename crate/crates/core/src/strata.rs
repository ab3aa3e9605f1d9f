//! Six-way classification of r-tuples of SL₂(F_q) matrices.
//!
//! The classes are central (Z), diagonalizable over F_q (D), diagonalizable
//! only over GF(q²) (Dbar), conjugable into `{[[±1, *], [0, ±1]]}` (U),
//! reducible non-abelian (NR) and absolutely irreducible (AI).
//!
//! Classification only looks at eigen-data and common eigenlines; the
//! conjugator into normal form is built on request by [`witness`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::mat::{eigen, EigData, Eigenspaces, ExtMat2, Line, Mat2};

/// A point of `Hom(F_r, SL₂(F_q))`: an ordered tuple of determinant-1
/// matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rep {
    mats: Vec<Mat2>,
}

impl Rep {
    pub fn new(f: &FieldCtx, mats: Vec<Mat2>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::EmptyRep);
        }
        for m in &mats {
            if [m.a, m.b, m.c, m.d].iter().any(|&x| !f.contains(x)) {
                return Err(Error::MixedFields);
            }
            if m.det(f) != f.one() {
                return Err(Error::NotSpecialLinear);
            }
        }
        Ok(Rep { mats })
    }

    /// Wraps matrices already known to lie in SL₂ of one field.
    pub(crate) fn from_trusted(mats: Vec<Mat2>) -> Self {
        debug_assert!(!mats.is_empty());
        Rep { mats }
    }

    pub fn rank(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Mat2] {
        &self.mats
    }

    /// Simultaneous conjugation `g ρ g⁻¹`.
    pub fn conjugate_by(&self, f: &FieldCtx, g: &Mat2) -> Rep {
        let gi = g.inverse(f);
        Rep { mats: self.mats.iter().map(|m| g.mul(f, m).mul(f, &gi)).collect() }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumLabel {
    Z,
    D,
    Dbar,
    U,
    NR,
    AI,
}

impl StratumLabel {
    pub const ALL: [StratumLabel; 6] = [
        StratumLabel::Z,
        StratumLabel::D,
        StratumLabel::Dbar,
        StratumLabel::U,
        StratumLabel::NR,
        StratumLabel::AI,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StratumLabel::Z => "Z",
            StratumLabel::D => "D",
            StratumLabel::Dbar => "Dbar",
            StratumLabel::U => "U",
            StratumLabel::NR => "NR",
            StratumLabel::AI => "AI",
        }
    }

    /// Order of the stabilizer of every point of the stratum under
    /// conjugation by SL₂(F_q).
    pub fn stabilizer_order(self, q: u64) -> u64 {
        match self {
            StratumLabel::Z => q * (q * q - 1),
            StratumLabel::D => q - 1,
            StratumLabel::Dbar => q + 1,
            StratumLabel::U => 2 * q,
            StratumLabel::NR | StratumLabel::AI => 2,
        }
    }

    /// Strata whose orbits are closed and therefore give points of the
    /// character variety.
    pub fn has_closed_orbits(self) -> bool {
        !matches!(self, StratumLabel::U | StratumLabel::NR)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StratumLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StratumLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown stratum {s}")))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FieldScope {
    Base,
    Quadratic,
}

pub fn is_central(f: &FieldCtx, rep: &Rep) -> bool {
    rep.mats.iter().all(|m| m.is_central(f))
}

/// Pairwise commutation of the components.
pub fn is_abelian(f: &FieldCtx, rep: &Rep) -> bool {
    mats_commute(f, &rep.mats)
}

fn mats_commute(f: &FieldCtx, mats: &[Mat2]) -> bool {
    mats.iter()
        .enumerate()
        .all(|(i, a)| mats[i + 1..].iter().all(|b| a.commutes(f, b)))
}

fn eig_all(f: &FieldCtx, rep: &Rep) -> Vec<EigData> {
    rep.mats.iter().map(|m| eigen(f, m)).collect()
}

pub fn common_eigenvector(f: &FieldCtx, rep: &Rep, scope: FieldScope) -> Option<Line> {
    let eigs = eig_all(f, rep);
    let refs: Vec<&EigData> = eigs.iter().collect();
    common_eigenline_parts(f, &rep.mats, &refs, scope)
}

pub(crate) fn common_eigenline_parts(
    f: &FieldCtx,
    mats: &[Mat2],
    eigs: &[&EigData],
    scope: FieldScope,
) -> Option<Line> {
    let Some(pivot) = eigs.iter().position(|e| !e.is_central()) else {
        return Some(Line::e1(f));
    };
    let Eigenspaces::Lines(candidates) = &eigs[pivot].eigenspaces else {
        unreachable!("non-central matrix has finitely many eigenlines")
    };
    candidates
        .iter()
        .filter(|l| scope == FieldScope::Quadratic || l.is_base())
        .find(|l| mats.iter().all(|m| l.is_eigenline_of(f, m)))
        .copied()
}

pub fn classify(f: &FieldCtx, rep: &Rep) -> StratumLabel {
    let eigs = eig_all(f, rep);
    let refs: Vec<&EigData> = eigs.iter().collect();
    classify_parts(f, &rep.mats, &refs)
}

/// The decision cascade, on precomputed eigen-data.
pub(crate) fn classify_parts(f: &FieldCtx, mats: &[Mat2], eigs: &[&EigData]) -> StratumLabel {
    if eigs.iter().all(|e| e.is_central()) {
        return StratumLabel::Z;
    }
    if common_eigenline_parts(f, mats, eigs, FieldScope::Quadratic).is_none() {
        return StratumLabel::AI;
    }
    if !mats_commute(f, mats) {
        return StratumLabel::NR;
    }
    let two = f.from_int(2);
    let minus_two = f.neg(two);
    if eigs.iter().all(|e| e.trace == two || e.trace == minus_two) {
        return StratumLabel::U;
    }
    if diagonal_basis(f, mats, eigs, FieldScope::Base).is_some() {
        StratumLabel::D
    } else {
        StratumLabel::Dbar
    }
}

/// Two eigenlines shared by every component, taken from the first component
/// with distinct eigenvalues, restricted to `scope`.
fn diagonal_basis(f: &FieldCtx, mats: &[Mat2], eigs: &[&EigData], scope: FieldScope) -> Option<(Line, Line)> {
    if scope == FieldScope::Base && !eigs.iter().all(|e| e.rational && e.diagonalizable) {
        return None;
    }
    let pivot = eigs
        .iter()
        .find(|e| e.distinct_eigenvalues() && (scope == FieldScope::Quadratic || e.rational))?;
    let Eigenspaces::Lines(lines) = &pivot.eigenspaces else {
        return None;
    };
    let (l1, l2) = (lines[0], lines[1]);
    mats.iter()
        .all(|m| l1.is_eigenline_of(f, m) && l2.is_eigenline_of(f, m))
        .then_some((l1, l2))
}

/// A conjugator into normal form together with the conjugated tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: StratumLabel,
    /// Determinant-1 matrix `g`; has entries in GF(q) except for Dbar.
    pub conjugator: ExtMat2,
    /// `g ρ g⁻¹`: diagonal for Z, D, Dbar and upper-triangular for U, NR.
    pub normal_form: Vec<ExtMat2>,
}

impl Witness {
    pub fn base_conjugator(&self) -> Option<Mat2> {
        self.conjugator.to_base()
    }
}

/// Determinant-1 matrix whose columns span the given lines, in order.
fn basis_matrix(f: &FieldCtx, first: Line, second: Line) -> Option<ExtMat2> {
    let det = f.ext_sub(f.ext_mul(first.x, second.y), f.ext_mul(second.x, first.y));
    let s = f.ext_inv(det)?;
    Some(ExtMat2 { a: first.x, b: f.ext_mul(second.x, s), c: first.y, d: f.ext_mul(second.y, s) })
}

/// Determinant-1 matrix with first column spanning `line`.
fn completion(f: &FieldCtx, line: Line) -> ExtMat2 {
    if line.x.is_zero() {
        // (0, 1): use [[0, -1], [1, 0]]
        ExtMat2 { a: f.ext_zero(), b: f.ext_neg(f.ext_one()), c: f.ext_one(), d: f.ext_zero() }
    } else {
        ExtMat2 { a: f.ext_one(), b: f.ext_zero(), c: line.y, d: f.ext_one() }
    }
}

/// Builds the conjugator into normal form; `None` for AI.
pub fn witness(f: &FieldCtx, rep: &Rep) -> Option<Witness> {
    let eigs = eig_all(f, rep);
    let refs: Vec<&EigData> = eigs.iter().collect();
    let label = classify_parts(f, &rep.mats, &refs);
    let basis = match label {
        StratumLabel::AI => return None,
        StratumLabel::Z => ExtMat2::identity(f),
        StratumLabel::D | StratumLabel::Dbar => {
            let scope = if label == StratumLabel::D { FieldScope::Base } else { FieldScope::Quadratic };
            let (l1, l2) = diagonal_basis(f, &rep.mats, &refs, scope)?;
            basis_matrix(f, l1, l2)?
        }
        StratumLabel::U | StratumLabel::NR => {
            let line = common_eigenline_parts(f, &rep.mats, &refs, FieldScope::Base)?;
            completion(f, line)
        }
    };
    // basis has the common eigenlines as columns, so basis⁻¹ ρ basis is in normal form
    let conjugator = basis.inverse(f)?;
    let normal_form = rep
        .mats
        .iter()
        .map(|m| conjugator.conjugate(f, &m.to_ext(f)))
        .collect::<Option<Vec<_>>>()?;
    Some(Witness { label, conjugator, normal_form })
}
