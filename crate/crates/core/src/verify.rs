//! Verification suites run by `sl2census verify`.
//!
//! Each suite enumerates (or samples) tuples at one `(q, r)` and returns a
//! pass/fail report carrying the first counterexample found. Failure is
//! data, not an error; errors are reserved for bad input and budget limits.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gf::FieldCtx;
use crate::mat::{ExtMat2, Mat2};
use crate::orbits::{
    census_detailed, check_budget, verify_borel, verify_galois, verify_uniform, CensusOptions, GroupTables,
};
use crate::strata::{witness, Rep, StratumLabel};

/// Exhaustive `(ρ, g)` conjugation checks are used up to this many pairs;
/// beyond it the partition suite samples.
pub const EXHAUSTIVE_PAIR_LIMIT: u128 = 4_000_000;

/// Upper bound on conjugations for the literal-definition search.
pub const LITERAL_SEARCH_LIMIT: u128 = 2_000_000;

pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Partition,
    Nomixing,
    Galois,
    Uniform,
    Borel,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Partition, Suite::Nomixing, Suite::Galois, Suite::Uniform, Suite::Borel];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Partition => "partition",
            Suite::Nomixing => "nomixing",
            Suite::Galois => "galois",
            Suite::Uniform => "uniform",
            Suite::Borel => "borel",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub census: CensusOptions,
    pub seed: u64,
    pub samples: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { census: CensusOptions::default(), seed: 0, samples: DEFAULT_SAMPLES }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub summary: String,
    pub counterexample: Option<Rep>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "pass" } else { "FAIL" };
        write!(f, "{status}: {}", self.summary)
    }
}

pub fn run_suite(f: &FieldCtx, r: u32, suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Partition => partition(f, r, opts),
        Suite::Nomixing => nomixing(f, r, opts),
        Suite::Galois => galois(f, r, opts),
        Suite::Uniform => uniform(f, r, opts),
        Suite::Borel => borel(f, r),
    }
}

/// Calls `visit` on every index tuple in lexicographic order until it
/// returns `false`.
fn for_each_tuple(n: u32, r: usize, mut visit: impl FnMut(&[u32]) -> bool) {
    let mut tuple = vec![0u32; r];
    loop {
        if !visit(&tuple) {
            return;
        }
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

pub fn partition(f: &FieldCtx, r: u32, opts: &VerifyOptions) -> Result<SuiteReport> {
    let detail = census_detailed(f, r, &opts.census)?;
    let tables = &detail.tables;
    let n = tables.order() as u128;
    let expected = n.pow(r);
    let total = detail.census.total_size() as u128;
    let mut pass = total == expected;
    let mut counterexample = None;

    let invariance = if n.pow(r + 1) <= EXHAUSTIVE_PAIR_LIMIT {
        let bad = conjugation_invariance_exhaustive(tables, r as usize);
        pass &= bad.is_none();
        counterexample = counterexample.or(bad);
        format!("conjugation invariance exhaustive over {} pairs", n.pow(r + 1))
    } else {
        let bad = conjugation_invariance_sampled(tables, r as usize, opts.samples, opts.seed);
        pass &= bad.is_none();
        counterexample = counterexample.or(bad);
        format!("conjugation invariance on {} sampled pairs (seed {})", opts.samples, opts.seed)
    };

    let literal = match literal_definitions(f, r)? {
        Some(report) => {
            pass &= report.pass;
            counterexample = counterexample.or(report.counterexample);
            format!(
                "literal definitions agree on {} tuples ({} conjugable into U while diagonalizable and non-central)",
                report.checked, report.u_overlap
            )
        }
        None => "literal definitions skipped (search too large)".to_string(),
    };

    Ok(SuiteReport {
        suite: Suite::Partition,
        pass,
        summary: format!("{total} tuples labelled, |G|^r = {expected}; {invariance}; {literal}"),
        counterexample,
    })
}

/// First tuple whose label changes under some conjugation, over all pairs.
pub fn conjugation_invariance_exhaustive(tables: &GroupTables<'_>, r: usize) -> Option<Rep> {
    let n = tables.order() as u32;
    let mut bad = None;
    let mut image = vec![0u32; r];
    for_each_tuple(n, r, |t| {
        let label = tables.classify(t);
        for g in 0..n {
            for (c, &m) in image.iter_mut().zip(t) {
                *c = tables.conj(g, m);
            }
            if tables.classify(&image) != label {
                bad = Some(tables.to_rep(t));
                return false;
            }
        }
        true
    });
    bad
}

/// Same check on `samples` uniformly random `(ρ, g)` pairs.
pub fn conjugation_invariance_sampled(tables: &GroupTables<'_>, r: usize, samples: u64, seed: u64) -> Option<Rep> {
    let n = tables.order() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuple = vec![0u32; r];
    for _ in 0..samples {
        tuple.iter_mut().for_each(|m| *m = rng.gen_range(0..n));
        let g = rng.gen_range(0..n);
        if tables.classify(&tuple) != tables.classify(&tables.conjugate_tuple(g, &tuple)) {
            return Some(tables.to_rep(&tuple));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralReport {
    pub pass: bool,
    pub checked: u64,
    /// Non-central tuples that are conjugable into U and also
    /// diagonalizable; the classifier assumes there are none.
    pub u_overlap: u64,
    pub counterexample: Option<Rep>,
}

/// SL₂(GF(q²)) as `(g, g⁻¹)` pairs.
fn ext_sl2(f: &FieldCtx) -> Vec<(ExtMat2, ExtMat2)> {
    let elems: Vec<_> = f.elements().flat_map(|re| f.elements().map(move |im| f.ext(re, im))).collect();
    let one = f.ext_one();
    let minus_one = f.ext_neg(one);
    let mut out = Vec::new();
    for &a in &elems {
        for &b in &elems {
            for &c in &elems {
                let bc = f.ext_mul(b, c);
                let ds: Vec<_> = match f.ext_inv(a) {
                    Some(ai) => vec![f.ext_mul(f.ext_add(one, bc), ai)],
                    None if bc == minus_one => elems.clone(),
                    None => continue,
                };
                for d in ds {
                    let g = ExtMat2 { a, b, c, d };
                    let gi = g.inverse(f).expect("det 1");
                    out.push((g, gi));
                }
            }
        }
    }
    out
}

/// Labels every tuple by searching for conjugators directly, following the
/// stratum definitions, and compares with [`crate::strata::classify`].
/// Returns `None` when the search would exceed [`LITERAL_SEARCH_LIMIT`].
pub fn literal_definitions(f: &FieldCtx, r: u32) -> Result<Option<LiteralReport>> {
    let q = f.q() as u128;
    let g_base = q * (q * q - 1);
    let g_ext = q * q * (q.pow(4) - 1);
    if g_base.pow(r) * (g_base + g_ext) * r as u128 > LITERAL_SEARCH_LIMIT {
        return Ok(None);
    }
    let tables = GroupTables::new(f)?;
    let base: Vec<(ExtMat2, ExtMat2)> = (0..tables.order() as u32)
        .map(|i| {
            let g = *tables.mat(i);
            (g.to_ext(f), g.inverse(f).to_ext(f))
        })
        .collect();
    let ext = ext_sl2(f);
    let one = f.ext_one();
    let minus_one = f.ext_neg(one);

    let conj_all = |g: &(ExtMat2, ExtMat2), mats: &[ExtMat2], pred: &dyn Fn(&ExtMat2) -> bool| {
        mats.iter().all(|m| pred(&g.0.mul(f, m).mul(f, &g.1)))
    };
    let diagonal = |m: &ExtMat2| m.is_diagonal();
    let upper = |m: &ExtMat2| m.is_upper_triangular();
    let unipotent = |m: &ExtMat2| m.is_upper_triangular() && m.a == m.d && (m.a == one || m.a == minus_one);

    let mut report = LiteralReport { pass: true, checked: 0, u_overlap: 0, counterexample: None };
    for_each_tuple(tables.order() as u32, r as usize, |t| {
        let rep = tables.to_rep(t);
        let mats: Vec<ExtMat2> = rep.mats().iter().map(|m| m.to_ext(f)).collect();
        let central = rep.mats().iter().all(|m| m.is_central(f));
        let in_d = base.iter().any(|g| conj_all(g, &mats, &diagonal));
        let in_dbar = in_d || ext.iter().any(|g| conj_all(g, &mats, &diagonal));
        let in_u = base.iter().any(|g| conj_all(g, &mats, &unipotent));
        let reducible = ext.iter().any(|g| conj_all(g, &mats, &upper));
        let literal = if central {
            StratumLabel::Z
        } else if in_d {
            StratumLabel::D
        } else if in_dbar {
            StratumLabel::Dbar
        } else if in_u {
            StratumLabel::U
        } else if reducible {
            StratumLabel::NR
        } else {
            StratumLabel::AI
        };
        if in_u && !central && in_dbar {
            report.u_overlap += 1;
        }
        report.checked += 1;
        if literal != tables.classify(t) || report.u_overlap > 0 {
            report.pass = false;
            report.counterexample = Some(rep);
            return false;
        }
        true
    });
    Ok(Some(report))
}

pub fn nomixing(f: &FieldCtx, r: u32, opts: &VerifyOptions) -> Result<SuiteReport> {
    check_budget(f.q() as u64, r, &opts.census)?;
    let tables = GroupTables::new(f)?;
    let mut checked = 0u64;
    let mut nr_conjugators = 0u64;
    let mut counterexample = None;

    for_each_tuple(tables.order() as u32, r as usize, |t| {
        let label = tables.classify(t);
        if label == StratumLabel::AI {
            return true;
        }
        checked += 1;
        let eigs: Vec<_> = t.iter().map(|&i| tables.eig(i)).collect();
        let rational_noncentral = eigs.iter().any(|e| e.rational && !e.is_central());
        let irrational = eigs.iter().any(|e| !e.rational);
        let abelian = t
            .iter()
            .enumerate()
            .all(|(i, &a)| t[i + 1..].iter().all(|&b| tables.mat(a).commutes(f, tables.mat(b))));

        // (1) rational non-central and irrational components never mix
        let part1 = !(rational_noncentral && irrational);
        // (2) an irrational eigenvalue forces Dbar
        let part2 = !irrational || label == StratumLabel::Dbar;
        // (3) all rational: never Dbar, and abelian ones are Z, U or D
        let part3 = irrational
            || (label != StratumLabel::Dbar
                && (!abelian || matches!(label, StratumLabel::Z | StratumLabel::U | StratumLabel::D)));
        let part3_nr = label != StratumLabel::NR || {
            nr_conjugators += 1;
            nr_triangularizes(f, &tables.to_rep(t))
        };
        if !(part1 && part2 && part3 && part3_nr) {
            counterexample = Some(tables.to_rep(t));
            return false;
        }
        true
    });

    Ok(SuiteReport {
        suite: Suite::Nomixing,
        pass: counterexample.is_none(),
        summary: format!(
            "{checked} reducible tuples checked, {nr_conjugators} NR tuples upper-triangularized over the base field"
        ),
        counterexample,
    })
}

/// The witness for an NR tuple must be a determinant-1 base-field matrix
/// conjugating every component to upper-triangular form.
fn nr_triangularizes(f: &FieldCtx, rep: &Rep) -> bool {
    let Some(g) = witness(f, rep).and_then(|w| w.base_conjugator()) else {
        return false;
    };
    g.det(f) == f.one() && rep.conjugate_by(f, &g).mats().iter().all(Mat2::is_upper_triangular)
}

pub fn galois(f: &FieldCtx, r: u32, opts: &VerifyOptions) -> Result<SuiteReport> {
    let detail = census_detailed(f, r, &opts.census)?;
    let g = verify_galois(&detail)?;
    let mut summary = format!("{} AI orbits, {} Galois pairs, {} fixed", g.ai_orbits, g.ai_pairs, g.ai_fixed);
    if g.moved_closed_reducible > 0 {
        summary.push_str(&format!(", {} reducible closed orbits moved", g.moved_closed_reducible));
    }
    Ok(SuiteReport { suite: Suite::Galois, pass: g.pass, summary, counterexample: g.counterexample })
}

pub fn uniform(f: &FieldCtx, r: u32, opts: &VerifyOptions) -> Result<SuiteReport> {
    let detail = census_detailed(f, r, &opts.census)?;
    let u = verify_uniform(&detail);
    let g = detail.census.group_order();
    // Burnside: |X/G|·|G| = m·|X| for a stratum acted on uniformly of order m
    let burnside = StratumLabel::ALL.iter().all(|&l| {
        let s = detail.census.stats(l);
        s.size == 0 || u.m_table[l.index()].is_some_and(|m| s.orbits * g == m * s.size)
    });
    let table: Vec<String> = StratumLabel::ALL
        .iter()
        .map(|&l| match u.m_table[l.index()] {
            Some(m) => format!("{l}:{m}"),
            None => format!("{l}:-"),
        })
        .collect();
    Ok(SuiteReport {
        suite: Suite::Uniform,
        pass: u.pass && burnside,
        summary: format!("{} orbits, m-table {}", detail.orbits.len(), table.join(" ")),
        counterexample: u.counterexample.map(|o| o.canonical),
    })
}

pub fn borel(f: &FieldCtx, r: u32) -> Result<SuiteReport> {
    let b = verify_borel(f, r)?;
    Ok(SuiteReport {
        suite: Suite::Borel,
        pass: b.pass,
        summary: format!(
            "{} of {} upper-triangular tuples in D, expected {}",
            b.counted, b.upper_triangular, b.expected
        ),
        counterexample: b.counterexample,
    })
}
