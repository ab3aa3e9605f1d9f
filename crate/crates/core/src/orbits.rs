//! Conjugation orbits of `SL₂(F_q)` on r-tuples: single-orbit queries, the
//! exhaustive per-stratum census, the Galois involution, and the checks that
//! are read off a census (uniform stabilizers, closed-orbit point counts,
//! Borel intersection).
//!
//! The census works on matrix indices. SL₂(F_q) is enumerated in canonical
//! order, so comparing index tuples lexicographically is the same as
//! comparing the matrix tuples, and `g ρ g⁻¹` is a table lookup per
//! component.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::mat::{eigen, enumerate_sl2, EigData, ExtMat2, Mat2};
use crate::strata::{classify, classify_parts, Rep, StratumLabel};

/// Default census work budget, in matrix multiplications.
pub const DEFAULT_WORK_BUDGET: u128 = 2_000_000_000;

/// Largest rank the census accepts.
pub const MAX_CENSUS_RANK: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub canonical: Rep,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    pub label: StratumLabel,
}

/// Enumerates the full conjugation orbit of `rep`.
pub fn orbit_of(f: &FieldCtx, rep: &Rep) -> Result<OrbitRecord> {
    let group = enumerate_sl2(f)?;
    let mut seen: HashSet<Rep> = HashSet::new();
    let mut stab = 0u64;
    for g in &group {
        let c = rep.conjugate_by(f, g);
        if &c == rep {
            stab += 1;
        }
        seen.insert(c);
    }
    let canonical = seen.iter().min().expect("orbit contains rep").clone();
    let label = classify(f, &canonical);
    Ok(OrbitRecord { canonical, orbit_size: seen.len() as u64, stabilizer_order: stab, label })
}

/// `σ ρ σ⁻¹` with `σ = diag(√n, 1/√n)`, computed in GF(q²).
pub fn galois_involution(f: &FieldCtx, rep: &Rep) -> Result<Rep> {
    let s = f.sqrt_nonresidue();
    let s_inv = f.ext_inv(s).expect("√n is nonzero");
    let sigma = ExtMat2 { a: s, b: f.ext_zero(), c: f.ext_zero(), d: s_inv };
    let mats = rep
        .mats()
        .iter()
        .map(|m| {
            sigma
                .conjugate(f, &m.to_ext(f))
                .and_then(|c| c.to_base())
                .ok_or(Error::EntryLeftBaseField)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Rep::from_trusted(mats))
}

/// Conjugation-invariant key: traces of the components followed by traces
/// of the pairwise products `A_i A_j`, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BucketKey(pub Vec<u32>);

/// Matrix-index view of SL₂(F_q) with a full conjugation table.
pub struct GroupTables<'f> {
    field: &'f FieldCtx,
    mats: Vec<Mat2>,
    eigs: Vec<EigData>,
    // conj[g * n + m] = index of g m g⁻¹
    conj: Vec<u32>,
}

impl<'f> GroupTables<'f> {
    pub fn new(field: &'f FieldCtx) -> Result<Self> {
        let mats = enumerate_sl2(field)?;
        let n = mats.len();
        if n as u64 > u32::MAX as u64 || (n as u128) * (n as u128) > 1 << 32 {
            return Err(Error::Invalid(format!("group of order {n} is too large for a conjugation table")));
        }
        let eigs = mats.iter().map(|m| eigen(field, m)).collect();
        let conj: Vec<u32> = mats
            .par_iter()
            .flat_map_iter(|g| {
                let gi = g.inverse(field);
                let mats = &mats;
                mats.iter().map(move |m| {
                    let c = g.mul(field, m).mul(field, &gi);
                    mats.binary_search(&c).expect("conjugate stays in SL2") as u32
                })
            })
            .collect();
        Ok(GroupTables { field, mats, eigs, conj })
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn mat(&self, i: u32) -> &Mat2 {
        &self.mats[i as usize]
    }

    pub fn eig(&self, i: u32) -> &EigData {
        &self.eigs[i as usize]
    }

    pub fn index_of(&self, m: &Mat2) -> Option<u32> {
        self.mats.binary_search(m).ok().map(|i| i as u32)
    }

    #[inline]
    pub fn conj(&self, g: u32, m: u32) -> u32 {
        self.conj[g as usize * self.mats.len() + m as usize]
    }

    pub fn to_rep(&self, tuple: &[u32]) -> Rep {
        Rep::from_trusted(tuple.iter().map(|&i| self.mats[i as usize]).collect())
    }

    pub fn to_tuple(&self, rep: &Rep) -> Option<Vec<u32>> {
        rep.mats().iter().map(|m| self.index_of(m)).collect()
    }

    pub fn classify(&self, tuple: &[u32]) -> StratumLabel {
        let mats: Vec<Mat2> = tuple.iter().map(|&i| self.mats[i as usize]).collect();
        let eigs: Vec<&EigData> = tuple.iter().map(|&i| &self.eigs[i as usize]).collect();
        classify_parts(self.field, &mats, &eigs)
    }

    pub fn bucket_key(&self, tuple: &[u32]) -> BucketKey {
        let f = self.field;
        let r = tuple.len();
        let mut key = Vec::with_capacity(r + r * (r - 1) / 2);
        key.extend(tuple.iter().map(|&i| self.mats[i as usize].trace(f).index() as u32));
        for i in 0..r {
            for j in i + 1..r {
                let (a, b) = (self.mat(tuple[i]), self.mat(tuple[j]));
                key.push(a.mul(f, b).trace(f).index() as u32);
            }
        }
        BucketKey(key)
    }

    pub fn conjugate_tuple(&self, g: u32, tuple: &[u32]) -> Vec<u32> {
        tuple.iter().map(|&m| self.conj(g, m)).collect()
    }

    /// Lexicographically smallest tuple in the orbit.
    pub fn canonical_form(&self, tuple: &[u32]) -> Vec<u32> {
        let mut best = tuple.to_vec();
        let mut cand = vec![0; tuple.len()];
        for g in 0..self.order() as u32 {
            for (c, &m) in cand.iter_mut().zip(tuple) {
                *c = self.conj(g, m);
            }
            if cand < best {
                best.copy_from_slice(&cand);
            }
        }
        best
    }

    /// `Some(stabilizer order)` if `tuple` is the minimum of its orbit,
    /// `None` as soon as a smaller conjugate turns up.
    #[inline]
    pub fn representative_stabilizer(&self, tuple: &[u32]) -> Option<u64> {
        let n = self.mats.len();
        let mut stab = 0;
        'g: for g in 0..n {
            let row = &self.conj[g * n..(g + 1) * n];
            for &m in tuple {
                let c = row[m as usize];
                if c < m {
                    return None;
                }
                if c > m {
                    continue 'g;
                }
            }
            stab += 1;
        }
        Some(stab)
    }
}

/// Estimated matrix multiplications for a full census: every tuple is
/// conjugated by every group element, two products per component.
pub fn census_work(q: u64, r: u32) -> u128 {
    let g = (q * (q * q - 1)) as u128;
    g.saturating_pow(r + 1).saturating_mul(2 * r as u128)
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub work_budget: u128,
    pub override_budget: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { threads: 0, work_budget: DEFAULT_WORK_BUDGET, override_budget: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StratumStats {
    pub size: u64,
    pub orbits: u64,
    /// Distinct stabilizer orders seen, ascending. A uniform stratum has
    /// exactly one.
    pub stab_orders: Vec<u64>,
}

impl StratumStats {
    /// The uniform stabilizer order, if the stratum is nonempty and uniform.
    pub fn stab(&self) -> Option<u64> {
        match self.stab_orders.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataCensus {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub r: u32,
    /// Indexed by [`StratumLabel::index`].
    pub strata: [StratumStats; 6],
}

impl StrataCensus {
    pub fn stats(&self, label: StratumLabel) -> &StratumStats {
        &self.strata[label.index()]
    }

    pub fn total_size(&self) -> u64 {
        self.strata.iter().map(|s| s.size).sum()
    }

    pub fn total_orbits(&self) -> u64 {
        self.strata.iter().map(|s| s.orbits).sum()
    }

    pub fn group_order(&self) -> u64 {
        let q = self.q as u64;
        q * (q * q - 1)
    }
}

/// One orbit found by the census, in index form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry {
    pub key: BucketKey,
    pub tuple: Vec<u32>,
    pub stabilizer_order: u64,
    pub label: StratumLabel,
}

/// A census together with every orbit representative, sorted by bucket key
/// and then by tuple.
pub struct CensusDetail<'f> {
    pub tables: GroupTables<'f>,
    pub census: StrataCensus,
    pub orbits: Vec<OrbitEntry>,
}

impl CensusDetail<'_> {
    pub fn record(&self, e: &OrbitEntry) -> OrbitRecord {
        OrbitRecord {
            canonical: self.tables.to_rep(&e.tuple),
            orbit_size: self.tables.order() as u64 / e.stabilizer_order,
            stabilizer_order: e.stabilizer_order,
            label: e.label,
        }
    }

    /// Number of distinct bucket keys.
    pub fn bucket_count(&self) -> usize {
        let mut n = 0;
        let mut last: Option<&BucketKey> = None;
        for e in &self.orbits {
            if last != Some(&e.key) {
                n += 1;
                last = Some(&e.key);
            }
        }
        n
    }
}

#[derive(Default)]
struct SlabAcc {
    sizes: [u64; 6],
    orbit_size_sums: [u64; 6],
    orbits: Vec<OrbitEntry>,
}

impl SlabAcc {
    fn merge(mut self, other: SlabAcc) -> SlabAcc {
        for i in 0..6 {
            self.sizes[i] += other.sizes[i];
            self.orbit_size_sums[i] += other.orbit_size_sums[i];
        }
        self.orbits.extend(other.orbits);
        self
    }
}

pub fn check_budget(q: u64, r: u32, opts: &CensusOptions) -> Result<()> {
    let needed = census_work(q, r);
    if needed > opts.work_budget && !opts.override_budget {
        return Err(Error::WorkBudgetExceeded { needed, budget: opts.work_budget });
    }
    Ok(())
}

/// Exhaustive census of `Hom(F_r, SL₂(F_q))`.
pub fn census(f: &FieldCtx, r: u32, threads: usize) -> Result<StrataCensus> {
    let opts = CensusOptions { threads, ..CensusOptions::default() };
    Ok(census_detailed(f, r, &opts)?.census)
}

pub fn census_detailed<'f>(f: &'f FieldCtx, r: u32, opts: &CensusOptions) -> Result<CensusDetail<'f>> {
    if r == 0 || r > MAX_CENSUS_RANK {
        return Err(Error::Invalid(format!("census rank must be in 1..={MAX_CENSUS_RANK}")));
    }
    check_budget(f.q() as u64, r, opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    pool.install(|| run_census(f, r))
}

fn run_census(f: &FieldCtx, r: u32) -> Result<CensusDetail<'_>> {
    let tables = GroupTables::new(f)?;
    let n = tables.order() as u32;
    let r = r as usize;

    // work units are slabs sharing a first component; the fold is order-free
    // and the orbit list is sorted afterwards, so thread count cannot matter
    let acc = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut acc = SlabAcc::default();
            let mut tuple = vec![0u32; r];
            tuple[0] = first;
            loop {
                let label = tables.classify(&tuple);
                acc.sizes[label.index()] += 1;
                if let Some(stab) = tables.representative_stabilizer(&tuple) {
                    acc.orbit_size_sums[label.index()] += n as u64 / stab;
                    acc.orbits.push(OrbitEntry {
                        key: tables.bucket_key(&tuple),
                        tuple: tuple.clone(),
                        stabilizer_order: stab,
                        label,
                    });
                }
                // odometer over components 1..r
                let mut i = r;
                loop {
                    i -= 1;
                    if i == 0 {
                        return acc;
                    }
                    tuple[i] += 1;
                    if tuple[i] < n {
                        break;
                    }
                    tuple[i] = 0;
                }
            }
        })
        .reduce(SlabAcc::default, SlabAcc::merge);

    let mut orbits = acc.orbits;
    orbits.sort_by(|a, b| (&a.key, &a.tuple).cmp(&(&b.key, &b.tuple)));

    // representatives are unique orbit minima, so no tuple may repeat
    let mut seen = HashSet::with_capacity(orbits.len());
    for o in &orbits {
        if !seen.insert(&o.tuple) {
            return Err(Error::Invalid("orbit representative collides across buckets (bug)".into()));
        }
    }

    let mut strata: [StratumStats; 6] = Default::default();
    for label in StratumLabel::ALL {
        let s = &mut strata[label.index()];
        s.size = acc.sizes[label.index()];
        if s.size != acc.orbit_size_sums[label.index()] {
            return Err(Error::Invalid(format!(
                "stratum {label}: {} tuples but orbits cover {} (bug)",
                s.size,
                acc.orbit_size_sums[label.index()]
            )));
        }
    }
    let mut stab_sets: [Vec<u64>; 6] = Default::default();
    for o in &orbits {
        let i = o.label.index();
        strata[i].orbits += 1;
        stab_sets[i].push(o.stabilizer_order);
    }
    for (s, mut set) in strata.iter_mut().zip(stab_sets) {
        set.sort_unstable();
        set.dedup();
        s.stab_orders = set;
    }

    let census = StrataCensus { p: f.p(), k: f.k(), q: f.q(), r: r as u32, strata };
    Ok(CensusDetail { tables, census, orbits })
}

/// Number of F_q-points of the character variety: closed orbits, with the
/// absolutely irreducible ones identified in Galois pairs.
pub fn closed_points(census: &StrataCensus) -> Result<u64> {
    let ai = census.stats(StratumLabel::AI).orbits;
    if ai % 2 == 1 {
        return Err(Error::OddIrreducibleOrbitCount(ai));
    }
    let reducible: u64 = [StratumLabel::Z, StratumLabel::D, StratumLabel::Dbar]
        .iter()
        .map(|&l| census.stats(l).orbits)
        .sum();
    Ok(reducible + ai / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformReport {
    pub pass: bool,
    /// Observed uniform stabilizer order per stratum (`None` when empty).
    pub m_table: [Option<u64>; 6],
    pub counterexample: Option<OrbitRecord>,
}

/// Every orbit's stabilizer must have its stratum's order.
pub fn verify_uniform(detail: &CensusDetail<'_>) -> UniformReport {
    let q = detail.census.q as u64;
    let bad = detail
        .orbits
        .iter()
        .find(|o| o.stabilizer_order != o.label.stabilizer_order(q));
    let mut m_table = [None; 6];
    for label in StratumLabel::ALL {
        m_table[label.index()] = detail.census.stats(label).stab();
    }
    UniformReport { pass: bad.is_none(), m_table, counterexample: bad.map(|o| detail.record(o)) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisReport {
    pub pass: bool,
    pub ai_orbits: u64,
    pub ai_pairs: u64,
    pub ai_fixed: u64,
    /// Orbits of Z, D, Dbar moved by the involution (should be none).
    pub moved_closed_reducible: u64,
    pub counterexample: Option<Rep>,
}

/// Applies the Galois involution to every orbit of a census.
pub fn verify_galois(detail: &CensusDetail<'_>) -> Result<GaloisReport> {
    let tables = &detail.tables;
    let f = tables.field();
    let index: HashMap<&[u32], usize> =
        detail.orbits.iter().enumerate().map(|(i, o)| (o.tuple.as_slice(), i)).collect();
    let images: Vec<usize> = detail
        .orbits
        .par_iter()
        .map(|o| -> Result<usize> {
            let image = galois_involution(f, &tables.to_rep(&o.tuple))?;
            let t = tables.to_tuple(&image).ok_or(Error::EntryLeftBaseField)?;
            let canon = tables.canonical_form(&t);
            index
                .get(canon.as_slice())
                .copied()
                .ok_or_else(|| Error::Invalid("Galois image is not a census orbit (bug)".into()))
        })
        .collect::<Result<_>>()?;

    let mut report = GaloisReport {
        pass: true,
        ai_orbits: 0,
        ai_pairs: 0,
        ai_fixed: 0,
        moved_closed_reducible: 0,
        counterexample: None,
    };
    let fail = |report: &mut GaloisReport, i: usize| {
        report.pass = false;
        if report.counterexample.is_none() {
            report.counterexample = Some(tables.to_rep(&detail.orbits[i].tuple));
        }
    };
    for (i, o) in detail.orbits.iter().enumerate() {
        let j = images[i];
        if images[j] != i || detail.orbits[j].label != o.label {
            fail(&mut report, i);
        }
        match o.label {
            StratumLabel::AI => {
                report.ai_orbits += 1;
                if j == i {
                    report.ai_fixed += 1;
                    fail(&mut report, i);
                } else if i < j {
                    report.ai_pairs += 1;
                }
            }
            StratumLabel::Z | StratumLabel::D | StratumLabel::Dbar if j != i => {
                report.moved_closed_reducible += 1;
                fail(&mut report, i);
            }
            _ => {}
        }
    }
    if report.ai_pairs * 2 != report.ai_orbits {
        report.pass = false;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelReport {
    pub pass: bool,
    pub upper_triangular: u64,
    pub counted: u64,
    pub expected: i128,
    pub counterexample: Option<Rep>,
}

/// Counts upper-triangular tuples in the D stratum and checks them against
/// `q((q−1)^r − 2^r)` and against the diagonal-compatibility description.
pub fn verify_borel(f: &FieldCtx, r: u32) -> Result<BorelReport> {
    if r == 0 {
        return Err(Error::Invalid("rank must be positive".into()));
    }
    let qq = f.q() as i128;
    let expected = qq * ((qq - 1).pow(r) - 2i128.pow(r));
    let borel: Vec<Mat2> = f
        .nonzero_elements()
        .flat_map(|a| {
            let ai = f.inv(a).expect("nonzero");
            f.elements().map(move |b| Mat2 { a, b, c: f.zero(), d: ai })
        })
        .collect();
    let total = (borel.len() as u64).pow(r);

    let one = f.one();
    let minus_one = f.neg(one);
    let is_pm1 = |x| x == one || x == minus_one;
    // slope b / (a − a⁻¹) for T* elements (a ≠ ±1, b ≠ 0)
    let slope = |m: &Mat2| -> Option<crate::gf::FieldElem> {
        if is_pm1(m.a) || m.b.is_zero() {
            None
        } else {
            Some(f.div(m.b, f.sub(m.a, m.d)).expect("a ≠ a⁻¹ for a ≠ ±1"))
        }
    };

    let mut counted = 0;
    let mut counterexample = None;
    let mut idx = vec![0usize; r as usize];
    for _ in 0..total {
        let mats: Vec<Mat2> = idx.iter().map(|&i| borel[i]).collect();
        let rep = Rep::from_trusted(mats);
        let in_d = classify(f, &rep) == StratumLabel::D;
        let central = rep.mats().iter().all(|m| m.is_central(f));

        // s_TD: components in T* ∪ Z with equal slopes, not all central
        let in_td = !central
            && rep.mats().iter().all(|m| m.is_central(f) || slope(m).is_some())
            && {
                let slopes: Vec<_> = rep.mats().iter().filter_map(slope).collect();
                slopes.windows(2).all(|w| w[0] == w[1])
            };
        let diag_noncentral = !central && rep.mats().iter().all(|m| m.is_diagonal());
        // non-central non-unipotent components share one slope (0 for diagonal ones)
        let compatible = {
            let s: Vec<_> = rep
                .mats()
                .iter()
                .filter(|m| !is_pm1(m.a))
                .map(|m| f.div(m.b, f.sub(m.a, m.d)).expect("a ≠ ±1"))
                .collect();
            s.windows(2).all(|w| w[0] == w[1])
        };
        if in_d {
            counted += 1;
        }
        if in_d != (in_td || diag_noncentral) || (in_d && !compatible) {
            counterexample.get_or_insert(rep);
        }

        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < borel.len() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(BorelReport {
        pass: counterexample.is_none() && counted as i128 == expected,
        upper_triangular: total,
        counted,
        expected,
        counterexample,
    })
}

/// Groups census orbits by bucket key, in key order.
pub fn buckets<'a>(detail: &'a CensusDetail<'_>) -> BTreeMap<&'a BucketKey, Vec<&'a OrbitEntry>> {
    let mut map: BTreeMap<&BucketKey, Vec<&OrbitEntry>> = BTreeMap::new();
    for o in &detail.orbits {
        map.entry(&o.key).or_default().push(o);
    }
    map
}
