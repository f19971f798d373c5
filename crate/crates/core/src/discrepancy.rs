//! Convex discrepancy oracles.
//!
//! The exact oracles reduce every convex set to the hull of a subset of
//! generators. Membership of each query point in such a hull is decided once
//! per small simplex (at most `d+1` generators, by Carathéodory) and stored as
//! bitmasks, so enumerating subsets is cheap integer work.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    check_same_dim, for_each_combination, orient_unchecked, Point, PointSequence, Scalar,
};

/// Default cap on `|P|` for [`one_sided_discrepancy_exact`] and [`eps_net_check`].
pub const ONE_SIDED_CAP: usize = 14;
/// Default cap on the ground set for [`two_sided_discrepancy_exact`].
pub const TWO_SIDED_CAP: usize = 18;
/// Hard limit on generator counts (bitmask width).
const MAX_GENERATORS: usize = 24;

/// A multiset of points stored as `(point, multiplicity)` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedPointSet {
    dim: usize,
    #[serde(serialize_with = "serialize_entries")]
    entries: Vec<(Point, u64)>,
}

fn serialize_entries<S: serde::Serializer>(
    e: &[(Point, u64)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for (p, m) in e {
        let coords: Vec<String> = p.coords().iter().map(crate::geometry::format_scalar).collect();
        seq.serialize_element(&(coords, m))?;
    }
    seq.end()
}

impl WeightedPointSet {
    pub fn new(dim: usize, entries: Vec<(Point, u64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyApproximant);
        }
        check_same_dim(dim, entries.iter().map(|(p, _)| p))?;
        if entries.iter().any(|(_, m)| *m == 0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        Ok(WeightedPointSet { dim, entries })
    }

    /// Every point of `seq` with multiplicity one.
    pub fn from_points(seq: &PointSequence) -> Result<Self> {
        Self::new(seq.dim(), seq.iter().map(|p| (p.clone(), 1)).collect())
    }

    /// Multiset from weighted points, merging equal points (first occurrence order).
    pub fn from_multiset(dim: usize, items: impl IntoIterator<Item = (Point, u64)>) -> Result<Self> {
        let mut pos: HashMap<Point, usize> = HashMap::new();
        let mut entries: Vec<(Point, u64)> = Vec::new();
        for (p, m) in items {
            match pos.get(&p) {
                Some(&i) => entries[i].1 += m,
                None => {
                    pos.insert(p.clone(), entries.len());
                    entries.push((p, m));
                }
            }
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(Point, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Same multiset with equal points merged.
    pub fn merged(&self) -> WeightedPointSet {
        Self::from_multiset(self.dim, self.entries.iter().cloned()).expect("nonempty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyMode {
    OneSided,
    TwoSided,
    EpsNet,
}

/// Serialized as `{"mode", "value": "p/q", "exact", "witness": [indices]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyReport {
    pub mode: DiscrepancyMode,
    #[serde(serialize_with = "crate::io::serialize_scalar")]
    pub value: Scalar,
    pub exact: bool,
    pub witness: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

/// Small-simplex membership, exact. Falls back to the LP for lower-dimensional
/// or degenerate simplices.
pub(crate) fn in_small_hull(q: &Point, pts: &[&Point]) -> bool {
    if pts.len() == 1 {
        return pts[0] == q;
    }
    for c in 0..q.dim() {
        let lo = pts.iter().all(|p| p[c] > q[c]);
        let hi = pts.iter().all(|p| p[c] < q[c]);
        if lo || hi {
            return false;
        }
    }
    let d = q.dim();
    if pts.len() == d + 1 {
        let base = orient_unchecked(pts);
        if base != 0 {
            let mut t = pts.to_vec();
            for i in 0..t.len() {
                t[i] = q;
                let s = orient_unchecked(&t);
                t[i] = pts[i];
                if s != 0 && s != base {
                    return false;
                }
            }
            return true;
        }
    }
    crate::geometry::in_hull_unchecked(q, pts.iter().copied())
}

/// For each query, the minimal generator subsets (size at most `d+1`) whose
/// hull contains it. `q ∈ conv S` iff one of these masks is a subset of `S`.
pub(crate) struct CoverTable {
    masks: Vec<Vec<u32>>,
}

impl CoverTable {
    pub(crate) fn new(gens: &[&Point], queries: &[&Point]) -> Self {
        assert!(gens.len() <= MAX_GENERATORS);
        let d = gens.first().map_or(0, |p| p.dim());
        let kmax = (d + 1).min(gens.len());
        let masks = queries
            .iter()
            .map(|q| {
                let mut found: Vec<u32> = Vec::new();
                for k in 1..=kmax {
                    for_each_combination(gens.len(), k, |c| {
                        let m = c.iter().fold(0u32, |acc, &i| acc | 1 << i);
                        if found.iter().any(|&f| f & m == f) {
                            return true;
                        }
                        let sub: Vec<&Point> = c.iter().map(|&i| gens[i]).collect();
                        if in_small_hull(q, &sub) {
                            found.push(m);
                        }
                        true
                    });
                }
                found
            })
            .collect();
        CoverTable { masks }
    }

    #[inline]
    pub(crate) fn covered(&self, query: usize, set: u32) -> bool {
        self.masks[query].iter().any(|&m| m & !set == 0)
    }
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Lexicographic order on the sorted index lists of two masks.
fn lex_less(a: u32, b: u32) -> bool {
    mask_indices(a) < mask_indices(b)
}

fn check_inputs(p: &PointSequence, a: &WeightedPointSet) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidInput("P is empty".into()));
    }
    if a.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: a.dim(),
        });
    }
    Ok(())
}

fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap || value > MAX_GENERATORS {
        return Err(Error::CapExceeded {
            what,
            value,
            cap: cap.min(MAX_GENERATORS),
        });
    }
    Ok(())
}

/// Signed objective scaled by `n * W`: `pc * W - aw * n`.
#[inline]
fn scaled(pc: u64, aw: u64, n: u64, w: u64) -> i128 {
    pc as i128 * w as i128 - aw as i128 * n as i128
}

fn value_of(num: i128, n: u64, w: u64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(n as i128 * w as i128))
}

struct SubsetEval {
    n: u64,
    w: u64,
    p_table: CoverTable,
    a_table: CoverTable,
    a_weights: Vec<u64>,
    p_len: usize,
}

impl SubsetEval {
    fn new(p: &PointSequence, gens: &[usize], a: &WeightedPointSet) -> Self {
        let g: Vec<&Point> = gens.iter().map(|&i| &p[i]).collect();
        let pq: Vec<&Point> = p.iter().collect();
        let aq: Vec<&Point> = a.entries().iter().map(|(x, _)| x).collect();
        SubsetEval {
            n: p.len() as u64,
            w: a.total_weight(),
            p_table: CoverTable::new(&g, &pq),
            a_table: CoverTable::new(&g, &aq),
            a_weights: a.entries().iter().map(|(_, m)| *m).collect(),
            p_len: p.len(),
        }
    }

    fn counts(&self, s: u32) -> (u64, u64) {
        if s == 0 {
            return (0, 0);
        }
        let pc = (0..self.p_len).filter(|&i| self.p_table.covered(i, s)).count() as u64;
        let aw = self
            .a_weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.a_table.covered(i, s))
            .map(|(_, m)| m)
            .sum();
        (pc, aw)
    }
}

fn best_subset(eval: &SubsetEval, g: usize) -> (i128, u32) {
    let mut best = (0i128, 0u32);
    for s in 1u32..(1u32 << g) {
        let (pc, aw) = eval.counts(s);
        let v = scaled(pc, aw, eval.n, eval.w);
        if v > best.0 || (v == best.0 && lex_less(s, best.1)) {
            best = (v, s);
        }
    }
    best
}

/// `max_{S ⊆ P} |P ∩ conv S|/|P| - w(A ∩ conv S)/w(A)` with the
/// lexicographically smallest maximizing `S` as witness (`S = ∅` gives `0`).
pub fn one_sided_discrepancy_exact(p: &PointSequence, a: &WeightedPointSet) -> Result<DiscrepancyReport> {
    one_sided_discrepancy_exact_with_cap(p, a, ONE_SIDED_CAP)
}

pub fn one_sided_discrepancy_exact_with_cap(
    p: &PointSequence,
    a: &WeightedPointSet,
    cap: usize,
) -> Result<DiscrepancyReport> {
    check_inputs(p, a)?;
    check_cap("|P| for the exact one-sided oracle", p.len(), cap)?;
    let gens: Vec<usize> = (0..p.len()).collect();
    let eval = SubsetEval::new(p, &gens, a);
    let (v, s) = best_subset(&eval, gens.len());
    Ok(DiscrepancyReport {
        mode: DiscrepancyMode::OneSided,
        value: value_of(v, eval.n, eval.w),
        exact: true,
        witness: mask_indices(s),
        pass: None,
    })
}

/// One-sided objective maximized over hulls of subsets of `generators` only
/// (indices into `P`), with full counts over `P` and `A`. A lower bound on the
/// one-sided discrepancy; `exact` is false unless the generators are all of `P`.
pub fn one_sided_over_generators(
    p: &PointSequence,
    a: &WeightedPointSet,
    generators: &[usize],
) -> Result<DiscrepancyReport> {
    check_inputs(p, a)?;
    check_cap("generator count", generators.len(), MAX_GENERATORS)?;
    for &i in generators {
        p.get(i)?;
    }
    let eval = SubsetEval::new(p, generators, a);
    let (v, s) = best_subset(&eval, generators.len());
    let mut all: Vec<usize> = generators.to_vec();
    all.sort_unstable();
    all.dedup();
    Ok(DiscrepancyReport {
        mode: DiscrepancyMode::OneSided,
        value: value_of(v, eval.n, eval.w),
        exact: all.len() == p.len(),
        witness: mask_indices(s).into_iter().map(|i| generators[i]).collect(),
        pass: None,
    })
}

/// Distinct locations of `P ∪ supp(A)` with their `P` counts and `A` weights.
struct Ground {
    points: Vec<Point>,
    pcount: Vec<u64>,
    aweight: Vec<u64>,
    p_loc: Vec<usize>,
    a_loc: Vec<usize>,
}

fn ground_set(p: &PointSequence, a: &WeightedPointSet) -> Ground {
    let mut pos: HashMap<Point, usize> = HashMap::new();
    let mut g = Ground {
        points: Vec::new(),
        pcount: Vec::new(),
        aweight: Vec::new(),
        p_loc: Vec::new(),
        a_loc: Vec::new(),
    };
    let mut locate = |x: &Point, g: &mut Ground| -> usize {
        if let Some(&l) = pos.get(x) {
            return l;
        }
        g.points.push(x.clone());
        g.pcount.push(0);
        g.aweight.push(0);
        pos.insert(x.clone(), g.points.len() - 1);
        g.points.len() - 1
    };
    for x in p.iter() {
        let l = locate(x, &mut g);
        g.pcount[l] += 1;
        g.p_loc.push(l);
    }
    for (x, m) in a.entries() {
        let l = locate(x, &mut g);
        g.aweight[l] += m;
        g.a_loc.push(l);
    }
    g
}

/// Enumerates convexly closed subsets `T` of the ground set (`conv T ∩ ground = T`),
/// passing `(mask, pc, aw)` to the callback.
fn for_each_closed(g: &Ground, mut f: impl FnMut(u32, u64, u64)) {
    let refs: Vec<&Point> = g.points.iter().collect();
    let table = CoverTable::new(&refs, &refs);
    let k = refs.len();
    for t in 0u32..(1u32 << k) {
        let closed = (0..k).all(|i| t >> i & 1 == 1 || t == 0 || !table.covered(i, t));
        if !closed {
            continue;
        }
        let pc = (0..k).filter(|&i| t >> i & 1 == 1).map(|i| g.pcount[i]).sum();
        let aw = (0..k).filter(|&i| t >> i & 1 == 1).map(|i| g.aweight[i]).sum();
        f(t, pc, aw);
    }
}

/// Indices into the concatenation `P ++ A.entries()` of the ground locations in `t`.
fn ground_witness(g: &Ground, t: u32) -> Vec<usize> {
    let n = g.p_loc.len();
    let mut w: Vec<usize> = (0..n).filter(|&i| t >> g.p_loc[i] & 1 == 1).collect();
    w.extend((0..g.a_loc.len()).filter(|&i| t >> g.a_loc[i] & 1 == 1).map(|i| n + i));
    w
}

/// `max_T | |T∩P|/|P| - w(T∩A)/w(A) |` over convexly closed `T` of `P ∪ supp(A)`.
/// The witness indexes the concatenation of `P` and the entries of `A`.
pub fn two_sided_discrepancy_exact(p: &PointSequence, a: &WeightedPointSet) -> Result<DiscrepancyReport> {
    two_sided_discrepancy_exact_with_cap(p, a, TWO_SIDED_CAP)
}

pub fn two_sided_discrepancy_exact_with_cap(
    p: &PointSequence,
    a: &WeightedPointSet,
    cap: usize,
) -> Result<DiscrepancyReport> {
    check_inputs(p, a)?;
    let g = ground_set(p, a);
    check_cap("ground set size for the exact two-sided oracle", g.points.len(), cap)?;
    let (n, w) = (p.len() as u64, a.total_weight());
    let mut best: Option<(i128, Vec<usize>)> = None;
    for_each_closed(&g, |t, pc, aw| {
        let v = scaled(pc, aw, n, w).abs();
        let better = match &best {
            None => true,
            Some((bv, bw)) => v > *bv || (v == *bv && ground_witness(&g, t) < *bw),
        };
        if better {
            best = Some((v, ground_witness(&g, t)));
        }
    });
    let (v, witness) = best.expect("the empty set is closed");
    Ok(DiscrepancyReport {
        mode: DiscrepancyMode::TwoSided,
        value: value_of(v, n, w),
        exact: true,
        witness,
        pass: None,
    })
}

/// The one-sided objective maximized over convexly closed subsets of the
/// ground set instead of hulls of subsets of `P`. Agrees with
/// [`one_sided_discrepancy_exact`]; kept as an independent cross-check.
pub fn one_sided_over_closed_sets(p: &PointSequence, a: &WeightedPointSet) -> Result<Scalar> {
    check_inputs(p, a)?;
    let g = ground_set(p, a);
    check_cap("ground set size", g.points.len(), TWO_SIDED_CAP)?;
    let (n, w) = (p.len() as u64, a.total_weight());
    let mut best = 0i128;
    for_each_closed(&g, |_, pc, aw| best = best.max(scaled(pc, aw, n, w)));
    Ok(value_of(best, n, w))
}

/// Searches `S ⊆ P` with `|P ∩ conv S|/|P| > eps` and `conv S ∩ supp(A) = ∅`.
/// `pass` is true when none exists; otherwise the witness is the
/// lexicographically smallest such `S` and `value` its `P` fraction.
pub fn eps_net_check(p: &PointSequence, a: &WeightedPointSet, eps: &Scalar) -> Result<DiscrepancyReport> {
    check_inputs(p, a)?;
    check_cap("|P| for the exact eps-net check", p.len(), ONE_SIDED_CAP)?;
    let gens: Vec<usize> = (0..p.len()).collect();
    let eval = SubsetEval::new(p, &gens, a);
    let n = p.len() as u64;
    let mut found: Option<(u32, u64)> = None;
    for s in 1u32..(1u32 << p.len()) {
        let (pc, aw) = eval.counts(s);
        if aw > 0 || Scalar::new(pc.into(), n.into()) <= *eps {
            continue;
        }
        if found.map_or(true, |(f, _)| lex_less(s, f)) {
            found = Some((s, pc));
        }
    }
    Ok(match found {
        None => DiscrepancyReport {
            mode: DiscrepancyMode::EpsNet,
            value: Scalar::zero(),
            exact: true,
            witness: vec![],
            pass: Some(true),
        },
        Some((s, pc)) => DiscrepancyReport {
            mode: DiscrepancyMode::EpsNet,
            value: Scalar::new(pc.into(), n.into()),
            exact: true,
            witness: mask_indices(s),
            pass: Some(false),
        },
    })
}

/// Output of [`proposition_witness`]. Indices are zero-based into `P`.
#[derive(Clone, Debug, Serialize)]
pub struct PropositionWitness {
    /// Generators of `C`: the points at even zero-based positions.
    pub c_generators: Vec<usize>,
    /// Generators of `C'`: those of `C` plus the apex of every empty triangle.
    pub c2_generators: Vec<usize>,
    /// One-based triangle indices `i` with `T_i ∩ A = ∅`.
    pub empty_triangles: Vec<usize>,
    #[serde(serialize_with = "crate::io::serialize_scalar")]
    pub gap: Scalar,
    /// Zero-based indices into the entries of `A` that lie in `C` (equal to those in `C'`).
    pub a_in_c: Vec<usize>,
    /// Whether the gap exceeds the requested epsilon.
    pub refutes: bool,
}

/// Two convex sets with the same trace on `A` whose `P` fractions differ by
/// `|I|/n`, for `P` in convex position listed in cyclic order (either sense).
pub fn proposition_witness(
    p: &PointSequence,
    a: &WeightedPointSet,
    eps: &Scalar,
) -> Result<PropositionWitness> {
    if p.dim() != 2 {
        return Err(Error::NotPlanar(p.dim()));
    }
    check_inputs(p, a)?;
    if p.len() >= 3 && crate::homogeneous::homogeneity_sign(p).unwrap_or(0) == 0 {
        return Err(Error::NotConvexPosition);
    }
    let n = p.len();
    let triangles = (n.saturating_sub(1)) / 2;
    let mut empty = Vec::new();
    for i in 1..=triangles {
        // T_i = (p_{2i-1}, p_{2i}, p_{2i+1}) in one-based terms
        let tri = [&p[2 * i - 2], &p[2 * i - 1], &p[2 * i]];
        if !a.entries().iter().any(|(x, _)| in_small_hull(x, &tri)) {
            empty.push(i);
        }
    }
    let c: Vec<usize> = (0..n).step_by(2).collect();
    let mut c2 = c.clone();
    c2.extend(empty.iter().map(|i| 2 * i - 1));
    c2.sort_unstable();
    let in_hull = |x: &Point, gens: &[usize]| {
        crate::geometry::in_hull_unchecked(x, gens.iter().map(|&i| &p[i]))
    };
    let a_in_c: Vec<usize> = (0..a.len()).filter(|&i| in_hull(&a.entries()[i].0, &c)).collect();
    let a_in_c2: Vec<usize> = (0..a.len()).filter(|&i| in_hull(&a.entries()[i].0, &c2)).collect();
    if a_in_c != a_in_c2 {
        return Err(Error::InternalInvariantViolation(
            "C and C' see different points of A".into(),
        ));
    }
    // each point of A lies in at most two triangles
    let lhs = 2 * empty.len() as i128;
    let rhs = n as i128 - 4 * a.total_weight() as i128 - 2;
    if lhs < rhs {
        return Err(Error::InternalInvariantViolation(format!(
            "|I| = {} below n/2 - 2w(A) - 1",
            empty.len()
        )));
    }
    // P in convex position, so the P traces are exactly the generator sets
    let pc = (0..n).filter(|&i| in_hull(&p[i], &c)).count();
    let pc2 = (0..n).filter(|&i| in_hull(&p[i], &c2)).count();
    if pc2 - pc != empty.len() {
        return Err(Error::InternalInvariantViolation(
            "P-fraction gap differs from |I|/n".into(),
        ));
    }
    let gap = Scalar::new(empty.len().into(), n.into());
    Ok(PropositionWitness {
        c_generators: c,
        c2_generators: c2,
        empty_triangles: empty,
        refutes: gap > *eps,
        gap,
        a_in_c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleStrategy {
    RandomSubsets,
    Halfspaces,
    LocalSearch,
}

impl std::str::FromStr for SampleStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_subsets" => Ok(Self::RandomSubsets),
            "halfspaces" => Ok(Self::Halfspaces),
            "local_search" => Ok(Self::LocalSearch),
            _ => Err(Error::InvalidInput(format!("unknown strategy {s:?}"))),
        }
    }
}

fn hull_counts(p: &PointSequence, a: &WeightedPointSet, s: &[usize]) -> (u64, u64) {
    if s.is_empty() {
        return (0, 0);
    }
    let gens: Vec<&Point> = s.iter().map(|&i| &p[i]).collect();
    let inside = |x: &Point| crate::geometry::in_hull_unchecked(x, gens.iter().copied());
    let pc = p.iter().filter(|x| inside(x)).count() as u64;
    let aw = a.entries().iter().filter(|(x, _)| inside(x)).map(|(_, m)| m).sum();
    (pc, aw)
}

/// Lower bound on the one-sided discrepancy (or the two-sided one when
/// `two_sided`) from exactly evaluated candidate convex sets.
pub fn sampled_discrepancy(
    p: &PointSequence,
    a: &WeightedPointSet,
    strategy: SampleStrategy,
    samples: usize,
    seed: u64,
    two_sided: bool,
) -> Result<DiscrepancyReport> {
    check_inputs(p, a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, w) = (p.len() as u64, a.total_weight());
    let score = |pc: u64, aw: u64| {
        let v = scaled(pc, aw, n, w);
        if two_sided {
            v.abs()
        } else {
            v
        }
    };
    let mut best: (i128, Vec<usize>) = (0, vec![]);
    let offer = |v: i128, s: Vec<usize>, best: &mut (i128, Vec<usize>)| {
        if v > best.0 || (v == best.0 && s < best.1) {
            *best = (v, s);
        }
    };
    match strategy {
        SampleStrategy::RandomSubsets => {
            for _ in 0..samples {
                let k = rng.gen_range(1..=p.len());
                let mut idx: Vec<usize> = (0..p.len()).collect();
                idx.shuffle(&mut rng);
                idx.truncate(k);
                idx.sort_unstable();
                let (pc, aw) = hull_counts(p, a, &idx);
                offer(score(pc, aw), idx, &mut best);
            }
        }
        SampleStrategy::Halfspaces => {
            let d = p.dim();
            let mut dirs: Vec<Vec<i64>> = Vec::new();
            for c in 0..d {
                for sgn in [1, -1] {
                    let mut e = vec![0; d];
                    e[c] = sgn;
                    dirs.push(e);
                }
            }
            while dirs.len() < samples.max(2 * d) {
                dirs.push((0..d).map(|_| rng.gen_range(-16..=16)).collect());
            }
            for dir in dirs.iter().take(samples.max(2 * d)) {
                let proj = |x: &Point| -> Scalar {
                    x.coords()
                        .iter()
                        .zip(dir)
                        .fold(Scalar::zero(), |acc, (c, &k)| acc + c * Scalar::from_integer(k.into()))
                };
                let pp: Vec<Scalar> = p.iter().map(proj).collect();
                let ap: Vec<Scalar> = a.entries().iter().map(|(x, _)| proj(x)).collect();
                let mut thresholds = pp.clone();
                thresholds.sort();
                thresholds.dedup();
                for tau in &thresholds {
                    // closed halfspace {x : <dir, x> <= tau}
                    let inside: Vec<usize> = (0..p.len()).filter(|&i| pp[i] <= *tau).collect();
                    let aw = (0..a.len())
                        .filter(|&i| ap[i] <= *tau)
                        .map(|i| a.entries()[i].1)
                        .sum();
                    let v = score(inside.len() as u64, aw);
                    offer(v, inside, &mut best);
                }
            }
        }
        SampleStrategy::LocalSearch => {
            let mut budget = samples;
            while budget > 0 {
                let mut cur: Vec<usize> = (0..p.len()).filter(|_| rng.gen_bool(0.5)).collect();
                if cur.is_empty() {
                    cur.push(rng.gen_range(0..p.len()));
                }
                let (pc, aw) = hull_counts(p, a, &cur);
                let mut cur_v = score(pc, aw);
                budget -= 1;
                offer(cur_v, cur.clone(), &mut best);
                let mut improved = true;
                while improved && budget > 0 {
                    improved = false;
                    for i in 0..p.len() {
                        if budget == 0 {
                            break;
                        }
                        let mut next = cur.clone();
                        match next.binary_search(&i) {
                            Ok(j) => {
                                if next.len() == 1 {
                                    continue;
                                }
                                next.remove(j);
                            }
                            Err(j) => next.insert(j, i),
                        }
                        let (pc, aw) = hull_counts(p, a, &next);
                        let v = score(pc, aw);
                        budget -= 1;
                        if v > cur_v {
                            cur = next;
                            cur_v = v;
                            offer(cur_v, cur.clone(), &mut best);
                            improved = true;
                        }
                    }
                }
            }
        }
    }
    Ok(DiscrepancyReport {
        mode: if two_sided {
            DiscrepancyMode::TwoSided
        } else {
            DiscrepancyMode::OneSided
        },
        value: value_of(best.0, n, w),
        exact: false,
        witness: best.1,
        pass: None,
    })
}
