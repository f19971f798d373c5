//! Regular partitions and the randomized independent-set routine.
//!
//! A partition `P_1, ..., P_M` is regular when, outside a small set of
//! exceptional `(d+1)`-sets of parts, the orientation of `d+1` points drawn
//! from distinct parts does not depend on which points are drawn. Parts are
//! read in part-index order: for `i_0 < ... < i_d` the tuple is
//! `(p_0 ∈ P_{i_0}, ..., p_d ∈ P_{i_d})`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    binomial, first_dependent_tuple, for_each_combination, OrientCache, PointSequence, Scalar,
};

/// Default cap on the number of `(d+1)`-sets of parts examined.
pub const TUPLE_CAP: u128 = 1_000_000;

/// Disjoint parts of zero-based indices into a point sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates disjointness, bounds (`< n`) and nonemptiness; sorts each part.
    pub fn new(mut parts: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for part in parts.iter_mut() {
            if part.is_empty() {
                return Err(Error::InvalidInput("empty part".into()));
            }
            part.sort_unstable();
            for &i in part.iter() {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
                if seen[i] {
                    return Err(Error::InvalidInput(format!("index {i} lies in two parts")));
                }
                seen[i] = true;
            }
        }
        Ok(Partition { parts })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            parts: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn covered(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// One `part_index: i_1 i_2 ...` line per part.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, part) in self.parts.iter().enumerate() {
            let _ = write!(s, "{k}:");
            for i in part {
                let _ = write!(s, " {i}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, n: usize) -> Result<Self> {
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("bad partition line {line:?}")))?;
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad part index in {line:?}")))?;
            let idx = rest
                .split_whitespace()
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad point index {x:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if parts.insert(k, idx).is_some() {
                return Err(Error::InvalidInput(format!("part {k} listed twice")));
            }
        }
        if parts.keys().enumerate().any(|(i, &k)| i != k) {
            return Err(Error::InvalidInput("part indices must be 0..M".into()));
        }
        Partition::new(parts.into_values().collect(), n)
    }
}

/// A partition accepted by [`check_partition`].
#[derive(Clone, Debug, Serialize)]
pub struct RegularPartition {
    pub partition: Partition,
    #[serde(serialize_with = "crate::io::serialize_scalar")]
    pub gamma: Scalar,
    /// Sign for each increasing, non-exceptional `(d+1)`-set of part indices.
    #[serde(serialize_with = "serialize_sign_table")]
    pub sign_table: BTreeMap<Vec<usize>, i8>,
    pub exceptional: Vec<Vec<usize>>,
}

fn serialize_sign_table<S: serde::Serializer>(
    t: &BTreeMap<Vec<usize>, i8>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for (k, v) in t {
        seq.serialize_element(&(k, v))?;
    }
    seq.end()
}

impl RegularPartition {
    /// Sign of an ordered tuple of distinct part indices (permutation parity applied).
    pub fn sign(&self, tuple: &[usize]) -> Option<i8> {
        let mut sorted = tuple.to_vec();
        let mut parity = false;
        // insertion sort tracks the permutation parity
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                parity = !parity;
                j -= 1;
            }
        }
        let s = *self.sign_table.get(&sorted)?;
        Some(if parity { -s } else { s })
    }
}

/// Outcome of [`check_partition`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PartitionCheck {
    Accepted(RegularPartition),
    Rejected {
        exceptional_count: usize,
        #[serde(serialize_with = "crate::io::serialize_scalar")]
        allowed: Scalar,
    },
}

impl PartitionCheck {
    pub fn accepted(self) -> Option<RegularPartition> {
        match self {
            PartitionCheck::Accepted(r) => Some(r),
            PartitionCheck::Rejected { .. } => None,
        }
    }
}

/// Constant sign over all cross-part choices, or `None` on the first disagreement.
/// `Err` carries a degenerate cross-part choice.
fn tuple_sign(cache: &OrientCache<'_>, parts: &[&[usize]]) -> std::result::Result<Option<i8>, Vec<usize>> {
    let k = parts.len();
    let mut pick = vec![0usize; k];
    let mut idx = vec![0usize; k];
    let mut sigma = 0i8;
    loop {
        for c in 0..k {
            idx[c] = parts[c][pick[c]];
        }
        let o = cache.orient(&idx);
        if o == 0 {
            return Err(idx);
        }
        if sigma != 0 && o != sigma {
            return Ok(None);
        }
        sigma = o;
        let mut c = k;
        loop {
            if c == 0 {
                return Ok(Some(sigma));
            }
            c -= 1;
            pick[c] += 1;
            if pick[c] < parts[c].len() {
                break;
            }
            pick[c] = 0;
        }
    }
}

/// Exact regularity check: every `(d+1)`-set of parts is tested over all point
/// choices; the non-constant ones are exceptional. Accepted iff their number is
/// at most `gamma * C(M, d+1)`. Only cross-part choices need to be in
/// general position; a degenerate one that is reached is an error.
pub fn check_partition(
    p: &PointSequence,
    partition: &Partition,
    gamma: &Scalar,
) -> Result<PartitionCheck> {
    check_partition_gp(p, partition, gamma)
}

pub(crate) fn check_partition_gp(
    p: &PointSequence,
    partition: &Partition,
    gamma: &Scalar,
) -> Result<PartitionCheck> {
    if partition.parts.iter().flatten().any(|&i| i >= p.len()) {
        return Err(Error::InvalidInput("partition refers past the end of P".into()));
    }
    let m = partition.len();
    let k = p.dim() + 1;
    let tuples = binomial(m, k);
    if tuples > TUPLE_CAP {
        return Err(Error::CapExceeded {
            what: "(d+1)-sets of parts",
            value: tuples.min(usize::MAX as u128) as usize,
            cap: TUPLE_CAP as usize,
        });
    }
    let cache = OrientCache::new(p.points());
    let mut sign_table = BTreeMap::new();
    let mut exceptional = Vec::new();
    let mut degenerate = None;
    for_each_combination(m, k, |c| {
        let parts: Vec<&[usize]> = c.iter().map(|&i| partition.parts[i].as_slice()).collect();
        match tuple_sign(&cache, &parts) {
            Ok(Some(s)) => {
                sign_table.insert(c.to_vec(), s);
            }
            Ok(None) => exceptional.push(c.to_vec()),
            Err(idx) => {
                degenerate = Some(idx);
                return false;
            }
        }
        true
    });
    if let Some(t) = degenerate {
        return Err(Error::GeneralPositionViolation(format!("tuple {t:?}")));
    }
    let allowed = gamma * Scalar::from_integer(tuples.into());
    if Scalar::from_integer(exceptional.len().into()) > allowed {
        return Ok(PartitionCheck::Rejected {
            exceptional_count: exceptional.len(),
            allowed,
        });
    }
    Ok(PartitionCheck::Accepted(RegularPartition {
        partition: partition.clone(),
        gamma: gamma.clone(),
        sign_table,
        exceptional,
    }))
}

/// Trims every part to the minimum part size by dropping its largest indices.
/// Returns the equalized partition and the dropped indices.
pub fn equalize_parts(partition: &Partition) -> Result<(Partition, Vec<usize>)> {
    let Some(min) = partition.parts.iter().map(Vec::len).min() else {
        return Ok((partition.clone(), vec![]));
    };
    let max = partition.parts.iter().map(Vec::len).max().unwrap();
    if max - min >= 2 {
        return Err(Error::UnbalancedInput(max - min));
    }
    let mut dropped = Vec::new();
    let parts = partition
        .parts
        .iter()
        .map(|part| {
            dropped.extend_from_slice(&part[min..]);
            part[..min].to_vec()
        })
        .collect();
    Ok((Partition { parts }, dropped))
}

/// `|P| <= 2 (1/gamma)^c`, decided exactly.
pub fn singleton_admissible(n: usize, gamma: &Scalar, c: u32) -> bool {
    // n * gamma^c <= 2
    let g: Scalar = Pow::pow(gamma, c);
    Scalar::from_integer(n.into()) * g <= Scalar::from_integer(2.into())
}

fn ceil_inverse(gamma: &Scalar) -> usize {
    let inv = gamma.recip();
    let c = num_integer::Integer::div_ceil(inv.numer(), inv.denom());
    c.to_usize().unwrap_or(usize::MAX)
}

/// Balanced chunks (sizes differ by at most one) of an ordering.
fn chunks(order: &[usize], m: usize) -> Vec<Vec<usize>> {
    let n = order.len();
    (0..m)
        .map(|i| order[i * n / m..(i + 1) * n / m].to_vec())
        .collect()
}

fn kd_split(p: &PointSequence, mut idx: Vec<usize>, m: usize, axis: usize, out: &mut Vec<Vec<usize>>) {
    if m <= 1 {
        out.push(idx);
        return;
    }
    idx.sort_by(|&a, &b| p[a][axis].cmp(&p[b][axis]).then(a.cmp(&b)));
    let left_m = m / 2;
    // keep the leaves balanced: the left side gets its exact share of points
    let cut = idx.len() * left_m / m;
    let right = idx.split_off(cut);
    let next = (axis + 1) % p.dim();
    kd_split(p, idx, left_m, next, out);
    kd_split(p, right, m - left_m, next, out);
}

/// Heuristic search for a regular equipartition.
///
/// Part counts run downward from `2 ceil((1/gamma)^c)` to `ceil(1/gamma)`,
/// each tried as coordinate slabs, kd median splits and a random balanced
/// partition. When `|P| <= 2 (1/gamma)^c` the singleton partition is always
/// admissible and ends the search.
pub fn heuristic_partition(
    p: &PointSequence,
    gamma: &Scalar,
    c: u32,
    seed: u64,
) -> Result<Partition> {
    if gamma <= &Scalar::zero() || gamma > &Scalar::one() {
        return Err(Error::InvalidInput("gamma must lie in (0, 1]".into()));
    }
    if let Some(t) = first_dependent_tuple(p) {
        return Err(Error::GeneralPositionViolation(format!("tuple {t:?}")));
    }
    heuristic_partition_gp(p, gamma, c, seed)
}

pub(crate) fn heuristic_partition_gp(
    p: &PointSequence,
    gamma: &Scalar,
    c: u32,
    seed: u64,
) -> Result<Partition> {
    let n = p.len();
    if singleton_admissible(n, gamma, c) {
        return Ok(Partition::singletons(n));
    }
    let lo = ceil_inverse(gamma).max(1);
    let inv_c: Scalar = Pow::pow(gamma.recip(), c);
    let hi_big = num_integer::Integer::div_ceil(inv_c.numer(), inv_c.denom()) * 2u32;
    let hi = hi_big.to_usize().unwrap_or(usize::MAX).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut schedule = Vec::new();
    let mut m = hi;
    while m >= lo && m >= 1 {
        schedule.push(m);
        if m == lo {
            break;
        }
        m = (m / 2).max(lo);
    }
    let mut lex: Vec<usize> = (0..n).collect();
    lex.sort_by(|&a, &b| p[a].cmp(&p[b]).then(a.cmp(&b)));
    for &m in &schedule {
        if binomial(m, p.dim() + 1) > TUPLE_CAP {
            continue;
        }
        let mut candidates = vec![chunks(&lex, m)];
        let mut kd = Vec::new();
        kd_split(p, (0..n).collect(), m, 0, &mut kd);
        candidates.push(kd);
        let mut shuffled: Vec<usize> = (0..n).collect();
        shuffled.shuffle(&mut rng);
        candidates.push(chunks(&shuffled, m));
        for parts in candidates {
            let part = Partition::new(parts, n)?;
            if let PartitionCheck::Accepted(_) = check_partition_gp(p, &part, gamma)? {
                return Ok(part);
            }
        }
    }
    Err(Error::NoPartitionFound(format!(
        "no candidate with {lo} <= M <= {hi} passed and |P| = {n} exceeds 2(1/gamma)^{c}"
    )))
}

/// An `r`-uniform hypergraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(r: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.len() != r {
                return Err(Error::InvalidInput(format!(
                    "edge {e:?} does not have {r} distinct vertices"
                )));
            }
            if let Some(&v) = e.last().filter(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: v, len: n });
            }
            clean.push(e);
        }
        clean.sort();
        clean.dedup();
        Ok(Hypergraph {
            r,
            n,
            edges: clean,
        })
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// `|E| / n^r`.
    pub fn density(&self) -> Scalar {
        Scalar::new(
            self.edges.len().into(),
            num_traits::pow(num_bigint::BigInt::from(self.n), self.r),
        )
    }

    /// Whether no edge lies inside `set` (sorted vertex list).
    pub fn is_independent(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &v in set {
            member[v] = true;
        }
        !self.edges.iter().any(|e| e.iter().all(|&v| member[v]))
    }

    /// Header `r n`, then one edge per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.r, self.n);
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let parse = |l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad integer {x:?}")))
                })
                .collect()
        };
        let header = parse(lines.next().unwrap_or(""))?;
        if header.len() != 2 {
            return Err(Error::InvalidInput("hypergraph header must be `r n`".into()));
        }
        let edges = lines.map(parse).collect::<Result<Vec<_>>>()?;
        Hypergraph::new(header[0], header[1], edges)
    }
}

/// `ceil(1/4 * beta^(-1/(r-1)))` with `beta = |E|/n^r`: the least `k` with
/// `(4k)^(r-1) |E| >= n^r`.
pub fn independent_set_target(h: &Hypergraph) -> usize {
    if h.edges.is_empty() {
        return h.n;
    }
    let e = BigUint::from(h.edges.len());
    let nr = num_traits::pow(BigUint::from(h.n), h.r);
    let ok = |k: usize| num_traits::pow(BigUint::from(4 * k), h.r - 1) * &e >= nr;
    let est = (h.n as f64).powf(h.r as f64 / (h.r - 1) as f64)
        / (h.edges.len() as f64).powf(1.0 / (h.r - 1) as f64)
        / 4.0;
    let mut k = (est.ceil() as usize).max(1);
    while k > 1 && ok(k - 1) {
        k -= 1;
    }
    while !ok(k) {
        k += 1;
    }
    k
}

/// Maximum number of sampling rounds before giving up.
const INDEPENDENT_SET_ROUNDS: usize = 10_000;

/// Random sampling with deletion: keep each vertex with probability
/// `p = beta^(-1/(r-1)) / (2n)`, then drop the smallest vertex of each edge
/// still inside the sample. Repeats until the size target is met.
pub fn independent_set(h: &Hypergraph, seed: u64) -> Result<Vec<usize>> {
    if h.r < 2 {
        return Err(Error::InvalidInput("uniformity must be at least 2".into()));
    }
    if h.edges.is_empty() {
        return Ok((0..h.n).collect());
    }
    // n >= 1/2 beta^(-1/(r-1))  <=>  (2n)^(r-1) |E| >= n^r
    let e = BigUint::from(h.edges.len());
    let nr = num_traits::pow(BigUint::from(h.n), h.r);
    if num_traits::pow(BigUint::from(2 * h.n), h.r - 1) * &e < nr {
        return Err(Error::PreconditionViolated(format!(
            "n = {} is below (1/2) beta^(-1/(r-1))",
            h.n
        )));
    }
    let target = independent_set_target(h);
    let inv_beta = nr.to_f64().unwrap_or(f64::INFINITY) / e.to_f64().unwrap_or(1.0);
    let prob = (inv_beta.powf(1.0 / (h.r - 1) as f64) / (2.0 * h.n as f64)).min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..INDEPENDENT_SET_ROUNDS {
        let mut member: Vec<bool> = (0..h.n).map(|_| rng.gen_bool(prob)).collect();
        for edge in &h.edges {
            if edge.iter().all(|&v| member[v]) {
                member[edge[0]] = false;
            }
        }
        let set: Vec<usize> = (0..h.n).filter(|&v| member[v]).collect();
        if set.len() >= target {
            if !h.is_independent(&set) {
                return Err(Error::InternalInvariantViolation(
                    "sampled set spans an edge".into(),
                ));
            }
            return Ok(set);
        }
    }
    Err(Error::InternalInvariantViolation(format!(
        "no independent set of size {target} after {INDEPENDENT_SET_ROUNDS} rounds"
    )))
}
