//! Orientation-homogeneous sequences.
//!
//! A sequence is orientation-homogeneous when all of its `(d+1)`-tuples, taken
//! in sequence order, share one nonzero orientation. Such sequences sit in
//! convex position and the side of the hyperplane through `d` of its points is
//! decided by index parity alone.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    first_dependent_tuple, for_each_combination, orient_unchecked, OrientCache, Point, PointSequence,
    Scalar,
};

/// Common sign of all `(d+1)`-tuples in sequence order.
///
/// `Some(0)` for sequences too short to contain a tuple, `None` when the
/// sequence is not homogeneous.
pub fn homogeneity_sign(seq: &PointSequence) -> Option<i8> {
    let k = seq.dim() + 1;
    if seq.len() < k {
        return Some(0);
    }
    let mut sigma = 0i8;
    let cache = OrientCache::new(seq.points());
    let ok = for_each_combination(seq.len(), k, |idx| {
        let o = cache.orient(idx);
        if o == 0 {
            return false;
        }
        if sigma == 0 {
            sigma = o;
        }
        o == sigma
    });
    ok.then_some(sigma)
}

pub fn is_orientation_homogeneous(seq: &PointSequence) -> bool {
    homogeneity_sign(seq).is_some()
}

fn check_index_set(set: &[usize], len: usize) -> Result<()> {
    for w in set.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidInput(format!(
                "index set must be strictly increasing: {set:?}"
            )));
        }
    }
    if let Some(&last) = set.last() {
        if last >= len {
            return Err(Error::IndexOutOfRange { index: last, len });
        }
    }
    Ok(())
}

/// Combinatorial side prediction: with `j < j2` both outside `set`, the points
/// `p_j` and `p_j2` lie on the same side of the hyperplane through `P_set`
/// iff `[j, j2]` contains an even number of elements of `set`.
pub fn parity_same_side(set: &[usize], j: usize, j2: usize, len: usize) -> Result<bool> {
    check_index_set(set, len)?;
    for &x in [j, j2].iter() {
        if x >= len {
            return Err(Error::IndexOutOfRange { index: x, len });
        }
        if set.binary_search(&x).is_ok() {
            return Err(Error::IndexCollision(x));
        }
    }
    if j >= j2 {
        return Err(Error::InvalidInput(format!("need j < j2, got {j} >= {j2}")));
    }
    let between = set.iter().filter(|&&i| j < i && i < j2).count();
    Ok(between % 2 == 0)
}

/// Geometric side test: `p_j` and `p_j2` are on the same side of the
/// hyperplane spanned by `P_set` (`|set| = d`) iff appending each of them to
/// `P_set` yields the same orientation.
pub fn geometric_same_side(seq: &PointSequence, set: &[usize], j: usize, j2: usize) -> Result<bool> {
    check_index_set(set, seq.len())?;
    if set.len() != seq.dim() {
        return Err(Error::SizeMismatch(format!(
            "hyperplane index set needs {} indices, got {}",
            seq.dim(),
            set.len()
        )));
    }
    let side = |x: usize| -> Result<i8> {
        let mut tuple: Vec<&Point> = set.iter().map(|&i| &seq[i]).collect();
        tuple.push(seq.get(x)?);
        Ok(orient_unchecked(&tuple))
    };
    let (a, b) = (side(j)?, side(j2)?);
    if a == 0 || b == 0 {
        return Err(Error::GeneralPositionViolation(
            "point on the hyperplane".into(),
        ));
    }
    Ok(a == b)
}

/// A homogeneous subsequence together with how it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousSubsequence {
    /// Increasing positions into the host sequence.
    pub indices: Vec<usize>,
    /// Common orientation sign (0 when shorter than `d+1`).
    pub sign: i8,
    /// False when produced by the greedy fallback.
    pub optimal: bool,
}

/// Tuning for [`longest_homogeneous_subsequence`].
#[derive(Clone, Debug)]
pub struct ExtractOptions {
    /// Largest input handled by exact search when `d >= 3`.
    pub exact_cap: usize,
    /// Seed for the greedy fallback.
    pub seed: u64,
    /// Restarts for the greedy fallback.
    pub greedy_restarts: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            exact_cap: 14,
            seed: 0,
            greedy_restarts: 64,
        }
    }
}

/// Longest orientation-homogeneous subsequence of a sequence in general position.
///
/// Exact for `d <= 2` (dynamic programming) and for `d >= 3` up to
/// `opts.exact_cap` points (branch and bound); beyond the cap a seeded greedy
/// search is used and the result is flagged non-optimal.
pub fn longest_homogeneous_subsequence(
    seq: &PointSequence,
    opts: &ExtractOptions,
) -> Result<HomogeneousSubsequence> {
    if let Some(t) = first_dependent_tuple(seq) {
        return Err(Error::GeneralPositionViolation(format!(
            "affinely dependent tuple {t:?}"
        )));
    }
    let n = seq.len();
    let d = seq.dim();
    if n <= d {
        return Ok(HomogeneousSubsequence {
            indices: (0..n).collect(),
            sign: 0,
            optimal: true,
        });
    }
    let found = match d {
        1 => monotone_longest(seq),
        2 => {
            let table = OrientTable2::new(seq);
            if is_lex_sorted(seq) {
                convex_chain_longest(&table)
            } else {
                anchored_longest(&table)
            }
        }
        _ if n <= opts.exact_cap => exact_search(seq),
        _ => greedy_search(seq, opts),
    };
    debug_assert!(is_orientation_homogeneous(&seq.select(&found.indices)?));
    Ok(found)
}

fn is_lex_sorted(seq: &PointSequence) -> bool {
    seq.points().windows(2).all(|w| w[0] < w[1])
}

/// Pick the better of the two sign-specific results: longer wins, then `+1`.
fn better(a: HomogeneousSubsequence, b: HomogeneousSubsequence) -> HomogeneousSubsequence {
    if b.indices.len() > a.indices.len() {
        b
    } else {
        a
    }
}

fn monotone_longest(seq: &PointSequence) -> HomogeneousSubsequence {
    let n = seq.len();
    let mut best: Option<HomogeneousSubsequence> = None;
    for sigma in [1i8, -1] {
        // orient(p_i, p_j) = sign(p_i - p_j)
        let mut len = vec![1usize; n];
        let mut prev = vec![usize::MAX; n];
        for j in 0..n {
            for i in 0..j {
                if orient_unchecked(&[&seq[i], &seq[j]]) == sigma && len[i] + 1 > len[j] {
                    len[j] = len[i] + 1;
                    prev[j] = i;
                }
            }
        }
        let end = (0..n).max_by_key(|&j| (len[j], std::cmp::Reverse(j))).unwrap();
        let mut idx = vec![end];
        while prev[*idx.last().unwrap()] != usize::MAX {
            idx.push(prev[*idx.last().unwrap()]);
        }
        idx.reverse();
        let cand = HomogeneousSubsequence {
            indices: idx,
            sign: sigma,
            optimal: true,
        };
        best = Some(match best {
            None => cand,
            Some(b) => better(b, cand),
        });
    }
    best.unwrap()
}

/// Dense table of planar orientations `orient(p_i, p_j, p_k)`.
pub(crate) struct OrientTable2 {
    n: usize,
    signs: Vec<i8>,
}

impl OrientTable2 {
    pub(crate) fn new(seq: &PointSequence) -> Self {
        let n = seq.len();
        let mut signs = vec![0i8; n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let o = orient_unchecked(&[&seq[i], &seq[j], &seq[k]]);
                    // alternating extension to all permutations
                    for (a, b, c, s) in [
                        (i, j, k, o),
                        (j, k, i, o),
                        (k, i, j, o),
                        (j, i, k, -o),
                        (i, k, j, -o),
                        (k, j, i, -o),
                    ] {
                        signs[(a * n + b) * n + c] = s;
                    }
                }
            }
        }
        OrientTable2 { n, signs }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize, k: usize) -> i8 {
        self.signs[(i * self.n + j) * self.n + k]
    }
}

/// Longest chain whose consecutive triples share a sign. For lexicographically
/// sorted input such a chain is a convex cup or cap, hence homogeneous.
fn convex_chain_longest(t: &OrientTable2) -> HomogeneousSubsequence {
    let n = t.n;
    let mut best: Option<HomogeneousSubsequence> = None;
    for sigma in [1i8, -1] {
        // len[j][k]: longest chain ending with (j, k)
        let mut len = vec![2usize; n * n];
        let mut prev = vec![usize::MAX; n * n];
        let mut top = (2usize, 0usize, 1usize);
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    if t.get(i, j, k) == sigma && len[i * n + j] + 1 > len[j * n + k] {
                        len[j * n + k] = len[i * n + j] + 1;
                        prev[j * n + k] = i;
                    }
                }
                if len[j * n + k] > top.0 {
                    top = (len[j * n + k], j, k);
                }
            }
        }
        let (_, mut j, mut k) = top;
        let mut idx = vec![k, j];
        while prev[j * n + k] != usize::MAX {
            let i = prev[j * n + k];
            idx.push(i);
            k = j;
            j = i;
        }
        idx.reverse();
        let cand = HomogeneousSubsequence {
            indices: idx,
            sign: sigma,
            optimal: true,
        };
        best = Some(match best {
            None => cand,
            Some(b) => better(b, cand),
        });
    }
    best.unwrap()
}

/// Exact planar search for arbitrary sequence order.
///
/// With the first two chain points `a, b` fixed, a chain is homogeneous iff
/// every later point lies on the `sigma` side of `ab`, each step turns by
/// `sigma` around `a`, and consecutive triples turn by `sigma`: the points are
/// then angularly sorted about `a` within a half-plane and form a convex fan.
fn anchored_longest(t: &OrientTable2) -> HomogeneousSubsequence {
    let n = t.n;
    let mut best = HomogeneousSubsequence {
        indices: vec![0, 1],
        sign: t.get(0, 1, 2),
        optimal: true,
    };
    let mut len = vec![0usize; n * n];
    let mut prev = vec![usize::MAX; n * n];
    for sigma in [1i8, -1] {
        for a in 0..n {
            for b in a + 1..n {
                let cand: Vec<usize> = (b + 1..n).filter(|&l| t.get(a, b, l) == sigma).collect();
                if 2 + cand.len() <= best.indices.len() {
                    continue;
                }
                // states (j, k) with j in {b} ∪ cand, k in cand, j < k
                let mut top = (2usize, a, b);
                for (ki, &k) in cand.iter().enumerate() {
                    // predecessor j = b
                    len[b * n + k] = 3;
                    prev[b * n + k] = a;
                    for &j in &cand[..ki] {
                        len[j * n + k] = 0;
                        prev[j * n + k] = usize::MAX;
                        if t.get(a, j, k) != sigma {
                            continue;
                        }
                        let mut bestlen = 0usize;
                        let mut bestprev = usize::MAX;
                        // i = b or an earlier candidate
                        if len[b * n + j] > 0 && t.get(b, j, k) == sigma {
                            bestlen = len[b * n + j] + 1;
                            bestprev = b;
                        }
                        for &i in cand.iter().take_while(|&&i| i < j) {
                            let l = len[i * n + j];
                            if l > 0 && l + 1 > bestlen && t.get(i, j, k) == sigma {
                                bestlen = l + 1;
                                bestprev = i;
                            }
                        }
                        len[j * n + k] = bestlen;
                        prev[j * n + k] = bestprev;
                    }
                    for &j in std::iter::once(&b).chain(cand[..ki].iter()) {
                        let l = len[j * n + k];
                        if l > top.0 {
                            top = (l, j, k);
                        }
                    }
                }
                if top.0 > best.indices.len() {
                    let (_, mut j, mut k) = top;
                    let mut idx = vec![k, j];
                    while j != a {
                        let i = prev[j * n + k];
                        idx.push(i);
                        k = j;
                        j = i;
                    }
                    idx.reverse();
                    best = HomogeneousSubsequence {
                        indices: idx,
                        sign: sigma,
                        optimal: true,
                    };
                }
            }
        }
    }
    best
}

/// Checks the new point `l` against every `d`-subset of `chain`.
fn extends(seq: &PointSequence, chain: &[usize], l: usize, sigma: i8) -> bool {
    let d = seq.dim();
    if chain.len() < d {
        return true;
    }
    for_each_combination(chain.len(), d, |sub| {
        let mut tuple: Vec<&Point> = sub.iter().map(|&s| &seq[chain[s]]).collect();
        tuple.push(&seq[l]);
        orient_unchecked(&tuple) == sigma
    })
}

fn exact_search(seq: &PointSequence) -> HomogeneousSubsequence {
    let n = seq.len();
    let mut best = HomogeneousSubsequence {
        indices: (0..seq.dim()).collect(),
        sign: 0,
        optimal: true,
    };
    for sigma in [1i8, -1] {
        let mut chain = Vec::with_capacity(n);
        dfs(seq, sigma, 0, &mut chain, &mut best);
    }
    best
}

fn dfs(
    seq: &PointSequence,
    sigma: i8,
    from: usize,
    chain: &mut Vec<usize>,
    best: &mut HomogeneousSubsequence,
) {
    if chain.len() > best.indices.len() {
        *best = HomogeneousSubsequence {
            indices: chain.clone(),
            sign: sigma,
            optimal: true,
        };
    }
    for l in from..seq.len() {
        if chain.len() + (seq.len() - l) <= best.indices.len() {
            return;
        }
        if extends(seq, chain, l, sigma) {
            chain.push(l);
            dfs(seq, sigma, l + 1, chain, best);
            chain.pop();
        }
    }
}

fn greedy_search(seq: &PointSequence, opts: &ExtractOptions) -> HomogeneousSubsequence {
    let n = seq.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = HomogeneousSubsequence {
        indices: (0..seq.dim()).collect(),
        sign: 0,
        optimal: false,
    };
    let mut starts: Vec<usize> = (0..n).collect();
    for r in 0..opts.greedy_restarts.max(1) {
        if r % n == 0 {
            starts.shuffle(&mut rng);
        }
        let a = starts[r % n];
        for sigma in [1i8, -1] {
            let mut chain = vec![a];
            let mut order: Vec<usize> = (a + 1..n).collect();
            // randomized skipping diversifies restarts that share an anchor
            if r >= n {
                order.retain(|_| rand::Rng::gen_bool(&mut rng, 0.85));
            }
            for l in order {
                if extends(seq, &chain, l, sigma) {
                    chain.push(l);
                }
            }
            if chain.len() > best.indices.len() {
                best = HomogeneousSubsequence {
                    indices: chain,
                    sign: sigma,
                    optimal: false,
                };
            }
        }
    }
    best
}

/// Constants of the Ramsey-type bound `OT_d(n) <= tw_d(c_d n)`.
///
/// No numeric values are known for these constants, so they are plain
/// configuration (default 1 for the upper constant, 1/2 for the lower).
#[derive(Clone, Debug)]
pub struct OtConfig {
    upper: BTreeMap<usize, Scalar>,
    lower: BTreeMap<usize, Scalar>,
    default_upper: Scalar,
    default_lower: Scalar,
}

impl Default for OtConfig {
    fn default() -> Self {
        OtConfig {
            upper: BTreeMap::new(),
            lower: BTreeMap::new(),
            default_upper: Scalar::one(),
            default_lower: Scalar::new(1.into(), 2.into()),
        }
    }
}

impl OtConfig {
    /// Sets `c_d` (and keeps `c'_d < c_d` by halving the lower constant if needed).
    pub fn with_upper(mut self, d: usize, c: Scalar) -> Result<Self> {
        if c <= Scalar::from_integer(0.into()) {
            return Err(Error::InvalidInput("OT constant must be positive".into()));
        }
        if self.lower(d) >= c {
            self.lower.insert(d, &c / Scalar::from_integer(2.into()));
        }
        self.upper.insert(d, c);
        Ok(self)
    }

    pub fn with_lower(mut self, d: usize, c: Scalar) -> Result<Self> {
        if c <= Scalar::from_integer(0.into()) || c >= self.upper(d) {
            return Err(Error::InvalidInput(
                "lower OT constant must lie in (0, c_d)".into(),
            ));
        }
        self.lower.insert(d, c);
        Ok(self)
    }

    pub fn upper(&self, d: usize) -> Scalar {
        self.upper.get(&d).cloned().unwrap_or_else(|| self.default_upper.clone())
    }

    pub fn lower(&self, d: usize) -> Scalar {
        self.lower.get(&d).cloned().unwrap_or_else(|| self.default_lower.clone())
    }
}

/// Value of a tower function, kept symbolic once it exceeds `2^64`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerValue {
    Exact {
        #[serde(with = "biguint_string")]
        value: BigUint,
    },
    /// `tw_height(arg)`, too large to materialize.
    Symbolic {
        height: usize,
        #[serde(with = "biguint_string")]
        arg: BigUint,
    },
}

impl TowerValue {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            TowerValue::Exact { value } => Some(value),
            TowerValue::Symbolic { .. } => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, TowerValue::Symbolic { .. })
    }
}

impl std::fmt::Display for TowerValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TowerValue::Exact { value } => write!(f, "{value}"),
            TowerValue::Symbolic { height, arg } => write!(f, "tw_{height}({arg})"),
        }
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `tw_height(arg)` with `tw_1(x) = x` and `tw_{i+1}(x) = 2^{tw_i(x)}`.
pub fn tower(height: usize, arg: BigUint) -> TowerValue {
    assert!(height >= 1, "tower height starts at 1");
    let limit = BigUint::one() << 64u32;
    let mut v = arg.clone();
    for _ in 1..height {
        match v.to_u32() {
            Some(e) if e <= 64 => v = BigUint::one() << e,
            _ => return TowerValue::Symbolic { height, arg },
        }
    }
    if v > limit {
        TowerValue::Symbolic { height, arg }
    } else {
        TowerValue::Exact { value: v }
    }
}

/// Upper estimate `tw_d(ceil(c_d * n))` for `OT_d(n)`.
pub fn ot_estimate(d: usize, n: u64, cfg: &OtConfig) -> Result<TowerValue> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidInput("OT estimate needs d >= 1 and n >= 1".into()));
    }
    let x = cfg.upper(d) * Scalar::from_integer(n.into());
    let arg = x.numer().div_ceil(x.denom());
    let arg = arg
        .to_biguint()
        .ok_or_else(|| Error::InternalInvariantViolation("negative tower argument".into()))?;
    Ok(tower(d, arg))
}
