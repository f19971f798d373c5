//! Interval chains, stabbing tuples, and layered ε-approximating families.
//!
//! Everything here lives on the integer range `[t] = {1, ..., t}`; values are
//! plain integers, not array positions.
//!
//! A family member is stored as a strictly increasing `D`-tuple. Its dual view
//! is the `(D-1)`-chain `[x_1+1, x_2] ... [x_{D-1}+1, x_D]`, so a tuple may
//! start at `0` when its dual chain starts at `1`.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{format_scalar, parse_scalar, Scalar};

/// `k` consecutive, disjoint, nonempty intervals `[a_1, a_2-1] ... [a_k, a_{k+1}-1]`
/// with `1 <= a_1 < ... < a_{k+1} <= t+1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IntervalChain {
    boundaries: Vec<usize>,
    ambient: usize,
}

impl IntervalChain {
    pub fn new(boundaries: Vec<usize>, ambient: usize) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidInput(
                "an interval chain needs at least one interval".into(),
            ));
        }
        if boundaries[0] < 1 || *boundaries.last().unwrap() > ambient + 1 {
            return Err(Error::InvalidInput(format!(
                "chain boundaries {boundaries:?} leave [1, {}]",
                ambient + 1
            )));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "chain boundaries must increase: {boundaries:?}"
            )));
        }
        Ok(IntervalChain {
            boundaries,
            ambient,
        })
    }

    /// Chain from explicit consecutive intervals `[lo, hi]`.
    pub fn from_intervals(intervals: &[(usize, usize)], ambient: usize) -> Result<Self> {
        let mut b = Vec::with_capacity(intervals.len() + 1);
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            if hi < lo {
                return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
            }
            if i > 0 && lo != b[i] {
                return Err(Error::InvalidInput("intervals are not consecutive".into()));
            }
            if i == 0 {
                b.push(lo);
            }
            b.push(hi + 1);
        }
        IntervalChain::new(b, ambient)
    }

    /// `[1,1][2,2] ... [t,t]`.
    pub fn singletons(ambient: usize) -> Self {
        IntervalChain {
            boundaries: (1..=ambient + 1).collect(),
            ambient,
        }
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn intervals(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.boundaries.windows(2).map(|w| (w[0], w[1] - 1))
    }

    /// Zero-based interval containing `x`, if any.
    pub fn interval_of(&self, x: usize) -> Option<usize> {
        if x < self.boundaries[0] || x >= *self.boundaries.last().unwrap() {
            return None;
        }
        Some(self.boundaries.partition_point(|&a| a <= x) - 1)
    }
}

/// Strictly increasing integer tuple `x_1 < ... < x_D`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StabTuple(Vec<usize>);

impl StabTuple {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "tuple must be strictly increasing: {values:?}"
            )));
        }
        Ok(StabTuple(values))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// The dual chain `[x_1+1, x_2] ... [x_{D-1}+1, x_D]`.
    pub fn dual_chain(&self, ambient: usize) -> Result<IntervalChain> {
        IntervalChain::new(self.0.iter().map(|x| x + 1).collect(), ambient)
    }

    /// Inverse of [`StabTuple::dual_chain`].
    pub fn from_dual(chain: &IntervalChain) -> StabTuple {
        StabTuple(chain.boundaries.iter().map(|a| a - 1).collect())
    }
}

/// Whether each value of `x` lies in a different interval of `chain`.
pub fn stabs(x: &StabTuple, chain: &IntervalChain) -> Result<bool> {
    if let Some(&top) = x.0.last() {
        if top > chain.ambient {
            return Err(Error::AmbientMismatch {
                expected: chain.ambient,
                found: top,
            });
        }
    }
    Ok(stabs_unchecked(&x.0, &chain.boundaries))
}

fn stabs_unchecked(x: &[usize], boundaries: &[usize]) -> bool {
    if x.len() > boundaries.len() - 1 {
        return false;
    }
    let end = *boundaries.last().unwrap();
    let mut last: Option<usize> = None;
    for &v in x {
        if v < boundaries[0] || v >= end {
            return false;
        }
        let iv = boundaries.partition_point(|&a| a <= v) - 1;
        if last.is_some_and(|l| l >= iv) {
            return false;
        }
        last = Some(iv);
    }
    true
}

/// One member of a [`ChainFamily`], counted `weight` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub tuple: StabTuple,
    pub layer: usize,
    pub weight: u64,
}

/// Multiset of `D`-tuples over `[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainFamily {
    pub arity: usize,
    pub ambient: usize,
    #[serde(serialize_with = "crate::io::serialize_scalar")]
    pub epsilon: Scalar,
    /// Layer count `K` (zero for families without layer structure).
    pub layers: usize,
    /// Base multiplier `m` with `t = m (D-1)^K` (zero when not layered).
    pub multiplier: u64,
    pub members: Vec<FamilyMember>,
}

/// Smallest integer `K >= 0` with `e^K >= x`, decided with exact rational
/// bounds on `e^K` so the result never undershoots `ln x`.
pub fn ceil_ln(x: &Scalar) -> u64 {
    let one = Scalar::one();
    if *x <= one {
        return 0;
    }
    let mut k = x.to_f64().map_or(1, |f| f.ln().ceil().max(1.0) as u64);
    // walk down while e^(k-1) still certainly reaches x, up while e^k certainly misses it
    loop {
        if k > 0 && exp_compare(k - 1, x) != std::cmp::Ordering::Less {
            k -= 1;
        } else if exp_compare(k, x) == std::cmp::Ordering::Less {
            k += 1;
        } else {
            return k;
        }
    }
}

/// Compares `e^k` with the rational `x` (never equal for `k >= 1`).
fn exp_compare(k: u64, x: &Scalar) -> std::cmp::Ordering {
    if k == 0 {
        return Scalar::one().cmp(x);
    }
    let kk = Scalar::from_integer(BigInt::from(k));
    let mut terms = 2 * k as usize + 8;
    loop {
        let mut term = Scalar::one();
        let mut sum = Scalar::one();
        for n in 1..=terms {
            term = term * &kk / Scalar::from_integer(BigInt::from(n));
            sum += &term;
        }
        // tail <= next_term / (1 - k/(N+2))
        let next = &term * &kk / Scalar::from_integer(BigInt::from(terms + 1));
        let ratio = &kk / Scalar::from_integer(BigInt::from(terms + 2));
        let hi = &sum + next / (Scalar::one() - ratio);
        if sum > *x {
            return std::cmp::Ordering::Greater;
        }
        if hi < *x {
            return std::cmp::Ordering::Less;
        }
        terms *= 2;
    }
}

/// `K = ceil((D-1) ln(4/eps))` computed as the least `K` with `e^K >= (4/eps)^(D-1)`.
pub fn layer_count(arity: usize, epsilon: &Scalar) -> u64 {
    let base = Scalar::from_integer(4.into()) / epsilon;
    let x = num_traits::pow(base, arity - 1);
    ceil_ln(&x)
}

fn ceil_div_scalar(num: u64, eps: &Scalar) -> BigUint {
    let q = Scalar::from_integer(num.into()) / eps;
    let c = num_integer::Integer::div_ceil(q.numer(), q.denom());
    c.to_biguint().unwrap_or_default()
}

fn check_epsilon(eps: &Scalar) -> Result<()> {
    if *eps <= Scalar::zero() || *eps >= Scalar::one() {
        return Err(Error::EpsilonOutOfRange(format!(
            "{} (need 0 < eps < 1)",
            format_scalar(eps)
        )));
    }
    Ok(())
}

/// Family sizing without materializing members: `(K, m, t)` as big integers.
pub fn family_dimensions(
    arity: usize,
    epsilon: &Scalar,
    m_override: Option<u64>,
) -> Result<(u64, BigUint, BigUint)> {
    if arity < 3 {
        return Err(Error::ArityTooSmall(arity));
    }
    check_epsilon(epsilon)?;
    let k = layer_count(arity, epsilon);
    let m = match m_override {
        Some(m) if m >= 1 => BigUint::from(m),
        Some(_) => return Err(Error::InvalidInput("multiplier m must be positive".into())),
        None => ceil_div_scalar(4, epsilon),
    };
    let t = &m * num_traits::pow(BigUint::from(arity - 1), k as usize);
    Ok((k, m, t))
}

/// Largest ambient size for which [`build_family`] materializes members.
pub const MAX_BUILD_AMBIENT: u64 = 1 << 26;

/// The layered family: for each layer `k < K`, the `t/(D-1)^(k+1)` chains of
/// consecutive blocks of length `(D-1)^k`, each with weight `(D-2)^k`.
pub fn build_family(arity: usize, epsilon: &Scalar, m_override: Option<u64>) -> Result<ChainFamily> {
    let (k, m, t) = family_dimensions(arity, epsilon, m_override)?;
    let t = t.to_u64().filter(|&t| t <= MAX_BUILD_AMBIENT).ok_or(Error::CapExceeded {
        what: "family ambient t",
        value: t.to_usize().unwrap_or(usize::MAX),
        cap: MAX_BUILD_AMBIENT as usize,
    })?;
    let m = m.to_u64().unwrap();
    layered_family(arity, k as usize, m, epsilon.clone(), t)
}

/// Layered family for explicit `K` and `m` (no admissibility check on `m`).
pub fn layered_family(
    arity: usize,
    layers: usize,
    multiplier: u64,
    epsilon: Scalar,
    ambient: u64,
) -> Result<ChainFamily> {
    if arity < 3 {
        return Err(Error::ArityTooSmall(arity));
    }
    let step = (arity - 1) as u64;
    let expected = (step as u128).checked_pow(layers as u32).map(|p| p * multiplier as u128);
    if expected != Some(ambient as u128) {
        return Err(Error::InvalidInput(format!(
            "t = {ambient} is not m (D-1)^K for m = {multiplier}, K = {layers}"
        )));
    }
    let mut members = Vec::new();
    let mut block = 1u64; // (D-1)^k
    let mut weight = 1u64; // (D-2)^k
    for layer in 0..layers {
        let span = block * step;
        for i in 0..ambient / span {
            let start = i * span; // chain covers [start+1, start+span]
            let tuple: Vec<usize> = (0..=step).map(|j| (start + j * block) as usize).collect();
            members.push(FamilyMember {
                tuple: StabTuple(tuple),
                layer,
                weight,
            });
        }
        block = span;
        weight = weight.checked_mul(step - 1).ok_or_else(|| {
            Error::PreconditionViolated("layer weight overflows u64".into())
        })?;
    }
    Ok(ChainFamily {
        arity,
        ambient: ambient as usize,
        epsilon,
        layers,
        multiplier,
        members,
    })
}

/// Every increasing `D`-tuple of `[1, t]` once (an unlayered family).
pub fn complete_family(arity: usize, ambient: usize, epsilon: Scalar) -> Result<ChainFamily> {
    if arity == 0 || arity > ambient {
        return Err(Error::InvalidInput(format!(
            "no increasing {arity}-tuples in [1, {ambient}]"
        )));
    }
    let mut members = Vec::new();
    crate::geometry::for_each_combination(ambient, arity, |c| {
        members.push(FamilyMember {
            tuple: StabTuple(c.iter().map(|x| x + 1).collect()),
            layer: 0,
            weight: 1,
        });
        true
    });
    Ok(ChainFamily {
        arity,
        ambient,
        epsilon,
        layers: 0,
        multiplier: 0,
        members,
    })
}

impl ChainFamily {
    /// `|F|` counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.members.iter().map(|m| m.weight).sum()
    }

    /// Members whose values all lie in `[1, t]` (a tuple starting at `0` stabs
    /// no chain of `[t]`).
    pub fn live_members(&self) -> impl Iterator<Item = &FamilyMember> {
        self.members.iter().filter(|m| m.tuple.0[0] >= 1)
    }

    /// Members of one layer.
    pub fn layer(&self, k: usize) -> impl Iterator<Item = &FamilyMember> {
        self.members.iter().filter(move |m| m.layer == k)
    }

    /// Text form: header `D t epsilon K m`, then one `k w x_1 ... x_D` line per member.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {} {}\n",
            self.arity,
            self.ambient,
            format_scalar(&self.epsilon),
            self.layers,
            self.multiplier
        );
        for m in &self.members {
            let _ = write!(s, "{} {}", m.layer, m.weight);
            for x in &m.tuple.0 {
                let _ = write!(s, " {x}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty family file".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 {
            return Err(Error::InvalidInput(format!("bad family header {header:?}")));
        }
        let num = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer {s:?}")))
        };
        let arity = num(h[0])? as usize;
        let ambient = num(h[1])? as usize;
        let epsilon = parse_scalar(h[2])?;
        let layers = num(h[3])? as usize;
        let multiplier = num(h[4])?;
        let mut members = Vec::new();
        for line in lines {
            let f: Vec<u64> = line.split_whitespace().map(num).collect::<Result<_>>()?;
            if f.len() != arity + 2 {
                return Err(Error::InvalidInput(format!("bad member line {line:?}")));
            }
            let tuple = StabTuple::new(f[2..].iter().map(|&x| x as usize).collect())?;
            if tuple.0.last().is_some_and(|&x| x > ambient) {
                return Err(Error::AmbientMismatch {
                    expected: ambient,
                    found: *tuple.0.last().unwrap(),
                });
            }
            if f[1] == 0 {
                return Err(Error::InvalidInput("member weight must be positive".into()));
            }
            members.push(FamilyMember {
                tuple,
                layer: f[0] as usize,
                weight: f[1],
            });
        }
        Ok(ChainFamily {
            arity,
            ambient,
            epsilon,
            layers,
            multiplier,
            members,
        })
    }
}

fn stab_weight(family: &ChainFamily, boundaries: &[usize]) -> u64 {
    family
        .members
        .iter()
        .filter(|m| stabs_unchecked(&m.tuple.0, boundaries))
        .map(|m| m.weight)
        .sum()
}

/// Weighted fraction of the family stabbing `chain` (zero for an empty family).
pub fn family_stab_fraction(family: &ChainFamily, chain: &IntervalChain) -> Result<Scalar> {
    if family.ambient != chain.ambient {
        return Err(Error::AmbientMismatch {
            expected: family.ambient,
            found: chain.ambient,
        });
    }
    let total = family.size();
    if total == 0 {
        return Ok(Scalar::zero());
    }
    Ok(Scalar::new(
        stab_weight(family, &chain.boundaries).into(),
        total.into(),
    ))
}

/// Verification strategy for [`verify_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub samples: usize,
    pub local_search_restarts: usize,
    pub seed: u64,
    /// Largest `t` accepted in exhaustive mode.
    pub exhaustive_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerifyMode::Sampled,
            samples: 10_000,
            local_search_restarts: 100,
            seed: 0,
            exhaustive_cap: 20,
        }
    }
}

/// Outcome of [`verify_family`]; verified iff `worst_margin >= 0`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    #[serde(serialize_with = "crate::io::serialize_scalar")]
    pub worst_margin: Scalar,
    pub witness: IntervalChain,
    pub chains_checked: u64,
}

impl FamilyReport {
    pub fn verified(&self) -> bool {
        self.worst_margin >= Scalar::zero()
    }
}

struct MarginEval<'a> {
    family: &'a ChainFamily,
    total: u64,
    t: usize,
}

impl MarginEval<'_> {
    /// `stab fraction - (l/t - eps)` for the chain with these boundaries.
    fn margin(&self, boundaries: &[usize]) -> Scalar {
        let frac = if self.total == 0 {
            Scalar::zero()
        } else {
            Scalar::new(
                stab_weight(self.family, boundaries).into(),
                self.total.into(),
            )
        };
        let l = boundaries.len() - 1;
        frac - Scalar::new(l.into(), self.t.into()) + &self.family.epsilon
    }
}

fn fold_min(best: &mut Option<(Scalar, Vec<usize>)>, margin: Scalar, b: &[usize]) {
    let replace = match best {
        None => true,
        Some((m, w)) => margin < *m || (margin == *m && b < w.as_slice()),
    };
    if replace {
        *best = Some((margin, b.to_vec()));
    }
}

/// Minimum over chains of `stab fraction - (l(I)/t - eps)`, with a witness chain.
pub fn verify_family(family: &ChainFamily, opts: &VerifyOptions) -> Result<FamilyReport> {
    let t = family.ambient;
    if t == 0 {
        return Err(Error::InvalidInput("family over an empty range".into()));
    }
    let eval = MarginEval {
        family,
        total: family.size(),
        t,
    };
    let mut best: Option<(Scalar, Vec<usize>)> = None;
    let mut checked = 0u64;
    match opts.mode {
        VerifyMode::Exhaustive => {
            if t > opts.exhaustive_cap {
                return Err(Error::CapExceeded {
                    what: "ambient t for exhaustive chain enumeration",
                    value: t,
                    cap: opts.exhaustive_cap,
                });
            }
            // every subset of [1, t+1] with at least two elements
            let universe = t + 1;
            for mask in 0u64..(1u64 << universe) {
                if mask.count_ones() < 2 {
                    continue;
                }
                let b: Vec<usize> = (0..universe)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| i + 1)
                    .collect();
                let m = eval.margin(&b);
                fold_min(&mut best, m, &b);
                checked += 1;
            }
        }
        VerifyMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let singles: Vec<usize> = (1..=t + 1).collect();
            fold_min(&mut best, eval.margin(&singles), &singles);
            checked += 1;
            for _ in 0..opts.samples {
                let b = random_boundaries(&mut rng, t);
                fold_min(&mut best, eval.margin(&b), &b);
                checked += 1;
            }
            for _ in 0..opts.local_search_restarts {
                let (m, b, n) = local_search(&eval, random_boundaries(&mut rng, t), &mut rng);
                fold_min(&mut best, m, &b);
                checked += n;
            }
        }
    }
    let (worst_margin, b) = best.expect("at least one chain is evaluated");
    Ok(FamilyReport {
        worst_margin,
        witness: IntervalChain::new(b, t)?,
        chains_checked: checked,
    })
}

fn random_boundaries(rng: &mut ChaCha8Rng, t: usize) -> Vec<usize> {
    let density: f64 = rng.gen_range(0.02..1.0);
    loop {
        let b: Vec<usize> = (1..=t + 1).filter(|_| rng.gen_bool(density)).collect();
        if b.len() >= 2 {
            return b;
        }
    }
}

/// Greedy descent over single-boundary toggles.
fn local_search(
    eval: &MarginEval<'_>,
    mut b: Vec<usize>,
    rng: &mut ChaCha8Rng,
) -> (Scalar, Vec<usize>, u64) {
    let t = eval.t;
    let mut cur = eval.margin(&b);
    let mut checked = 1u64;
    let mut order: Vec<usize> = (1..=t + 1).collect();
    loop {
        // visit toggles in a random order, take the first strict improvement
        for i in (1..order.len()).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut improved = false;
        for &pos in &order {
            let mut nb = b.clone();
            match nb.binary_search(&pos) {
                Ok(i) => {
                    if nb.len() <= 2 {
                        continue;
                    }
                    nb.remove(i);
                }
                Err(i) => nb.insert(i, pos),
            }
            let m = eval.margin(&nb);
            checked += 1;
            if m < cur {
                cur = m;
                b = nb;
                improved = true;
                break;
            }
        }
        if !improved {
            return (cur, b, checked);
        }
    }
}

/// Per-layer occupancy statistics for a set `J ⊆ [t]`.
#[derive(Clone, Debug, Serialize)]
pub struct OccupancyReport {
    /// Whether `beta_k >= alpha + (gamma_0 + ... + gamma_k)/(D-1)` for every layer.
    pub holds: bool,
    #[serde(serialize_with = "crate::io::serialize_scalar")]
    pub alpha: Scalar,
    pub beta: Vec<String>,
    pub gamma: Vec<String>,
    /// Per layer: fully occupied chains that do not stab `J`.
    pub fully_occupied_not_stabbing: Vec<usize>,
}

/// Occupancy check on a layered family (as produced by [`build_family`]).
pub fn claim_occupancy_check(j_set: &[usize], family: &ChainFamily) -> Result<OccupancyReport> {
    let t = family.ambient;
    if family.layers == 0 {
        return Err(Error::InvalidInput("family has no layer structure".into()));
    }
    if let Some(&bad) = j_set.iter().find(|&&x| x == 0 || x > t) {
        return Err(Error::AmbientMismatch {
            expected: t,
            found: bad,
        });
    }
    let mut inj = vec![false; t + 2];
    for &x in j_set {
        inj[x] = true;
    }
    // prefix counts of J for interval occupancy queries
    let mut pre = vec![0usize; t + 2];
    for x in 1..=t + 1 {
        pre[x] = pre[x - 1] + usize::from(x <= t && inj[x]);
    }
    let count = |lo: usize, hi: usize| pre[hi] - pre[lo - 1];
    let j_min = j_set.iter().copied().min();
    let j_max = j_set.iter().copied().max();
    let alpha = Scalar::new(pre[t].into(), t.into());
    let d1 = Scalar::from_integer(((family.arity - 1) as u64).into());
    let mut gamma_sum = Scalar::zero();
    let mut holds = true;
    let (mut betas, mut gammas, mut bad) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..family.layers {
        let (mut total, mut occupied, mut partial, mut full_not_stab) = (0usize, 0, 0, 0);
        for m in family.layer(k) {
            total += 1;
            let x = &m.tuple.0;
            let hits = x
                .windows(2)
                .filter(|w| count(w[0] + 1, w[1]) > 0)
                .count();
            if hits == 0 {
                continue;
            }
            occupied += 1;
            if hits < x.len() - 1 {
                partial += 1;
            } else {
                // dual stabbing also needs points of J strictly left and right of the chain
                let left = j_min.is_some_and(|v| v <= x[0]);
                let right = j_max.is_some_and(|v| v > *x.last().unwrap());
                if !(left && right) {
                    full_not_stab += 1;
                }
            }
        }
        if total == 0 {
            continue;
        }
        let beta = Scalar::new(occupied.into(), total.into());
        let gamma = Scalar::new(partial.into(), total.into());
        gamma_sum += &gamma;
        if beta < &alpha + &gamma_sum / &d1 {
            holds = false;
        }
        betas.push(format_scalar(&beta));
        gammas.push(format_scalar(&gamma));
        bad.push(full_not_stab);
    }
    Ok(OccupancyReport {
        holds,
        alpha,
        beta: betas,
        gamma: gammas,
        fully_occupied_not_stabbing: bad,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn chain(iv: &[(usize, usize)], t: usize) -> IntervalChain {
        IntervalChain::from_intervals(iv, t).unwrap()
    }

    #[test]
    fn stab_examples() {
        let i = chain(&[(1, 3), (4, 6), (7, 10)], 10);
        assert!(stabs(&StabTuple::new(vec![2, 5, 9]).unwrap(), &i).unwrap());
        assert!(!stabs(&StabTuple::new(vec![2, 3, 9]).unwrap(), &i).unwrap());
        let j = chain(&[(3, 4), (5, 6)], 10);
        assert!(!stabs(&StabTuple::new(vec![2, 5, 9]).unwrap(), &j).unwrap());
        assert!(matches!(
            stabs(&StabTuple::new(vec![2, 5, 11]).unwrap(), &i),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn chain_validation() {
        assert!(IntervalChain::new(vec![0, 2], 5).is_err());
        assert!(IntervalChain::new(vec![1, 7], 5).is_err());
        assert!(IntervalChain::new(vec![3], 5).is_err());
        assert!(IntervalChain::new(vec![1, 1], 5).is_err());
        assert!(IntervalChain::from_intervals(&[(1, 2), (4, 5)], 5).is_err());
        let c = IntervalChain::new(vec![2, 4, 6], 5).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.interval_of(3), Some(0));
        assert_eq!(c.interval_of(5), Some(1));
        assert_eq!(c.interval_of(1), None);
        assert_eq!(c.interval_of(6), None);
    }

    #[test]
    fn layer_count_rounds_up() {
        assert_eq!(layer_count(3, &ratio(1, 2)), 5);
        assert_eq!(layer_count(4, &ratio(1, 4)), 9);
        // ln 4 = 1.386..., so D = 2 and eps = 1 gives 2
        assert_eq!(ceil_ln(&Scalar::from_integer(4.into())), 2);
        assert_eq!(ceil_ln(&Scalar::one()), 0);
        // e^1 = 2.718... >= 2.7 but e^1 < 2.72
        assert_eq!(ceil_ln(&ratio(27, 10)), 1);
        assert_eq!(ceil_ln(&ratio(272, 100)), 2);
    }

    #[test]
    fn build_family_example() {
        let f = build_family(3, &ratio(1, 2), None).unwrap();
        assert_eq!(f.layers, 5);
        assert_eq!(f.multiplier, 8);
        assert_eq!(f.ambient, 256);
        let sizes: Vec<usize> = (0..5).map(|k| f.layer(k).count()).collect();
        assert_eq!(sizes, vec![128, 64, 32, 16, 8]);
        assert!(f.members.iter().all(|m| m.weight == 1));
        assert_eq!(f.size(), 248);
    }

    #[test]
    fn build_family_errors() {
        assert!(matches!(
            build_family(4, &Scalar::one(), None),
            Err(Error::EpsilonOutOfRange(_))
        ));
        assert!(matches!(
            build_family(2, &ratio(1, 2), None),
            Err(Error::ArityTooSmall(2))
        ));
    }

    #[test]
    fn stab_fraction_examples() {
        let f = build_family(3, &ratio(1, 2), None).unwrap();
        let whole = IntervalChain::new(vec![1, 257], 256).unwrap();
        assert_eq!(family_stab_fraction(&f, &whole).unwrap(), Scalar::zero());
        let singles = IntervalChain::singletons(256);
        let frac = family_stab_fraction(&f, &singles).unwrap();
        // every member except the first chain of each layer lies in [1, t]
        assert_eq!(frac, ratio(243, 248));
        let one = ChainFamily {
            arity: 3,
            ambient: 10,
            epsilon: ratio(1, 2),
            layers: 0,
            multiplier: 0,
            members: vec![FamilyMember {
                tuple: StabTuple::new(vec![2, 5, 9]).unwrap(),
                layer: 0,
                weight: 1,
            }],
        };
        let i = chain(&[(1, 3), (4, 6), (7, 10)], 10);
        assert_eq!(family_stab_fraction(&one, &i).unwrap(), Scalar::one());
        assert!(family_stab_fraction(&one, &singles).is_err());
    }

    #[test]
    fn verify_empty_family_fails() {
        let empty = ChainFamily {
            arity: 3,
            ambient: 4,
            epsilon: ratio(1, 2),
            layers: 0,
            multiplier: 0,
            members: vec![],
        };
        let opts = VerifyOptions {
            mode: VerifyMode::Exhaustive,
            ..VerifyOptions::default()
        };
        let r = verify_family(&empty, &opts).unwrap();
        assert_eq!(r.worst_margin, -ratio(1, 2));
        assert_eq!(r.witness, IntervalChain::singletons(4));
        assert!(!r.verified());
    }

    #[test]
    fn exhaustive_cap_enforced() {
        let f = complete_family(3, 30, ratio(1, 2)).unwrap();
        let opts = VerifyOptions {
            mode: VerifyMode::Exhaustive,
            ..VerifyOptions::default()
        };
        assert!(matches!(
            verify_family(&f, &opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn occupancy_trivial_cases() {
        let f = build_family(3, &ratio(1, 2), None).unwrap();
        let all: Vec<usize> = (1..=256).collect();
        let r = claim_occupancy_check(&all, &f).unwrap();
        assert!(r.holds);
        assert!(r.beta.iter().all(|b| b == "1/1"));
        assert!(r.gamma.iter().all(|g| g == "0/1"));
        let r = claim_occupancy_check(&[], &f).unwrap();
        assert!(r.holds);
        assert!(r.beta.iter().all(|b| b == "0/1"));
    }

    #[test]
    fn family_text_round_trip() {
        let f = build_family(3, &ratio(1, 2), None).unwrap();
        let back = ChainFamily::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        assert!(ChainFamily::from_text("3 4 1/2 0 0\n0 1 1 2\n").is_err());
        assert!(ChainFamily::from_text("3 4 1/2 0 0\n0 1 1 2 9\n").is_err());
    }

    #[test]
    fn duality_round_trip() {
        let x = StabTuple::new(vec![0, 3, 7]).unwrap();
        let c = x.dual_chain(7).unwrap();
        assert_eq!(c.intervals().collect::<Vec<_>>(), vec![(1, 3), (4, 7)]);
        assert_eq!(StabTuple::from_dual(&c), x);
    }
}
