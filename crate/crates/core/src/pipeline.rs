//! End-to-end construction of one-sided weak ε-approximants.
//!
//! Outline for `n = |P|` above the fallback threshold:
//!
//! 1. regular equipartition `P_1..P_M` (heuristic search, exact check), parts
//!    trimmed to equal size and ordered by their representative point;
//! 2. repeatedly fish out `m` sequences `S_1..S_m` of `n0 = t u` parts whose
//!    representatives form an orientation-homogeneous sequence and whose
//!    `(d+1)`-sets are all non-exceptional;
//! 3. per sequence `q_0..q_{n0-1}`: separators `v_j = q_{(j-1)u}`, blocks of
//!    the `u-1` parts in between, and one Tverberg point per family member;
//! 4. `A` is the multiset union of the per-sequence point sets.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chains::{self, ChainFamily};
use crate::discrepancy::WeightedPointSet;
use crate::error::{Error, Result};
use crate::geometry::{first_dependent_tuple, format_scalar, Point, PointSequence, Scalar};
use crate::homogeneous::{self, ExtractOptions, OtConfig, TowerValue};
use crate::io::{serialize_point, serialize_scalar};
use crate::regularity::{self, Hypergraph, Partition, PartitionCheck};
use crate::tverberg::{selection_arity, tverberg_point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Guarantee,
    Empirical,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "guarantee" => Ok(Mode::Guarantee),
            "empirical" => Ok(Mode::Empirical),
            _ => Err(Error::InvalidInput(format!("unknown mode {s:?}"))),
        }
    }
}

/// Where the stabbing family comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySource {
    /// The layered family for the given `K` and `m` (`t = m (D-1)^K`).
    Layered { layers: usize, multiplier: u64 },
    /// All increasing `D`-tuples of `[t]`, weight one.
    Complete,
    /// A caller-supplied family over `[t]`.
    Explicit(ChainFamily),
}

/// An exact rational or a symbolic expression too large to evaluate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Quantity {
    Exact(#[serde(serialize_with = "serialize_scalar")] Scalar),
    Symbolic(String),
}

impl Quantity {
    pub fn exact(&self) -> Option<&Scalar> {
        match self {
            Quantity::Exact(x) => Some(x),
            Quantity::Symbolic(_) => None,
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Exact(x) => write!(f, "{}", format_scalar(x)),
            Quantity::Symbolic(s) => write!(f, "{s}"),
        }
    }
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Parameters of the construction.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineParams {
    pub mode: Mode,
    pub d: usize,
    #[serde(serialize_with = "serialize_scalar")]
    pub epsilon: Scalar,
    pub s: usize,
    #[serde(rename = "D")]
    pub arity: usize,
    #[serde(serialize_with = "ser_big")]
    pub t: BigUint,
    pub u: u64,
    #[serde(serialize_with = "ser_big")]
    pub n0: BigUint,
    #[serde(rename = "N")]
    pub n_ot: TowerValue,
    pub beta: Quantity,
    pub gamma: Quantity,
    /// Exponent `c` of the regularity bound (configuration, default `d+1`).
    pub regularity_c: u32,
    /// `40 / (eps gamma^c)` (guarantee mode only).
    pub fallback_threshold: Quantity,
    /// `gamma` handed to the partitioner.
    #[serde(serialize_with = "serialize_scalar")]
    pub partition_gamma: Scalar,
    /// Family layer count `K` and multiplier `m`, when layered.
    pub family_layers: Option<u64>,
    pub family_multiplier: Option<String>,
    #[serde(skip)]
    pub family: FamilySource,
    /// Guarantee mode: refuse the `A = P` fallback when the threshold is
    /// tower-sized, raising [`Error::InfeasibleParams`] instead.
    pub strict: bool,
}

/// Overrides for [`compute_params`].
#[derive(Clone, Debug, Default)]
pub struct ParamOptions {
    pub ot: OtConfig,
    pub regularity_c: Option<u32>,
    /// Empirical mode: ambient size `t` of the complete family (default: the
    /// layered family for `eps/2`).
    pub t: Option<usize>,
    /// Empirical mode: block length `u` (default `ceil(4/eps)`).
    pub u: Option<u64>,
    /// Empirical mode: family (default: all `D`-tuples of `[t]` when `t` is given).
    pub family: Option<FamilySource>,
    /// Empirical mode: partition `gamma` (default `1/4`).
    pub partition_gamma: Option<Scalar>,
    pub strict: bool,
}

fn ceil_ratio(x: &Scalar) -> BigInt {
    x.numer().div_ceil(x.denom())
}

fn check_epsilon(eps: &Scalar) -> Result<()> {
    if *eps <= Scalar::zero() || *eps > Scalar::one() {
        return Err(Error::EpsilonOutOfRange(format!(
            "{} (need 0 < eps <= 1)",
            format_scalar(eps)
        )));
    }
    Ok(())
}

/// Derived parameters. Guarantee mode evaluates every formula (keeping tower
/// values symbolic); empirical mode takes `t`, `u` and the family from `opts`.
pub fn compute_params(d: usize, eps: &Scalar, mode: Mode, opts: &ParamOptions) -> Result<PipelineParams> {
    check_epsilon(eps)?;
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "the construction needs d >= 2 (got d = {d})"
        )));
    }
    let (s, arity) = selection_arity(d);
    let c = opts.regularity_c.unwrap_or(d as u32 + 1);
    let u_default = ceil_ratio(&(Scalar::from_integer(4.into()) / eps))
        .to_u64()
        .expect("4/eps is small");
    let (t, u, family, layers, multiplier) = match mode {
        Mode::Guarantee => {
            // smallest admissible t for eps/2: m = ceil(8/eps) minimizes m (D-1)^K
            let half = eps / Scalar::from_integer(2.into());
            let (k, m, t) = chains::family_dimensions(arity, &half, None)?;
            let fam = FamilySource::Layered {
                layers: k as usize,
                multiplier: m.to_u64().unwrap_or(u64::MAX),
            };
            (t, u_default, fam, Some(k), Some(m.to_string()))
        }
        Mode::Empirical => {
            let family = match (&opts.family, opts.t) {
                (Some(f), _) => f.clone(),
                (None, Some(_)) => FamilySource::Complete,
                // no t given: the layered family for eps/2, as in guarantee mode
                (None, None) => {
                    let half = eps / Scalar::from_integer(2.into());
                    let (k, m, _) = chains::family_dimensions(arity, &half, None)?;
                    FamilySource::Layered {
                        layers: k as usize,
                        multiplier: m.to_u64().unwrap_or(u64::MAX),
                    }
                }
            };
            let t: BigUint = match (&family, opts.t) {
                (FamilySource::Explicit(f), _) => f.ambient.into(),
                (FamilySource::Layered { layers, multiplier }, _) => {
                    BigUint::from(*multiplier) * Pow::pow(BigUint::from(arity - 1), *layers as u32)
                }
                (FamilySource::Complete, Some(t)) => t.into(),
                (FamilySource::Complete, None) => arity.into(),
            };
            if let Some(req) = opts.t.filter(|&r| BigUint::from(r) != t) {
                return Err(Error::InvalidInput(format!(
                    "t = {req} disagrees with the family's t = {t}"
                )));
            }
            if t < BigUint::from(arity) {
                return Err(Error::InvalidInput(format!("t = {t} is below D = {arity}")));
            }
            let u = opts.u.unwrap_or(u_default);
            if u == 0 {
                return Err(Error::InvalidInput("u must be positive".into()));
            }
            let (layers, mult) = match &family {
                FamilySource::Layered { layers, multiplier } => {
                    (Some(*layers as u64), Some(multiplier.to_string()))
                }
                _ => (None, None),
            };
            (t, u, family, layers, mult)
        }
    };
    let n0 = &t * BigUint::from(u);
    let x = opts.ot.upper(d) * Scalar::from_integer(BigInt::from(n0.clone()));
    let n_ot = homogeneous::tower(d, ceil_ratio(&x).to_biguint().unwrap_or_default().max(BigUint::one()));
    let eps5: Scalar = Pow::pow(eps / Scalar::from_integer(5.into()), (d + 1) as u32);
    let (beta, gamma, threshold) = match n_ot.exact() {
        Some(nv) => {
            let four_n = Scalar::from_integer(BigInt::from(nv.clone()) * 4);
            let beta: Scalar = Pow::pow(four_n.recip(), d as u32);
            let gamma = &beta * &eps5;
            let thr = Scalar::from_integer(40.into()) / (eps * Pow::pow(&gamma, c));
            (Quantity::Exact(beta), Quantity::Exact(gamma), Quantity::Exact(thr))
        }
        None => {
            let beta = format!("(4*{n_ot})^-{d}");
            let gamma = format!("{beta} * ({}/5)^{}", format_scalar(eps), d + 1);
            let thr = format!("40 / ({} * ({gamma})^{c})", format_scalar(eps));
            (Quantity::Symbolic(beta), Quantity::Symbolic(gamma), Quantity::Symbolic(thr))
        }
    };
    let partition_gamma = match mode {
        Mode::Empirical => opts
            .partition_gamma
            .clone()
            .unwrap_or_else(|| Scalar::new(1.into(), 4.into())),
        Mode::Guarantee => gamma.exact().cloned().unwrap_or_else(Scalar::zero),
    };
    Ok(PipelineParams {
        mode,
        d,
        epsilon: eps.clone(),
        s,
        arity,
        t,
        u,
        n0,
        n_ot,
        beta,
        gamma,
        regularity_c: c,
        fallback_threshold: match mode {
            Mode::Guarantee => threshold,
            Mode::Empirical => Quantity::Symbolic("n < n0".into()),
        },
        partition_gamma,
        family_layers: layers,
        family_multiplier: multiplier,
        family,
        strict: opts.strict,
    })
}

/// Machine-readable explanation of a guarantee-mode refusal.
#[derive(Clone, Debug, Serialize)]
pub struct InfeasibleReport {
    pub n: usize,
    pub params: PipelineParams,
    pub reason: String,
}

/// Largest input the guarantee-mode construction will attempt.
pub const GUARANTEE_RUN_CAP: usize = 5000;

/// One Tverberg point of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleTrace {
    pub x: Vec<usize>,
    pub weight: u64,
    /// Tverberg partition as positions into `x`.
    pub partition: Vec<Vec<usize>>,
    #[serde(serialize_with = "serialize_point")]
    pub point: Point,
}

/// Per-sequence record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceTrace {
    /// Part indices (into the ordered partition) making up the sequence.
    pub parts: Vec<usize>,
    /// Point index of each part's representative, `q_0..q_{n0-1}`.
    pub representatives: Vec<usize>,
    pub sign: i8,
    /// Point indices of `v_1..v_t`.
    pub separators: Vec<usize>,
    /// Point indices of the union of the parts of each block `b_1..b_t`.
    pub blocks: Vec<Vec<usize>>,
    /// Point indices of all parts of the sequence.
    pub members: Vec<usize>,
    pub tuples: Vec<TupleTrace>,
}

/// Audit record of one run.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineTrace {
    pub params: PipelineParams,
    pub n: usize,
    /// Why `A = P` was returned, if it was.
    pub fallback: Option<String>,
    /// Parts after equalization, ordered by representative.
    pub partition: Vec<Vec<usize>>,
    #[serde(rename = "M")]
    pub part_count: usize,
    pub exceptional_count: usize,
    pub discarded: Vec<usize>,
    pub sequences: Vec<SequenceTrace>,
    /// Parts left over when fishing stopped (`S*`).
    pub leftover_parts: Vec<usize>,
    pub leftover_points: usize,
    /// Why the fishing loop stopped.
    pub stop_reason: String,
    /// `m`, the number of sequences.
    pub m: usize,
    /// `|F|` with multiplicity (members usable with separators only).
    pub family_size: u64,
    pub total_weight: u64,
    /// Perturbation scale at which the result stabilized, if perturbed.
    pub delta: Option<String>,
    pub halvings: Option<u32>,
    pub approximant: WeightedPointSet,
}

impl PipelineTrace {
    fn fallback(params: &PipelineParams, p: &PointSequence, reason: String) -> Result<Self> {
        Ok(PipelineTrace {
            params: params.clone(),
            n: p.len(),
            fallback: Some(reason),
            partition: vec![],
            part_count: 0,
            exceptional_count: 0,
            discarded: vec![],
            sequences: vec![],
            leftover_parts: vec![],
            leftover_points: 0,
            stop_reason: String::new(),
            m: 0,
            family_size: 0,
            total_weight: p.len() as u64,
            delta: None,
            halvings: None,
            approximant: WeightedPointSet::from_points(p)?,
        })
    }

    /// Combinatorial data compared across perturbation scales.
    fn signature(&self) -> String {
        let seqs: Vec<(Vec<usize>, Vec<(Vec<usize>, Vec<Vec<usize>>)>)> = self
            .sequences
            .iter()
            .map(|s| {
                (
                    s.representatives.clone(),
                    s.tuples.iter().map(|t| (t.x.clone(), t.partition.clone())).collect(),
                )
            })
            .collect();
        format!("{:?}|{:?}|{:?}", self.fallback, self.partition, seqs)
    }
}

/// Whether `P` is small enough that `A = P` is returned outright.
fn fallback_reason(p: &PointSequence, params: &PipelineParams) -> Option<String> {
    let n = p.len();
    match params.mode {
        Mode::Guarantee => match &params.fallback_threshold {
            Quantity::Symbolic(s) => Some(format!("|P| = {n} <= {s} (tower-sized threshold)")),
            Quantity::Exact(thr) => (Scalar::from_integer(n.into()) <= *thr)
                .then(|| format!("|P| = {n} <= 40/(eps gamma^c) = {}", format_scalar(thr))),
        },
        Mode::Empirical => (BigUint::from(n) < params.n0)
            .then(|| format!("|P| = {n} < n0 = {}", params.n0)),
    }
}

fn check_consistent(p: &PointSequence, eps: &Scalar, params: &PipelineParams) -> Result<()> {
    check_epsilon(eps)?;
    if p.dim() != params.d {
        return Err(Error::DimensionMismatch {
            expected: params.d,
            found: p.dim(),
        });
    }
    if *eps != params.epsilon {
        return Err(Error::InvalidInput("epsilon differs from the parameters".into()));
    }
    if p.is_empty() {
        return Err(Error::InvalidInput("P is empty".into()));
    }
    Ok(())
}

fn materialize_family(params: &PipelineParams) -> Result<ChainFamily> {
    let t = params
        .t
        .to_usize()
        .filter(|&t| t as u64 <= chains::MAX_BUILD_AMBIENT)
        .ok_or(Error::CapExceeded {
            what: "family ambient t",
            value: usize::MAX,
            cap: chains::MAX_BUILD_AMBIENT as usize,
        })?;
    let fam = match &params.family {
        FamilySource::Layered { layers, multiplier } => chains::layered_family(
            params.arity,
            *layers,
            *multiplier,
            params.epsilon.clone() / Scalar::from_integer(2.into()),
            t as u64,
        )?,
        FamilySource::Complete => chains::complete_family(params.arity, t, params.epsilon.clone())?,
        FamilySource::Explicit(f) => f.clone(),
    };
    if fam.arity != params.arity {
        return Err(Error::InvalidInput(format!(
            "family arity {} differs from D = {}",
            fam.arity, params.arity
        )));
    }
    Ok(fam)
}

/// Separators, blocks and Tverberg points for one sequence of parts.
///
/// `reps[k]` is the representative (point index) of part `k`; `part_points`
/// lists the points of each part.
fn assemble_sequence(
    p: &PointSequence,
    family: &ChainFamily,
    s: usize,
    u: usize,
    parts: &[usize],
    part_points: &[Vec<usize>],
    reps: &[usize],
    sign: i8,
) -> Result<SequenceTrace> {
    let t = family.ambient;
    if parts.len() != t * u {
        return Err(Error::InternalInvariantViolation(format!(
            "sequence length {} differs from t u = {}",
            parts.len(),
            t * u
        )));
    }
    let separators: Vec<usize> = (1..=t).map(|j| reps[parts[(j - 1) * u]]).collect();
    let blocks: Vec<Vec<usize>> = (1..=t)
        .map(|j| {
            ((j - 1) * u + 1..j * u)
                .flat_map(|k| part_points[parts[k]].iter().copied())
                .collect()
        })
        .collect();
    let members: Vec<usize> = parts.iter().flat_map(|&k| part_points[k].iter().copied()).collect();
    let mut tuples = Vec::new();
    for m in family.live_members() {
        let x = m.tuple.values().to_vec();
        let q: Vec<Point> = x.iter().map(|&j| p[separators[j - 1]].clone()).collect();
        let res = tverberg_point(&q, s)?;
        tuples.push(TupleTrace {
            x,
            weight: m.weight,
            partition: res.partition,
            point: res.point,
        });
    }
    Ok(SequenceTrace {
        parts: parts.to_vec(),
        representatives: parts.iter().map(|&k| reps[k]).collect(),
        sign,
        separators,
        blocks,
        members,
        tuples,
    })
}

fn sub_seed(rng: &mut ChaCha8Rng) -> u64 {
    rng.gen()
}

/// Independent set of the hypergraph; below the sampling lemma's size
/// precondition every vertex is kept and one vertex per edge is removed.
fn pick_independent(h: &Hypergraph, seed: u64) -> Result<Vec<usize>> {
    match regularity::independent_set(h, seed) {
        Err(Error::PreconditionViolated(_)) => {
            let mut member = vec![true; h.vertices()];
            for e in h.edges() {
                if e.iter().all(|&v| member[v]) {
                    member[e[0]] = false;
                }
            }
            Ok((0..h.vertices()).filter(|&v| member[v]).collect())
        }
        other => other,
    }
}

/// The construction on an input in general position. Falls back to `A = P`
/// when `P` is below the threshold or (empirical mode) when the realized
/// budget of discarded and leftover points exceeds `eps n / 4`.
pub fn construct_approximant(
    p: &PointSequence,
    eps: &Scalar,
    params: &PipelineParams,
    seed: u64,
) -> Result<(WeightedPointSet, PipelineTrace)> {
    check_consistent(p, eps, params)?;
    if params.mode == Mode::Guarantee && params.strict {
        if let Quantity::Symbolic(thr) = &params.fallback_threshold {
            return Err(Error::InfeasibleParams(Box::new(InfeasibleReport {
                n: p.len(),
                params: params.clone(),
                reason: format!("fallback threshold {thr} is tower-sized; strict mode refuses A = P"),
            })));
        }
    }
    if let Some(reason) = fallback_reason(p, params) {
        let trace = PipelineTrace::fallback(params, p, reason)?;
        return Ok((trace.approximant.clone(), trace));
    }
    if params.mode == Mode::Guarantee {
        let reason = if params.n0 > BigUint::from(p.len()) {
            Some(format!("n0 = {} exceeds |P| = {}", params.n0, p.len()))
        } else if p.len() > GUARANTEE_RUN_CAP {
            Some(format!("|P| = {} exceeds the run cap {GUARANTEE_RUN_CAP}", p.len()))
        } else if params.t > BigUint::from(chains::MAX_BUILD_AMBIENT) {
            Some(format!("t = {} is too large to materialize", params.t))
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(Error::InfeasibleParams(Box::new(InfeasibleReport {
                n: p.len(),
                params: params.clone(),
                reason,
            })));
        }
    }
    if let Some(t) = first_dependent_tuple(p) {
        return Err(Error::GeneralPositionViolation(format!("tuple {t:?}")));
    }
    run_construction(p, params, seed)
}

fn run_construction(
    p: &PointSequence,
    params: &PipelineParams,
    seed: u64,
) -> Result<(WeightedPointSet, PipelineTrace)> {
    let n = p.len();
    let eps = &params.epsilon;
    let family = materialize_family(params)?;
    let t = family.ambient;
    let u = params.u as usize;
    let n0 = t * u;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // 1. regular partition, equalized, ordered by representative
    let gamma = &params.partition_gamma;
    let raw = regularity::heuristic_partition_gp(p, gamma, params.regularity_c, sub_seed(&mut rng))?;
    let (eq, discarded) = regularity::equalize_parts(&raw)?;
    let mut parts: Vec<Vec<usize>> = eq.parts().to_vec();
    parts.sort_by(|a, b| p[a[0]].cmp(&p[b[0]]).then(a[0].cmp(&b[0])));
    let partition = Partition::new(parts.clone(), n)?;
    let regular = match regularity::check_partition_gp(p, &partition, gamma)? {
        PartitionCheck::Accepted(r) => r,
        PartitionCheck::Rejected { .. } => {
            return Err(Error::InternalInvariantViolation(
                "equalized partition lost regularity".into(),
            ))
        }
    };
    let big_m = parts.len();
    let reps: Vec<usize> = parts.iter().map(|part| part[0]).collect();
    let discard_budget = Scalar::from_integer(discarded.len().into());

    // 2. fish out homogeneous sequences
    let mut remaining: Vec<usize> = (0..big_m).collect();
    let mut sequences: Vec<(Vec<usize>, i8)> = Vec::new();
    let stop_reason = loop {
        // stop once fewer than eps M / 5 parts remain
        if Scalar::from_integer((5 * remaining.len()).into()) < eps * Scalar::from_integer(big_m.into()) {
            break "remainder below eps M / 5".to_string();
        }
        if remaining.len() < n0 {
            break format!("{} parts remain, fewer than n0 = {n0}", remaining.len());
        }
        let mut pos = vec![usize::MAX; big_m];
        for (i, &k) in remaining.iter().enumerate() {
            pos[k] = i;
        }
        let edges: Vec<Vec<usize>> = regular
            .exceptional
            .iter()
            .filter(|e| e.iter().all(|&k| pos[k] != usize::MAX))
            .map(|e| e.iter().map(|&k| pos[k]).collect())
            .collect();
        let h = Hypergraph::new(params.d + 1, remaining.len(), edges)?;
        let indep = pick_independent(&h, sub_seed(&mut rng))?;
        let cand: Vec<usize> = indep.iter().map(|&i| remaining[i]).collect();
        let seq = PointSequence::new(p.dim(), cand.iter().map(|&k| p[reps[k]].clone()).collect())?;
        let opts = ExtractOptions {
            seed: sub_seed(&mut rng),
            ..ExtractOptions::default()
        };
        let hs = homogeneous::longest_homogeneous_subsequence(&seq, &opts)?;
        if hs.indices.len() < n0 {
            break format!(
                "longest homogeneous subsequence has {} < n0 = {n0} parts",
                hs.indices.len()
            );
        }
        let chosen: Vec<usize> = hs.indices[..n0].iter().map(|&i| cand[i]).collect();
        remaining.retain(|k| !chosen.contains(k));
        sequences.push((chosen, hs.sign));
    };
    let leftover_points: usize = remaining.iter().map(|&k| parts[k].len()).sum();
    let excluded = discard_budget + Scalar::from_integer(leftover_points.into());
    let budget = eps * Scalar::from_integer(n.into()) / Scalar::from_integer(4.into());
    let fallback = if sequences.is_empty() {
        Some(format!("no sequence extracted ({stop_reason})"))
    } else if excluded > budget {
        Some(format!(
            "{} discarded + {leftover_points} leftover points exceed eps n / 4 = {}",
            discarded.len(),
            format_scalar(&budget)
        ))
    } else {
        None
    };

    let mut trace = PipelineTrace {
        params: params.clone(),
        n,
        fallback: None,
        partition: parts.clone(),
        part_count: big_m,
        exceptional_count: regular.exceptional.len(),
        discarded,
        sequences: vec![],
        leftover_parts: remaining,
        leftover_points,
        stop_reason,
        m: sequences.len(),
        family_size: family.live_members().map(|m| m.weight).sum(),
        total_weight: 0,
        delta: None,
        halvings: None,
        approximant: WeightedPointSet::from_points(p)?,
    };
    if let Some(reason) = fallback {
        trace.fallback = Some(reason);
        trace.total_weight = n as u64;
        return Ok((trace.approximant.clone(), trace));
    }

    // 3. assemble
    let mut items: Vec<(Point, u64)> = Vec::new();
    for (chosen, sign) in &sequences {
        let st = assemble_sequence(p, &family, params.s, u, chosen, &parts, &reps, *sign)?;
        items.extend(st.tuples.iter().map(|tt| (tt.point.clone(), tt.weight)));
        trace.sequences.push(st);
    }
    if items.is_empty() {
        return Err(Error::InvalidInput(
            "the family has no member inside [1, t]; A would be empty".into(),
        ));
    }
    let a = WeightedPointSet::from_multiset(p.dim(), items)?;
    if a.total_weight() != trace.m as u64 * trace.family_size {
        return Err(Error::InternalInvariantViolation(
            "|A| differs from m |F|".into(),
        ));
    }
    trace.total_weight = a.total_weight();
    trace.approximant = a.clone();
    Ok((a, trace))
}

/// The single-sequence construction for an orientation-homogeneous `P`:
/// `u = floor(|P| / t)`, the first `t u` points as the sequence, separators,
/// blocks and one Tverberg point per family member. Without a family the
/// layered family for `eps/2` is used.
pub fn construct_homogeneous_fast(
    p: &PointSequence,
    eps: &Scalar,
    family: Option<&ChainFamily>,
) -> Result<(WeightedPointSet, SequenceTrace)> {
    check_epsilon(eps)?;
    let d = p.dim();
    if d < 2 {
        return Err(Error::InvalidInput("the construction needs d >= 2".into()));
    }
    let sign = homogeneous::homogeneity_sign(p).ok_or(Error::NotHomogeneous)?;
    let (s, arity) = selection_arity(d);
    let built;
    let family = match family {
        Some(f) => f,
        None => {
            built = chains::build_family(arity, &(eps / Scalar::from_integer(2.into())), None)?;
            &built
        }
    };
    if family.arity != arity {
        return Err(Error::InvalidInput(format!(
            "family arity {} differs from D = {arity}",
            family.arity
        )));
    }
    let t = family.ambient;
    let u = p.len() / t;
    if u == 0 {
        return Err(Error::PreconditionViolated(format!(
            "|P| = {} is smaller than t = {t}",
            p.len()
        )));
    }
    let parts: Vec<usize> = (0..t * u).collect();
    let singletons: Vec<Vec<usize>> = (0..p.len()).map(|i| vec![i]).collect();
    let reps: Vec<usize> = (0..p.len()).collect();
    let st = assemble_sequence(p, family, s, u, &parts, &singletons, &reps, sign)?;
    let items = st.tuples.iter().map(|tt| (tt.point.clone(), tt.weight));
    let a = WeightedPointSet::from_multiset(d, items).map_err(|_| {
        Error::InvalidInput("the family has no member inside [1, t]; A would be empty".into())
    })?;
    Ok((a, st))
}

/// Settings for [`perturb_and_construct`].
#[derive(Clone, Debug)]
pub struct PerturbOptions {
    pub delta0: Scalar,
    pub max_halvings: u32,
}

impl Default for PerturbOptions {
    fn default() -> Self {
        PerturbOptions {
            delta0: Scalar::new(1.into(), 16.into()),
            max_halvings: 32,
        }
    }
}

/// `P + delta R` for a fixed direction field `R` with entries in `[-1, 1]`.
fn perturbed(p: &PointSequence, dirs: &[Vec<Scalar>], delta: &Scalar) -> Result<PointSequence> {
    let pts = p
        .iter()
        .zip(dirs)
        .map(|(x, r)| {
            Point::new(
                x.coords()
                    .iter()
                    .zip(r)
                    .map(|(c, rc)| c + rc * delta)
                    .collect(),
            )
        })
        .collect();
    PointSequence::new(p.dim(), pts)
}

/// Construction for inputs not in general position: runs on `P + delta_i R`
/// with `delta_i = delta_0 2^-i` until two consecutive scales produce the same
/// combinatorial data, and returns the result at the smaller scale. A
/// fallback on the perturbed input returns the unperturbed `P`.
pub fn perturb_and_construct(
    p: &PointSequence,
    eps: &Scalar,
    params: &PipelineParams,
    seed: u64,
    opts: &PerturbOptions,
) -> Result<(WeightedPointSet, PipelineTrace)> {
    check_consistent(p, eps, params)?;
    if fallback_reason(p, params).is_some() || first_dependent_tuple(p).is_none() {
        return construct_approximant(p, eps, params, seed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let dirs: Vec<Vec<Scalar>> = (0..p.len())
        .map(|_| {
            (0..p.dim())
                .map(|_| Scalar::new(rng.gen_range(-1000i64..=1000).into(), 1000.into()))
                .collect()
        })
        .collect();
    let mut prev: Option<String> = None;
    let mut last_two: Vec<String> = Vec::new();
    let mut delta = opts.delta0.clone();
    for i in 0..=opts.max_halvings {
        let q = perturbed(p, &dirs, &delta)?;
        match construct_approximant(&q, eps, params, seed) {
            Ok((a, mut trace)) => {
                let sig = trace.signature();
                if prev.as_deref() == Some(sig.as_str()) {
                    trace.delta = Some(format_scalar(&delta));
                    trace.halvings = Some(i);
                    if trace.fallback.is_some() {
                        trace.approximant = WeightedPointSet::from_points(p)?;
                        trace.total_weight = p.len() as u64;
                        return Ok((trace.approximant.clone(), trace));
                    }
                    return Ok((a, trace));
                }
                last_two.push(sig.clone());
                prev = Some(sig);
            }
            Err(Error::GeneralPositionViolation(_)) => {
                prev = None;
            }
            Err(e) => return Err(e),
        }
        delta = delta / Scalar::from_integer(2.into());
    }
    let n = last_two.len();
    let detail = match n {
        0 => "no perturbed copy was in general position".to_string(),
        1 => last_two[0].clone(),
        _ => format!("{} vs {}", last_two[n - 2], last_two[n - 1]),
    };
    Err(Error::NoStabilization {
        halvings: opts.max_halvings,
        detail,
    })
}

/// [`construct_approximant`], routed through [`perturb_and_construct`] when
/// `P` is not in general position.
pub fn approximate(
    p: &PointSequence,
    eps: &Scalar,
    params: &PipelineParams,
    seed: u64,
) -> Result<(WeightedPointSet, PipelineTrace)> {
    match construct_approximant(p, eps, params, seed) {
        Err(Error::GeneralPositionViolation(_)) => {
            perturb_and_construct(p, eps, params, seed, &PerturbOptions::default())
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    #[test]
    fn guarantee_params_example() {
        let p = compute_params(2, &ratio(1, 2), Mode::Guarantee, &ParamOptions::default()).unwrap();
        assert_eq!((p.s, p.arity, p.u), (2, 4, 8));
        assert_eq!(p.family_layers, Some(9));
        assert_eq!(p.family_multiplier.as_deref(), Some("16"));
        assert_eq!(p.t, BigUint::from(314_928u32));
        assert_eq!(p.n0, BigUint::from(2_519_424u32));
        assert!(p.n_ot.is_symbolic());
        assert!(matches!(p.gamma, Quantity::Symbolic(_)));
    }

    #[test]
    fn small_param_examples() {
        let p = compute_params(2, &Scalar::one(), Mode::Guarantee, &ParamOptions::default()).unwrap();
        assert_eq!(p.u, 4);
        let p = compute_params(3, &ratio(1, 3), Mode::Guarantee, &ParamOptions::default()).unwrap();
        assert_eq!((p.s, p.arity), (2, 5));
        assert!(matches!(
            compute_params(2, &ratio(3, 2), Mode::Guarantee, &ParamOptions::default()),
            Err(Error::EpsilonOutOfRange(_))
        ));
    }

    #[test]
    fn guarantee_mode_falls_back() {
        let p = PointSequence::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let params = compute_params(2, &ratio(1, 2), Mode::Guarantee, &ParamOptions::default()).unwrap();
        let (a, trace) = construct_approximant(&p, &ratio(1, 2), &params, 0).unwrap();
        assert!(trace.fallback.is_some());
        assert_eq!(a, WeightedPointSet::from_points(&p).unwrap());
        let strict = ParamOptions {
            strict: true,
            ..ParamOptions::default()
        };
        let params = compute_params(2, &ratio(1, 2), Mode::Guarantee, &strict).unwrap();
        let err = construct_approximant(&p, &ratio(1, 2), &params, 0).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn empirical_moment_run() {
        let rows: Vec<Vec<i64>> = (1..=9).map(|i| vec![i, i * i]).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let p = PointSequence::from_ints(&refs).unwrap();
        let opts = ParamOptions {
            t: Some(8),
            u: Some(1),
            ..ParamOptions::default()
        };
        let params = compute_params(2, &ratio(1, 2), Mode::Empirical, &opts).unwrap();
        let (a, trace) = construct_approximant(&p, &ratio(1, 2), &params, 0).unwrap();
        assert_eq!(trace.fallback, None);
        assert_eq!(trace.m, 1);
        assert_eq!(a.total_weight(), 70);
        assert_eq!(trace.sequences[0].separators, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn fast_path_rejects_non_homogeneous() {
        let p = PointSequence::from_ints(&[&[0, 0], &[2, 0], &[1, 3], &[1, 1]]).unwrap();
        assert!(matches!(
            construct_homogeneous_fast(&p, &ratio(1, 2), None),
            Err(Error::NotHomogeneous)
        ));
    }
}
