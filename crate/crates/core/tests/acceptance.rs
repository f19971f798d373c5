//! Acceptance suite. One line per criterion:
//!
//! `[PASS] <criterion> (<seconds>s): <details>` or `[FAIL] ...`
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use onesided::chains::{
    self, build_family, claim_occupancy_check, complete_family, layered_family, IntervalChain,
    StabTuple, VerifyMode, VerifyOptions,
};
use onesided::discrepancy::{
    eps_net_check, one_sided_discrepancy_exact, one_sided_over_closed_sets, proposition_witness,
    sampled_discrepancy, two_sided_discrepancy_exact, SampleStrategy, WeightedPointSet,
};
use onesided::generators::{generate, random_homogeneous, GeneratorKind, GeneratorSpec};
use onesided::geometry::{
    for_each_combination, format_scalar, hulls_intersect, in_convex_hull, is_general_position,
    orient, ratio, Point, PointSequence, Scalar,
};
use onesided::homogeneous::{geometric_same_side, is_orientation_homogeneous, parity_same_side};
use onesided::pipeline::{
    approximate, compute_params, construct_approximant, construct_homogeneous_fast,
    perturb_and_construct, Mode, ParamOptions, PerturbOptions, SequenceTrace,
};
use onesided::regularity::{independent_set, Hypergraph};
use onesided::tverberg::point_selection_check;

// Runtime budgets per criterion.
const BUDGET_PARITY: Duration = Duration::from_secs(60);
const BUDGET_SELECTION: Duration = Duration::from_secs(120);
const BUDGET_INDEPENDENT: Duration = Duration::from_secs(60);
const BUDGET_CHAINS: Duration = Duration::from_secs(300);
const BUDGET_CONTAINMENT: Duration = Duration::from_secs(300);
const BUDGET_END_TO_END: Duration = Duration::from_secs(600);
const BUDGET_LOWER_BOUND: Duration = Duration::from_secs(60);
const BUDGET_ORACLES: Duration = Duration::from_secs(120);
const BUDGET_DEGENERACY: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn moment(n: usize, d: usize) -> PointSequence {
    generate(&GeneratorSpec::new(GeneratorKind::Moment, n, d)).unwrap()
}

fn reversed(p: &PointSequence) -> PointSequence {
    PointSequence::new(p.dim(), p.points().iter().rev().cloned().collect()).unwrap()
}

fn frac(a: u64, b: u64) -> Scalar {
    Scalar::new(BigInt::from(a), BigInt::from(b))
}

/// Odd/even split of a `(d+2)`-subset has intersecting hulls; parity side
/// prediction agrees with orientation signs for every `d`-subset.
fn parity_criterion() -> Outcome {
    let (mut hull_checks, mut side_checks) = (0u64, 0u64);
    for d in [2usize, 3] {
        for n in d + 2..=10 {
            for p in [moment(n, d), reversed(&moment(n, d))] {
                if !is_orientation_homogeneous(&p) {
                    return Err(format!("moment curve n={n} d={d} not homogeneous"));
                }
                let mut bad = None;
                for_each_combination(n, d + 2, |c| {
                    let odd: Vec<Point> = c.iter().step_by(2).map(|&i| p[i].clone()).collect();
                    let even: Vec<Point> = c.iter().skip(1).step_by(2).map(|&i| p[i].clone()).collect();
                    hull_checks += 1;
                    if !hulls_intersect(&odd, &even).unwrap() {
                        bad = Some(c.to_vec());
                    }
                    bad.is_none()
                });
                if let Some(c) = bad {
                    return Err(format!("hulls disjoint for I = {c:?} (n={n}, d={d})"));
                }
                for_each_combination(n, d, |set| {
                    let outside: Vec<usize> = (0..n).filter(|i| !set.contains(i)).collect();
                    for (x, &j) in outside.iter().enumerate() {
                        for &j2 in &outside[x + 1..] {
                            let side = |k: usize| {
                                let mut tuple: Vec<&Point> = set.iter().map(|&i| &p[i]).collect();
                                tuple.push(&p[k]);
                                orient(&tuple).unwrap()
                            };
                            let geometric = side(j) == side(j2);
                            let predicted = parity_same_side(set, j, j2, n).unwrap();
                            side_checks += 1;
                            if geometric != predicted
                                || geometric != geometric_same_side(&p, set, j, j2).unwrap()
                            {
                                bad = Some(vec![j, j2]);
                                return false;
                            }
                        }
                    }
                    true
                });
                if let Some(c) = bad {
                    return Err(format!("side disagreement at pair {c:?} (n={n}, d={d})"));
                }
            }
        }
    }
    Ok(format!("{hull_checks} odd/even hull pairs intersect, {side_checks} side predictions agree"))
}

fn selection_criterion() -> Outcome {
    for (count, n, d) in [(500usize, 9usize, 2usize), (200, 11, 3)] {
        for seed in 0..count as u64 {
            let p = PointSequence::new(d, random_homogeneous(n, d, seed)).unwrap();
            if !is_orientation_homogeneous(&p) {
                return Err(format!("generator produced a non-homogeneous sequence (seed {seed})"));
            }
            if !point_selection_check(&p).unwrap() {
                return Err(format!("point selection fails for d={d}, seed {seed}"));
            }
        }
    }
    Ok("500/500 (n=9, d=2) and 200/200 (n=11, d=3) sequences pass".into())
}

/// Least `k` with `(4k)^(r-1) |E| >= n^r`, i.e. `k >= (1/4) beta^(-1/(r-1))`.
fn target_size(n: u128, r: u32, e: u128) -> u128 {
    (1..).find(|&k: &u128| (4 * k).pow(r - 1) * e >= n.pow(r)).unwrap()
}

fn independent_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut min_slack = i128::MAX;
    for run in 0..100 {
        let r = 2 + run % 2;
        let n: usize = rng.gen_range(12..=40);
        // precondition (2n)^(r-1) |E| >= n^r  <=>  |E| >= n / 2^(r-1)
        let lo = (n as u128).pow(r as u32).div_ceil((2 * n as u128).pow(r as u32 - 1)) as usize;
        let hi = if r == 2 { n * (n - 1) / 2 } else { (n * (n - 1) * (n - 2) / 6).min(4 * n) };
        let m = rng.gen_range(lo..=hi.max(lo));
        let mut edges = BTreeSet::new();
        while edges.len() < m {
            let mut e: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, r).copied().collect();
            e.sort_unstable();
            edges.insert(e);
        }
        let e_count = edges.len() as u128;
        if (2 * n as u128).pow(r as u32 - 1) * e_count < (n as u128).pow(r as u32) {
            return Err(format!("run {run}: generated hypergraph misses the precondition"));
        }
        let h = Hypergraph::new(r, n, edges.iter().cloned().collect()).unwrap();
        let set = independent_set(&h, run as u64).map_err(|e| format!("run {run}: {e}"))?;
        let spans = edges.iter().any(|e| e.iter().all(|v| set.contains(v)));
        if spans {
            return Err(format!("run {run}: returned set spans an edge"));
        }
        let target = target_size(n as u128, r as u32, e_count);
        if (set.len() as u128) < target {
            return Err(format!("run {run}: |set| = {} < {target}", set.len()));
        }
        min_slack = min_slack.min(set.len() as i128 - target as i128);
    }
    Ok(format!("100/100 independent and large enough (min excess {min_slack})"))
}

fn chains_criterion() -> Outcome {
    let eps = ratio(1, 2);
    let f = build_family(3, &eps, None).unwrap();
    let sizes: Vec<usize> = (0..f.layers).map(|k| f.layer(k).count()).collect();
    if (f.layers, f.ambient, f.size()) != (5, 256, 248) || sizes != [128, 64, 32, 16, 8] {
        return Err(format!("K={}, t={}, |F|={}, layers {sizes:?}", f.layers, f.ambient, f.size()));
    }
    if !(2 * f.size() >= f.ambient as u64 && f.size() < f.ambient as u64) {
        return Err("t/2 <= |F| < t fails".into());
    }
    let opts = VerifyOptions {
        mode: VerifyMode::Sampled,
        samples: 10_000,
        local_search_restarts: 100,
        seed: 5,
        ..VerifyOptions::default()
    };
    let rep = chains::verify_family(&f, &opts).unwrap();
    // recompute the witness margin independently
    let stab: u64 = f
        .members
        .iter()
        .filter(|m| stabs_oracle(m.tuple.values(), rep.witness.boundaries()))
        .map(|m| m.weight)
        .sum();
    let margin = frac(stab, f.size()) - (frac(rep.witness.len() as u64, 256) - &eps);
    if margin != rep.worst_margin {
        return Err(format!(
            "witness margin {} differs from recomputed {}",
            format_scalar(&rep.worst_margin),
            format_scalar(&margin)
        ));
    }
    if rep.worst_margin < Scalar::zero() {
        return Err(format!("negative margin {}", format_scalar(&rep.worst_margin)));
    }
    let small = layered_family(3, 3, 2, eps.clone(), 16).unwrap();
    for mask in 0u32..1 << 16 {
        let j: Vec<usize> = (1..=16).filter(|x| mask >> (x - 1) & 1 == 1).collect();
        let occ = claim_occupancy_check(&j, &small).unwrap();
        if !occ.holds || occ.fully_occupied_not_stabbing.iter().any(|&c| c > 2) {
            return Err(format!("occupancy claim fails at t=16 for J={j:?}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..1000 {
        let density = rng.gen_range(0.0..1.0);
        let j: Vec<usize> = (1..=256).filter(|_| rng.gen_bool(density)).collect();
        let occ = claim_occupancy_check(&j, &f).unwrap();
        if !occ.holds || occ.fully_occupied_not_stabbing.iter().any(|&c| c > 2) {
            return Err(format!("occupancy claim fails at t=256 for J={j:?}"));
        }
    }
    Ok(format!(
        "K=5 t=256 |F|=248; worst sampled margin {} over {} chains; occupancy claim 65536/65536 at t=16, 1000/1000 at t=256",
        format_scalar(&rep.worst_margin),
        rep.chains_checked
    ))
}

/// Each value in a distinct interval `[b_i, b_{i+1} - 1]`.
fn stabs_oracle(x: &[usize], b: &[usize]) -> bool {
    let mut used = vec![false; b.len()];
    x.iter().all(|&v| {
        (0..b.len() - 1).any(|i| {
            let hit = b[i] <= v && v < b[i + 1] && !used[i];
            if hit {
                used[i] = true;
            }
            hit
        })
    }) && x.windows(2).all(|w| w[0] < w[1])
}

struct ContainmentStats {
    sets: u64,
    implications: u64,
    worst_slack: Scalar,
}

/// Over every convex set spanned by a subset of the sequence's points:
/// stabbing implies containment of the Tverberg point, and the slack of the
/// fraction bound `|C ∩ A_i| / |A_i| - (alpha - 3 eps / 4)`.
fn containment_on(p: &PointSequence, st: &SequenceTrace, eps: &Scalar) -> Result<ContainmentStats, String> {
    let mem = &st.members;
    let t = st.separators.len();
    let total: u64 = st.tuples.iter().map(|x| x.weight).sum();
    let mut stats = ContainmentStats {
        sets: 0,
        implications: 0,
        worst_slack: Scalar::from_integer(1.into()),
    };
    for mask in 1u32..1 << mem.len() {
        let gens: Vec<Point> = (0..mem.len()).filter(|i| mask >> i & 1 == 1).map(|i| p[mem[i]].clone()).collect();
        let inside = |q: &Point| in_convex_hull(q, &gens).unwrap();
        let in_c = mem.iter().filter(|&&i| inside(&p[i])).count() as u64;
        let alpha = frac(in_c, mem.len() as u64);
        let a_in: u64 = st.tuples.iter().filter(|x| inside(&x.point)).map(|x| x.weight).sum();
        let slack = frac(a_in, total) - (alpha - eps * ratio(3, 4));
        if slack < stats.worst_slack {
            stats.worst_slack = slack;
        }
        stats.sets += 1;
        let j: Vec<usize> = (1..=t).filter(|&j| st.blocks[j - 1].iter().any(|&i| inside(&p[i]))).collect();
        if j.len() < 2 {
            continue;
        }
        let chain = IntervalChain::new(j.iter().map(|x| x + 1).collect(), t).unwrap();
        for tt in &st.tuples {
            if chains::stabs(&StabTuple::new(tt.x.clone()).unwrap(), &chain).unwrap() {
                stats.implications += 1;
                if !inside(&tt.point) {
                    return Err(format!("tuple {:?} stabs J={j:?} but its point is outside C", tt.x));
                }
            }
        }
    }
    Ok(stats)
}

fn containment_criterion() -> Outcome {
    let mut implications = 0;
    let mut sets = 0;
    let mut info = Vec::new();
    // nonempty blocks (u >= 2) with |S_i| <= 12 leave t <= 6 for D = 4; the
    // fraction bound is checked at eps = 1 with the complete family on [6]
    let eps_one = Scalar::from_integer(1.into());
    let fam6 = complete_family(4, 6, eps_one.clone()).unwrap();
    let vopts = VerifyOptions {
        mode: VerifyMode::Exhaustive,
        ..VerifyOptions::default()
    };
    let mut half = fam6.clone();
    half.epsilon = ratio(1, 2);
    let family_margin = chains::verify_family(&half, &vopts).unwrap().worst_margin;
    let p = moment(12, 2);
    let (_, st) = construct_homogeneous_fast(&p, &eps_one, Some(&fam6)).unwrap();
    let s = containment_on(&p, &st, &eps_one)?;
    if s.worst_slack < Scalar::zero() {
        return Err(format!("fraction bound fails: slack {}", format_scalar(&s.worst_slack)));
    }
    implications += s.implications;
    sets += s.sets;
    let bound_slack = s.worst_slack.clone();
    // stab => containment for other block lengths and families (any family)
    for (n, t, u) in [(8usize, 4usize, 2usize), (12, 4, 3), (10, 5, 2), (12, 6, 2)] {
        for q in [moment(n, 2), reversed(&moment(n, 2)), moment(n.min(10), 3)] {
            let d = q.dim();
            let arity = if d == 2 { 4 } else { 5 };
            if t < arity || q.len() < t * u {
                continue;
            }
            let eps = ratio(1, 2);
            let fam = complete_family(arity, t, eps.clone()).unwrap();
            let (_, st) = construct_homogeneous_fast(&q, &eps, Some(&fam)).unwrap();
            let s = containment_on(&q, &st, &eps)?;
            implications += s.implications;
            sets += s.sets;
            info.push(format!("t={t},u={u},d={d}: slack {}", format_scalar(&s.worst_slack)));
        }
    }
    // a sequence extracted by the full pipeline
    let p = moment(12, 2);
    let opts = ParamOptions {
        t: Some(6),
        u: Some(2),
        ..ParamOptions::default()
    };
    let params = compute_params(2, &eps_one, Mode::Empirical, &opts).unwrap();
    let (_, trace) = construct_approximant(&p, &eps_one, &params, 3).unwrap();
    if trace.fallback.is_some() || trace.sequences.is_empty() {
        return Err(format!("pipeline fell back: {:?}", trace.fallback));
    }
    for st in &trace.sequences {
        let s = containment_on(&p, st, &eps_one)?;
        if s.worst_slack < Scalar::zero() {
            return Err("fraction bound fails on a pipeline sequence".into());
        }
        implications += s.implications;
        sets += s.sets;
    }
    Ok(format!(
        "{sets} convex sets, {implications} stab=>contain implications hold; fraction bound slack {} (eps=1, t=6, u=2; family margin at eps/2: {}); informational eps=1/2 toy slacks [{}]",
        format_scalar(&bound_slack),
        format_scalar(&family_margin),
        info.join("; ")
    ))
}

fn end_to_end_criterion() -> Outcome {
    let mut passed = 0;
    let mut total = 0;
    let mut fallbacks = 0;
    let (mut toy_ok, mut toy_built, mut toy_total) = (0, 0, 0);
    for kind in [GeneratorKind::Moment, GeneratorKind::Circle, GeneratorKind::Random] {
        for eps in [ratio(1, 2), ratio(1, 4)] {
            for n in 3..=12 {
                let p = generate(&GeneratorSpec::new(kind, n, 2).seed(n as u64)).unwrap();
                let params = compute_params(2, &eps, Mode::Empirical, &ParamOptions::default()).unwrap();
                let (a, trace) = approximate(&p, &eps, &params, 11).unwrap();
                total += 1;
                fallbacks += usize::from(trace.fallback.is_some());
                let v = one_sided_discrepancy_exact(&p, &a).unwrap().value;
                if v <= eps {
                    passed += 1;
                } else {
                    return Err(format!("{kind:?} n={n} eps={}: discrepancy {}", format_scalar(&eps), format_scalar(&v)));
                }
                // informational: toy parameters far below the guarantee
                let toy = ParamOptions {
                    t: Some(8),
                    u: Some(1),
                    ..ParamOptions::default()
                };
                let params = compute_params(2, &eps, Mode::Empirical, &toy).unwrap();
                let (a, trace) = approximate(&p, &eps, &params, 11).unwrap();
                toy_total += 1;
                toy_built += usize::from(trace.fallback.is_none());
                toy_ok += usize::from(one_sided_discrepancy_exact(&p, &a).unwrap().value <= eps);
            }
        }
    }
    Ok(format!(
        "{passed}/{total} within eps ({fallbacks} via the n < n0 fallback); informational toy t=8,u=1: {toy_built} constructed, {toy_ok}/{toy_total} within eps"
    ))
}

fn lower_bound_criterion() -> Outcome {
    let n = 100;
    let p = generate(&GeneratorSpec::new(GeneratorKind::Circle, n, 2)).unwrap();
    let eps = ratio(1, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut min_gap: Option<Scalar> = None;
    for case in 0..20 {
        let mut items = Vec::new();
        let mut w = 0;
        while w < 10 {
            let m = rng.gen_range(1..=(10 - w).min(3));
            let c: Vec<Scalar> = (0..2).map(|_| ratio(rng.gen_range(-900..=900), 1000)).collect();
            items.push((Point::new(c), m));
            w += m;
        }
        let a = WeightedPointSet::from_multiset(2, items).unwrap();
        let wit = proposition_witness(&p, &a, &eps).map_err(|e| format!("case {case}: {e}"))?;
        let gc: Vec<Point> = wit.c_generators.iter().map(|&i| p[i].clone()).collect();
        let gc2: Vec<Point> = wit.c2_generators.iter().map(|&i| p[i].clone()).collect();
        for (x, _) in a.entries() {
            if in_convex_hull(x, &gc).unwrap() != in_convex_hull(x, &gc2).unwrap() {
                return Err(format!("case {case}: C and C' differ on A"));
            }
        }
        let count = |g: &[Point]| p.iter().filter(|q| in_convex_hull(q, g).unwrap()).count() as u64;
        let gap = frac(count(&gc2) - count(&gc), n as u64);
        if gap != wit.gap || gap <= eps || !wit.refutes {
            return Err(format!("case {case}: gap {} (reported {})", format_scalar(&gap), format_scalar(&wit.gap)));
        }
        if min_gap.as_ref().is_none_or(|g| gap < *g) {
            min_gap = Some(gap);
        }
    }
    Ok(format!("20/20 witnesses verified, smallest gap {}", format_scalar(&min_gap.unwrap())))
}

fn oracle_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..50 {
        let d = 2 + usize::from(case % 5 == 4);
        let np = rng.gen_range(2..=6);
        let na = rng.gen_range(1..=10 - np);
        let pt = |rng: &mut ChaCha8Rng| Point::from_ints(&(0..d).map(|_| rng.gen_range(-6..=6)).collect::<Vec<_>>());
        let mut pts: Vec<Point> = Vec::new();
        while pts.len() < np {
            let q = pt(&mut rng);
            if !pts.contains(&q) {
                pts.push(q);
            }
        }
        let p = PointSequence::new(d, pts).unwrap();
        let a = WeightedPointSet::from_multiset(d, (0..na).map(|_| (pt(&mut rng), rng.gen_range(1..=3)))).unwrap();
        let one = one_sided_discrepancy_exact(&p, &a).unwrap();
        let two = two_sided_discrepancy_exact(&p, &a).unwrap();
        if one.value > two.value {
            return Err(format!("case {case}: one-sided exceeds two-sided"));
        }
        let closed = one_sided_over_closed_sets(&p, &a).unwrap();
        if closed != one.value {
            return Err(format!("case {case}: reduction mismatch {} vs {}", format_scalar(&one.value), format_scalar(&closed)));
        }
        for strategy in [SampleStrategy::RandomSubsets, SampleStrategy::Halfspaces, SampleStrategy::LocalSearch] {
            let s1 = sampled_discrepancy(&p, &a, strategy, 200, case, false).unwrap();
            let s2 = sampled_discrepancy(&p, &a, strategy, 200, case, true).unwrap();
            if s1.value > one.value || s2.value > two.value {
                return Err(format!("case {case}: sampled value exceeds exact ({strategy:?})"));
            }
        }
        // witness re-evaluation
        let gens: Vec<Point> = one.witness.iter().map(|&i| p[i].clone()).collect();
        let (pc, aw) = if gens.is_empty() {
            (0, 0)
        } else {
            (
                p.iter().filter(|q| in_convex_hull(q, &gens).unwrap()).count() as u64,
                a.entries().iter().filter(|(q, _)| in_convex_hull(q, &gens).unwrap()).map(|e| e.1).sum(),
            )
        };
        if frac(pc, p.len() as u64) - frac(aw, a.total_weight()) != one.value {
            return Err(format!("case {case}: witness does not reproduce the value"));
        }
        if one.value <= ratio(1, 3) && eps_net_check(&p, &a, &ratio(1, 3)).unwrap().pass != Some(true) {
            return Err(format!("case {case}: one-sided 1/3 approximant is not a 1/3-net"));
        }
    }
    Ok("50/50 instances: one <= two, sampled <= exact, reduction exact, witnesses reproduce".into())
}

fn degenerate(i: usize) -> PointSequence {
    let d = if i % 4 == 3 { 3 } else { 2 };
    let mut pts: Vec<Point> = moment(8, d).points().to_vec();
    match i % 4 {
        0 => {
            let (a, b) = (i % 8, (i + 3) % 8);
            let mid = &(&pts[a] + &pts[b]) * &ratio(1, 2);
            pts.push(mid);
        }
        1 => pts.push(pts[i % 8].clone()),
        2 => {
            pts = generate(&GeneratorSpec::new(GeneratorKind::Grid, 8 + i % 3, 2)).unwrap().points().to_vec();
        }
        _ => {
            let s = &(&pts[0] + &pts[2 + i % 5]) + &pts[7];
            pts.push(&s * &ratio(1, 3));
        }
    }
    PointSequence::new(d, pts).unwrap()
}

fn degeneracy_criterion() -> Outcome {
    let eps = ratio(1, 2);
    let (mut built, mut max_halvings) = (0, 0);
    for i in 0..20 {
        let p = degenerate(i);
        if is_general_position(&p) {
            return Err(format!("input {i} is in general position"));
        }
        // toy parameters so that the construction (not only the fallback) runs
        let opts = ParamOptions {
            t: Some(8),
            u: Some(1),
            ..ParamOptions::default()
        };
        let params = compute_params(p.dim(), &eps, Mode::Empirical, &opts).unwrap();
        let (a, trace) = perturb_and_construct(&p, &eps, &params, 7, &PerturbOptions::default())
            .map_err(|e| format!("input {i}: {e}"))?;
        let h = trace.halvings.ok_or(format!("input {i}: no perturbation recorded"))?;
        max_halvings = max_halvings.max(h);
        built += usize::from(trace.fallback.is_none());
        let v = one_sided_discrepancy_exact(&p, &a).unwrap().value;
        if v > eps {
            return Err(format!("input {i}: discrepancy {}", format_scalar(&v)));
        }
    }
    Ok(format!(
        "20/20 stabilized (at most {max_halvings} halvings, {built} through the construction) and within eps"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("parity criterion and odd/even hulls", parity_criterion, BUDGET_PARITY),
        ("point selection", selection_criterion, BUDGET_SELECTION),
        ("random independent set", independent_criterion, BUDGET_INDEPENDENT),
        ("layered stabbing family", chains_criterion, BUDGET_CHAINS),
        ("stab implies containment / fraction bound", containment_criterion, BUDGET_CONTAINMENT),
        ("end-to-end one-sided discrepancy", end_to_end_criterion, BUDGET_END_TO_END),
        ("convex-position lower bound witness", lower_bound_criterion, BUDGET_LOWER_BOUND),
        ("oracle self-consistency", oracle_criterion, BUDGET_ORACLES),
        ("degenerate inputs", degeneracy_criterion, BUDGET_DEGENERACY),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let (ok, detail) = match res {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {}s", budget.as_secs())),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "[{}] {name} ({:.1}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
