//! Full pipeline in empirical mode with explicit small parameters, then the
//! exact one-sided discrepancy of the result.
use onesided::discrepancy::one_sided_discrepancy_exact;
use onesided::generators::{generate, GeneratorKind, GeneratorSpec};
use onesided::geometry::{format_scalar, ratio};
use onesided::pipeline::{approximate, compute_params, Mode, ParamOptions};

fn main() -> onesided::error::Result<()> {
    let eps = ratio(1, 2);
    let p = generate(&GeneratorSpec::new(GeneratorKind::Circle, 13, 2))?;

    let default = compute_params(2, &eps, Mode::Empirical, &ParamOptions::default())?;
    println!("default: t={} u={} n0={}", default.t, default.u, default.n0);

    let opts = ParamOptions { t: Some(6), u: Some(2), ..ParamOptions::default() };
    let params = compute_params(2, &eps, Mode::Empirical, &opts)?;
    let (a, trace) = approximate(&p, &eps, &params, 0)?;
    println!(
        "n={} M={} m={} |F|={} discarded={} fallback={:?}",
        trace.n,
        trace.part_count,
        trace.m,
        trace.family_size,
        trace.discarded.len(),
        trace.fallback
    );
    println!("approximant: {} distinct points, total weight {}", a.len(), a.total_weight());
    let d = one_sided_discrepancy_exact(&p, &a)?;
    println!("one-sided discrepancy {} vs eps {}", format_scalar(&d.value), format_scalar(&eps));
    Ok(())
}
