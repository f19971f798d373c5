//! Collinear input: the pipeline perturbs until general position holds.
use onesided::geometry::{is_general_position, ratio, PointSequence};
use onesided::pipeline::{approximate, compute_params, Mode, ParamOptions};

fn main() -> onesided::error::Result<()> {
    let rows: Vec<Vec<i64>> = (0..12).map(|i| vec![i, if i % 3 == 0 { 0 } else { i * i }]).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    let p = PointSequence::from_ints(&refs)?;
    println!("general position: {}", is_general_position(&p));

    let eps = ratio(1, 2);
    let opts = ParamOptions { t: Some(6), u: Some(2), ..ParamOptions::default() };
    let params = compute_params(2, &eps, Mode::Empirical, &opts)?;
    let (a, trace) = approximate(&p, &eps, &params, 7)?;
    println!("halvings {:?}, delta {:?}", trace.halvings, trace.delta);
    println!("fallback {:?}, total weight {}", trace.fallback, a.total_weight());
    Ok(())
}
