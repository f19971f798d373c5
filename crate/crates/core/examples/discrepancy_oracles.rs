//! One-sided and two-sided discrepancy, nets, and the circle gap witness.
use onesided::discrepancy::{
    eps_net_check, one_sided_discrepancy_exact, proposition_witness, sampled_discrepancy,
    two_sided_discrepancy_exact, SampleStrategy, WeightedPointSet,
};
use onesided::generators::{generate, GeneratorKind, GeneratorSpec};
use onesided::geometry::{format_scalar, ratio, Point};

fn main() -> onesided::error::Result<()> {
    let p = generate(&GeneratorSpec::new(GeneratorKind::Circle, 12, 2))?;
    // every other point, plus the center twice
    let mut items: Vec<(Point, u64)> = p.iter().step_by(2).map(|q| (q.clone(), 1)).collect();
    items.push((Point::from_ints(&[0, 0]), 2));
    let a = WeightedPointSet::from_multiset(2, items)?;

    let one = one_sided_discrepancy_exact(&p, &a)?;
    let two = two_sided_discrepancy_exact(&p, &a)?;
    println!("one-sided {} (witness {:?})", format_scalar(&one.value), one.witness);
    println!("two-sided {}", format_scalar(&two.value));
    let s = sampled_discrepancy(&p, &a, SampleStrategy::LocalSearch, 200, 0, false)?;
    println!("local search lower bound {}", format_scalar(&s.value));
    println!("1/3-net: {:?}", eps_net_check(&p, &a, &ratio(1, 3))?.pass);

    let w = proposition_witness(&p, &a, &ratio(1, 10))?;
    println!("empty triangles {:?}, gap {}", w.empty_triangles, format_scalar(&w.gap));
    Ok(())
}
