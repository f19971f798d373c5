//! Direct construction on a sequence that is already homogeneous.
use onesided::chains::complete_family;
use onesided::discrepancy::one_sided_discrepancy_exact;
use onesided::generators::{generate, GeneratorKind, GeneratorSpec};
use onesided::geometry::{format_scalar, ratio};
use onesided::pipeline::construct_homogeneous_fast;

fn main() -> onesided::error::Result<()> {
    let eps = ratio(1, 1);
    let p = generate(&GeneratorSpec::new(GeneratorKind::Circle, 12, 2))?;
    let fam = complete_family(4, 6, eps.clone())?;
    let (a, st) = construct_homogeneous_fast(&p, &eps, Some(&fam))?;
    println!("separators {:?}", st.separators);
    println!("{} tuples, total weight {}", st.tuples.len(), a.total_weight());
    let d = one_sided_discrepancy_exact(&p, &a)?;
    println!("one-sided discrepancy {}", format_scalar(&d.value));
    Ok(())
}
