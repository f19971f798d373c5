//! Radon and Tverberg partitions with exact common points.
use onesided::generators::{generate, GeneratorKind, GeneratorSpec};
use onesided::geometry::format_scalar;
use onesided::tverberg::{point_selection_check, radon_point, selection_arity, tverberg_point};

fn main() -> onesided::error::Result<()> {
    let q = generate(&GeneratorSpec::new(GeneratorKind::Random, 4, 2).seed(9))?;
    let r = radon_point(q.points())?;
    println!("radon partition {:?} at {:?}", r.partition, coords(&r.point));

    for d in 2..=3 {
        let (s, arity) = selection_arity(d);
        let q = generate(&GeneratorSpec::new(GeneratorKind::Random, arity, d).seed(d as u64))?;
        let t = tverberg_point(q.points(), s)?;
        println!("d={d}: {s} parts over {arity} points {:?}, verified {}", t.partition, t.verify(q.points())?);
    }

    // every d+1 odd-indexed points of a homogeneous sequence surround the even ones
    let p = generate(&GeneratorSpec::new(GeneratorKind::Moment, 9, 2))?;
    println!("point selection on the moment curve: {}", point_selection_check(&p)?);
    Ok(())
}

fn coords(p: &onesided::geometry::Point) -> Vec<String> {
    p.coords().iter().map(format_scalar).collect()
}
