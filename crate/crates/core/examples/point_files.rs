//! Reading and writing point files with exact rational coordinates.
use onesided::generators::{generate, GeneratorKind, GeneratorSpec};
use onesided::io::PointSetFile;

fn main() -> onesided::error::Result<()> {
    let mut spec = GeneratorSpec::new(GeneratorKind::StretchedDiagonal, 5, 2);
    spec.base = Some(3);
    let p = generate(&spec)?;
    let file = PointSetFile::from_points(&p);
    let text = file.to_json()?;
    println!("{text}");
    let back = PointSetFile::from_json(&text)?.to_points()?;
    println!("round trip exact: {}", back == p);
    Ok(())
}
