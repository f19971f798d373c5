//! Orientation-homogeneous sequences: generators, the parity rule and
//! longest homogeneous subsequences of random input.
use onesided::generators::{generate, GeneratorKind, GeneratorSpec};
use onesided::homogeneous::{
    geometric_same_side, homogeneity_sign, longest_homogeneous_subsequence, parity_same_side,
    ExtractOptions,
};

fn main() -> onesided::error::Result<()> {
    let moment = generate(&GeneratorSpec::new(GeneratorKind::Moment, 8, 3))?;
    println!("moment curve, n=8, d=3: sign {:?}", homogeneity_sign(&moment));

    let (set, j, j2) = ([1, 4, 6], 0, 7);
    println!(
        "points {j} and {j2} on the same side of {set:?}: parity says {}, geometry says {}",
        parity_same_side(&set, j, j2, moment.len())?,
        geometric_same_side(&moment, &set, j, j2)?
    );

    for n in [8, 12, 16] {
        let p = generate(&GeneratorSpec::new(GeneratorKind::Random, n, 2).seed(1))?;
        let hs = longest_homogeneous_subsequence(&p, &ExtractOptions::default())?;
        println!(
            "random n={n}: longest homogeneous subsequence {:?} (sign {}, optimal {})",
            hs.indices, hs.sign, hs.optimal
        );
    }
    Ok(())
}
