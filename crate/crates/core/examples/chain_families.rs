//! Stabbing families of interval chains: build, inspect, verify.
use onesided::chains::{
    build_family, claim_occupancy_check, family_stab_fraction, verify_family, IntervalChain,
    VerifyOptions,
};
use onesided::geometry::{format_scalar, ratio};

fn main() -> onesided::error::Result<()> {
    let eps = ratio(1, 2);
    let fam = build_family(3, &eps, None)?;
    println!("D=3 eps=1/2: K={} m={} t={} |F|={}", fam.layers, fam.multiplier, fam.ambient, fam.size());
    for k in 1..=fam.layers {
        println!("  layer {k}: {} tuples", fam.layer(k).count());
    }

    // consecutive pairs
    let pairs: Vec<(usize, usize)> = (0..fam.ambient / 2).map(|i| (2 * i + 1, 2 * i + 2)).collect();
    let chain = IntervalChain::from_intervals(&pairs, fam.ambient)?;
    println!("stabbed fraction of the pair chain: {}", format_scalar(&family_stab_fraction(&fam, &chain)?));

    let opts = VerifyOptions { samples: 2000, local_search_restarts: 5, seed: 1, ..VerifyOptions::default() };
    let rep = verify_family(&fam, &opts)?;
    println!(
        "sampled verification: {} chains, worst margin {}, verified {}",
        rep.chains_checked,
        format_scalar(&rep.worst_margin),
        rep.verified()
    );

    let j: Vec<usize> = (1..=fam.ambient).step_by(3).collect();
    let occ = claim_occupancy_check(&j, &fam)?;
    println!("occupancy claim on every third element: holds {}", occ.holds);
    Ok(())
}
