//! Regular partitions and the hypergraph independent-set step.
use onesided::generators::{generate, GeneratorKind, GeneratorSpec};
use onesided::geometry::ratio;
use onesided::regularity::{
    check_partition, equalize_parts, heuristic_partition, independent_set, independent_set_target,
    Hypergraph, Partition, PartitionCheck,
};

fn main() -> onesided::error::Result<()> {
    let p = generate(&GeneratorSpec::new(GeneratorKind::Moment, 12, 2))?;
    let parts = Partition::new((0..4).map(|k| (3 * k..3 * k + 3).collect()).collect(), p.len())?;
    match check_partition(&p, &parts, &ratio(1, 2))? {
        PartitionCheck::Accepted(r) => println!("blocks of 3: accepted, {} exceptional tuples", r.exceptional.len()),
        PartitionCheck::Rejected { exceptional_count, .. } => println!("rejected with {exceptional_count} exceptional tuples"),
    }

    let r = generate(&GeneratorSpec::new(GeneratorKind::Random, 40, 2).seed(3))?;
    let h = heuristic_partition(&r, &ratio(1, 2), 1, 0)?;
    let (eq, dropped) = equalize_parts(&h)?;
    println!("heuristic partition: {} parts, {} points dropped to equalize", eq.len(), dropped.len());

    let edges: Vec<Vec<usize>> = (0..30).map(|i| vec![i, (i + 1) % 30, (i + 7) % 30]).collect();
    let g = Hypergraph::new(3, 30, edges)?;
    let set = independent_set(&g, 42)?;
    println!("independent set of size {} (target {}): {:?}", set.len(), independent_set_target(&g), set);
    Ok(())
}
