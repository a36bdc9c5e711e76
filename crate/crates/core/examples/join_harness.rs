//! Free joins of relations and triangle joins: one hand-made example of
//! each, then a short seeded run of the property harness.

use triamalg::cli::{random_harness, HarnessConfig};
use triamalg::joins::{is_free_amalgamated_join, is_triangle_join, RelationTriple, TriangleSystem};
use triamalg::mesrel::{FiniteMeasuredSpace, FiniteRelation};

fn rel(labels: &[u32]) -> FiniteRelation {
    FiniteRelation::from_labels(labels.to_vec())
}

fn main() -> triamalg::Result<()> {
    let space = FiniteMeasuredSpace::uniform(4);
    // Two partitions into pairs that close up into a 4-cycle.
    let t = RelationTriple::new(space.clone(), rel(&[0, 0, 1, 1]), rel(&[0, 1, 0, 1]), FiniteRelation::diagonal(4))?;
    let d = is_free_amalgamated_join(&t);
    println!("4-cycle free: {}\n  witness: {:?}", d.free, d.witness);

    let sys = TriangleSystem::new(space, [rel(&[0, 0, 1, 2]), rel(&[0, 1, 1, 2]), rel(&[0, 1, 2, 2])])?;
    let v = is_triangle_join(&sys, None);
    println!("path system: {:?}, minimal: {}", v.status, sys.is_minimal());

    let mut config = HarnessConfig::new(0, 200, 8);
    config.systems = 50;
    let s = random_harness(&config)?;
    println!("{}", serde_json::to_string_pretty(&s).expect("summary serializes"));
    Ok(())
}
