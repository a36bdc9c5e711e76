//! Cost of the orbit relation of a free action of a finite group.

use triamalg::mesrel::{regular_action, relation_from_action, relation_min_cost};
use triamalg::perm::{PermGroup, Permutation, DEFAULT_CLOSURE_CAP};
use triamalg::rational;

fn main() -> triamalg::Result<()> {
    for n in 2..=5u32 {
        let cycle = Permutation::new((0..n).map(|i| (i + 1) % n).collect())?;
        let swap = Permutation::new((0..n).map(|i| if i < 2 { 1 - i } else { i }).collect())?;
        for (name, gens) in [(format!("Z{n}"), vec![cycle.clone()]), (format!("S{n}"), vec![cycle, swap])] {
            let g = PermGroup::closure(n as usize, &gens, DEFAULT_CLOSURE_CAP)?;
            // Two copies of the regular action: still free, same cost.
            let (space, action) = regular_action(&g, 2);
            let a = relation_from_action(&g, &space, &action)?;
            let cost = relation_min_cost(&a.relation, &space)?.cost;
            println!("{name:>3}  |G| = {:>3}  free: {}  cost = {}", g.order(), a.free, rational::format(&cost));
        }
    }
    Ok(())
}
