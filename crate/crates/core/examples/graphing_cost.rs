//! Costs of graphings on a weighted finite space, against the minimal cost
//! of the relation they generate.

use triamalg::mesrel::{
    generate_relation, graphing_cost, is_treeing, relation_min_cost, FiniteMeasuredSpace, Graphing,
    PartialBijection,
};
use triamalg::rational::{self, rat};

fn main() -> triamalg::Result<()> {
    let space = FiniteMeasuredSpace::new(vec![rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 8), rat(1, 8)])?;
    let path = Graphing::new(vec![PartialBijection::new(vec![(0, 1), (3, 4)])]);
    let cycle = Graphing::new(vec![
        PartialBijection::new(vec![(0, 1), (1, 2)]),
        PartialBijection::new(vec![(2, 0)]),
    ]);
    for (name, g) in [("two edges", &path), ("triangle", &cycle)] {
        let r = generate_relation(&space, g)?;
        let min = relation_min_cost(&r, &space)?;
        println!(
            "{name}: cost {}, relation classes {:?}, minimal cost {}, treeing: {}",
            rational::format(&graphing_cost(&space, g)?),
            r.classes(),
            rational::format(&min.cost),
            is_treeing(&space, g)?
        );
    }
    Ok(())
}
