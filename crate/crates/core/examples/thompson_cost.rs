//! The bound chain for the cost of Thompson's group G_{2,1}, from the
//! orders of the groups in Brown's triangles.

use triamalg::costlaws::{ten_to_minus, thompson_conclusion};
use triamalg::rational;

fn main() -> triamalg::Result<()> {
    let c = thompson_conclusion(20, &ten_to_minus(15))?;
    for b in &c.bounds {
        let excess = &b.min - rational::one();
        println!("p = {:>2}  bound = 1 + {:.3e}", b.p, rational::to_f64(&excess));
    }
    println!("p = 5 exactly: {}", rational::format(&c.bounds[0].min));
    println!("{}", c.conclusion.as_deref().unwrap_or("no conclusion"));
    Ok(())
}
