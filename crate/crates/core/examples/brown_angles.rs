//! Brown's triangle of symmetric groups: fillability, cores and angles.
//!
//!     cargo run --release --example brown_angles -- 5

use triamalg::diagram::{brown_triangle, ReportOptions};
use triamalg::fpgroup::angle::DEFAULT_MAX_N;
use triamalg::perm::DEFAULT_CLOSURE_CAP;

fn main() -> triamalg::Result<()> {
    let p: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let d = brown_triangle(p, DEFAULT_CLOSURE_CAP)?;
    let r = d.report(ReportOptions { angles: true, retri: false, max_n: DEFAULT_MAX_N })?;
    println!("p = {p}");
    for (name, order) in r.vertex_names.iter().zip(&r.vertex_orders) {
        println!("  vertex {name}: order {order}");
    }
    println!("  fillable: {:?}, minimal: {:?}", r.fillable, r.minimal);
    println!("  cores: {:?}", r.core_orders.unwrap_or_default());
    for a in r.angles.unwrap_or_default() {
        println!("  angle at {}: {} (n = {:?})", a.vertex, a.theta, a.n);
    }
    if let Some(s) = r.angle_sum {
        println!("  angle sum: {}π, exceeds π: {}", s.sum_over_pi, s.sum_exceeds_pi);
    }
    Ok(())
}
