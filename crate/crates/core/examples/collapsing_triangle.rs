//! A triangle of Baumslag–Solitar groups whose colimit is trivial, shown
//! by coset enumeration over the trivial subgroup.

use triamalg::fpgroup::{abelianization, collapsing_triangle, enumerate_cosets, Strategy};

fn main() -> triamalg::Result<()> {
    let colimit = collapsing_triangle().colimit()?;
    for r in colimit.relators() {
        println!("relator {}", colimit.render(r));
    }
    for strategy in [Strategy::Hlt, Strategy::Felsch] {
        let t = enumerate_cosets(&colimit, &[], 1_000_000, strategy);
        let s = t.stats();
        println!(
            "{strategy:?}: {:?}, index {}, {} cosets defined, at most {} rows",
            t.status(),
            t.live_count(),
            s.defined,
            s.max_rows
        );
    }
    let ab = abelianization(&colimit)?;
    println!("abelianization order: {:?}", ab.order());
    Ok(())
}
