//! Tell three same-census half grids apart by their incidence structure.

use geproci::combinat::{line_census, weak_comb_equivalent};
use geproci::suite::five_six_sets;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sets = five_six_sets()?;
    for z in &sets {
        println!("{}: {:?}", z.label, line_census(z.field(), &z.points).histogram);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let e = weak_comb_equivalent(&sets[i], &sets[j], 12)?;
        println!("{} vs {}: {e:?}", sets[i].label, sets[j].label);
    }
    Ok(())
}
