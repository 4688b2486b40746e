//! Certify that the D4 and F4 configurations project to complete intersections, and that a grid does too.

use geproci::configs::{named, roots_grid, BuildOptions};
use geproci::geproci::is_geproci;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = BuildOptions::default();
    let cases = [(named("d4", &opts)?, 3, 4), (named("f4", &opts)?, 4, 6), (roots_grid(3, 5, &opts)?, 3, 5)];
    for (z, a, b) in &cases {
        let d = is_geproci(z, *a, *b, 3, 1)?;
        println!("{:<8} ({a},{b}): {:?} - {}", z.label, d.verdict, d.reason);
    }
    let wrong = is_geproci(&cases[0].0, 2, 6, 3, 1)?;
    println!("d4 as (2,6): {:?}", wrong.verdict);
    Ok(())
}
