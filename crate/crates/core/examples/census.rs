//! Line and plane censuses of the named root systems.

use geproci::combinat::{line_census, plane_census};
use geproci::configs::{named, BuildOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = BuildOptions::default();
    for label in ["d4", "f4", "h4"] {
        let z = named(label, &opts)?;
        let lines = line_census(z.field(), &z.points);
        println!("{label} ({} points) lines: {:?}", z.len(), lines.histogram);
        if z.ambient_dim == 3 {
            println!("{label} planes: {:?}", plane_census(z.field(), &z.points)?.histogram);
        }
    }
    Ok(())
}
