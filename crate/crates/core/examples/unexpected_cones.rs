//! Unexpected cones through root-system configurations.

use geproci::configs::{named, BuildOptions};
use geproci::unexpected::{report, Support};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = BuildOptions::default();
    for (label, degrees) in [("d4", &[3usize, 4][..]), ("f4", &[4, 6][..]), ("penrose", &[5, 8][..])] {
        let z = named(label, &opts)?;
        for &t in degrees {
            let r = report(z.field(), Support::Points(&z.points), t, t, 3, 1)?;
            println!("{label:<8} degree {t}: adim {} vdim {} unexpected {}", r.adim, r.vdim, r.unexpected);
        }
    }
    Ok(())
}
