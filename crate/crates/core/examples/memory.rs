//! A subset of the Klein configuration whose sextic cones recover every point, plus the CB property.

use geproci::configs::{named, BuildOptions, Tags};
use geproci::geproci::{geprocb, remembers};
use geproci::suite::{memory_subset, quadric_plus_point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = named("klein", &BuildOptions::default())?;
    let idx = memory_subset(&z, 6).ok_or("no 6x6 grid found")?;
    let w = z.subset("klein-memory", &idx, Tags::default())?;
    let r = remembers(&w, &z, 6, 2, 20, 1)?;
    println!("{} of {} points: {:?}, {} of {} probes off Z missed", w.len(), z.len(), r.decision.verdict, r.probes_failing, r.probes);

    let cb = quadric_plus_point(1)?;
    println!("{} points, all but one on a quadric: CB projection {:?}", cb.len(), geprocb(&cb, 2, 1)?.verdict);
    Ok(())
}
