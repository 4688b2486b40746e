//! Orthogonality graphs and truth assignments for a few vector sets in C^3 and C^4.

use geproci::configs::{named, BuildOptions};
use geproci::ks::{ortho_graph, truth_assignment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = BuildOptions::default();
    for label in ["ks13", "ks21", "peres33", "penrose"] {
        let g = ortho_graph(&named(label, &opts)?)?;
        let outcome = match truth_assignment(&g) {
            Some(v) => format!("colourable, {} vectors marked", v.iter().filter(|&&on| on).count()),
            None => "no truth assignment".to_string(),
        };
        println!("{label:<8} {} vertices, {} edges, {} bases: {outcome}", g.vertices, g.edges.len(), g.bases.len());
    }
    Ok(())
}
