//! Orthogonality graphs and the search for `{0,1}` truth assignments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configs::{ConfigError, Configuration};
use crate::field::{choose_prime, SymbolConstraint};
use crate::linalg::{dot, Matrix};

#[derive(Debug, Error)]
pub enum KsError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error("the two copies have {0} and {1} points")]
    SizeMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthoGraph {
    pub primes: (u64, u64),
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Pairs orthogonal modulo exactly one of the two primes.
    pub disagreements: usize,
    /// Full-rank cliques of size `n + 1`, each sorted.
    pub bases: Vec<Vec<usize>>,
}

impl OrthoGraph {
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).is_ok()
    }
}

/// The next admissible prime above the one `x` lives over.
pub fn companion_prime(x: &Configuration) -> Result<u64, KsError> {
    let constraints: Vec<SymbolConstraint> = x.spec.symbols.iter().map(|s| s.constraint.clone()).collect();
    Ok(choose_prime(&constraints, x.prime() + 1)?)
}

/// Orthogonality graph of `x`, with edges confirmed over a second prime.
pub fn ortho_graph(x: &Configuration) -> Result<OrthoGraph, KsError> {
    let other = x.over_prime(companion_prime(x)?)?;
    ortho_graph_pair(x, &other)
}

/// Orthogonality graph from two reductions of the same vector set.
pub fn ortho_graph_pair(x: &Configuration, y: &Configuration) -> Result<OrthoGraph, KsError> {
    if x.len() != y.len() {
        return Err(KsError::SizeMismatch(x.len(), y.len()));
    }
    let (fx, fy) = (x.field(), y.field());
    let size = x.len();
    let mut adj = vec![vec![false; size]; size];
    let mut edges = Vec::new();
    let mut disagreements = 0;
    for i in 0..size {
        for j in i + 1..size {
            let a = dot(fx, x.points[i].coords(), x.points[j].coords()).is_zero();
            let b = dot(fy, y.points[i].coords(), y.points[j].coords()).is_zero();
            if a && b {
                adj[i][j] = true;
                adj[j][i] = true;
                edges.push((i, j));
            } else if a != b {
                disagreements += 1;
            }
        }
    }
    let target = x.ambient_dim + 1;
    let mut bases = Vec::new();
    let mut clique = Vec::with_capacity(target);
    extend_cliques(&adj, target, 0, &mut clique, &mut bases);
    bases.retain(|b| {
        let rows: Vec<_> = b.iter().map(|&i| x.points[i].coords().to_vec()).collect();
        Matrix::from_rows(fx, target, &rows).rank() == target
    });
    Ok(OrthoGraph { primes: (x.prime(), y.prime()), vertices: size, edges, disagreements, bases })
}

fn extend_cliques(adj: &[Vec<bool>], target: usize, from: usize, clique: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if clique.len() == target {
        out.push(clique.clone());
        return;
    }
    for v in from..adj.len() {
        if clique.iter().all(|&u| adj[u][v]) {
            clique.push(v);
            extend_cliques(adj, target, v + 1, clique, out);
            clique.pop();
        }
    }
}

/// A `{0,1}` assignment with no orthogonal pair both 1 and exactly one 1 per basis, if any exists.
pub fn truth_assignment(g: &OrthoGraph) -> Option<Vec<bool>> {
    let mut neighbours = vec![Vec::new(); g.vertices];
    for &(i, j) in &g.edges {
        neighbours[i].push(j);
        neighbours[j].push(i);
    }
    let mut search = Search { g, neighbours, value: vec![None; g.vertices] };
    if search.solve() {
        Some(search.value.iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

pub fn is_ks_set(g: &OrthoGraph) -> bool {
    truth_assignment(g).is_none()
}

struct Search<'a> {
    g: &'a OrthoGraph,
    neighbours: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
}

impl Search<'_> {
    /// Assign `v` and propagate, pushing every newly fixed vertex onto `trail`; false on conflict.
    fn assign(&mut self, v: usize, on: bool, trail: &mut Vec<usize>) -> bool {
        let mut queue = vec![(v, on)];
        while let Some((u, val)) = queue.pop() {
            match self.value[u] {
                Some(existing) if existing == val => continue,
                Some(_) => return false,
                None => {}
            }
            self.value[u] = Some(val);
            trail.push(u);
            if val {
                for &w in &self.neighbours[u] {
                    queue.push((w, false));
                }
            }
            for b in self.g.bases.iter().filter(|b| b.contains(&u)) {
                let ones = b.iter().filter(|&&w| self.value[w] == Some(true)).count();
                let open: Vec<usize> = b.iter().copied().filter(|&w| self.value[w].is_none()).collect();
                match (ones, open.len()) {
                    (0, 0) => return false,
                    (0, 1) => queue.push((open[0], true)),
                    (1, _) => queue.extend(open.iter().map(|&w| (w, false))),
                    (k, _) if k > 1 => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &u in trail {
            self.value[u] = None;
        }
    }

    fn solve(&mut self) -> bool {
        // branch on the open basis with the fewest candidates
        let pick = self
            .g
            .bases
            .iter()
            .filter(|b| b.iter().all(|&w| self.value[w] != Some(true)))
            .map(|b| b.iter().copied().filter(|&w| self.value[w].is_none()).collect::<Vec<_>>())
            .min_by_key(|open| open.len());
        let Some(candidates) = pick else {
            return true;
        };
        for v in candidates {
            let mut trail = Vec::new();
            if self.assign(v, true, &mut trail) && self.solve() {
                return true;
            }
            self.undo(&trail);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::{named, BuildOptions, Tags};
    use crate::field::FieldSpec;
    use crate::projgeom::ProjPoint;

    fn build(label: &str) -> Configuration {
        named(label, &BuildOptions::default()).unwrap()
    }

    /// Tries every `{0,1}` vector.
    fn brute_force_has_assignment(g: &OrthoGraph) -> bool {
        assert!(g.vertices <= 20);
        (0u32..1 << g.vertices).any(|mask| {
            let on = |i: usize| mask >> i & 1 == 1;
            g.edges.iter().all(|&(i, j)| !(on(i) && on(j)))
                && g.bases.iter().all(|b| b.iter().filter(|&&i| on(i)).count() == 1)
        })
    }

    #[test]
    fn single_basis() {
        let spec = FieldSpec::choose(&[], 1 << 30, 0).unwrap();
        let f = spec.field;
        let pts = (0..3).map(|i| ProjPoint::from_i64(f, &[(i == 0) as i64, (i == 1) as i64, (i == 2) as i64]).unwrap()).collect();
        let x = Configuration::from_points("e", spec, pts, Tags::default()).unwrap();
        let other = x.clone();
        let g = ortho_graph_pair(&x, &other).unwrap();
        assert_eq!(g.edges.len(), 3);
        assert_eq!(g.bases.len(), 1);
        assert!(!is_ks_set(&g));
    }

    #[test]
    fn thirteen_vectors_against_brute_force() {
        let g = ortho_graph(&build("ks13")).unwrap();
        assert_eq!(g.disagreements, 0);
        assert_eq!(g.bases.len(), 4);
        assert_eq!(is_ks_set(&g), !brute_force_has_assignment(&g));
        for drop in 0..g.vertices {
            let keep: Vec<usize> = (0..g.vertices).filter(|&v| v != drop).collect();
            let sub = restrict(&g, &keep);
            assert_eq!(is_ks_set(&sub), !brute_force_has_assignment(&sub));
        }
    }

    fn restrict(g: &OrthoGraph, keep: &[usize]) -> OrthoGraph {
        let pos = |v: usize| keep.iter().position(|&k| k == v);
        let edges = g.edges.iter().filter_map(|&(i, j)| Some((pos(i)?, pos(j)?))).collect();
        let bases = g.bases.iter().filter_map(|b| b.iter().map(|&v| pos(v)).collect::<Option<Vec<_>>>()).collect();
        OrthoGraph { primes: g.primes, vertices: keep.len(), edges, disagreements: 0, bases }
    }

    #[test]
    fn assignments_are_valid() {
        for (label, bases) in [("ks13", 4), ("ks21", 7)] {
            let g = ortho_graph(&build(label)).unwrap();
            assert_eq!(g.bases.len(), bases);
            if let Some(val) = truth_assignment(&g) {
                assert!(g.edges.iter().all(|&(i, j)| !(val[i] && val[j])));
                assert!(g.bases.iter().all(|b| b.iter().filter(|&&i| val[i]).count() == 1));
            }
        }
    }

    #[test]
    fn peres_and_penrose_are_ks() {
        for (label, bases) in [("peres33", 16), ("penrose", 20)] {
            let g = ortho_graph(&build(label)).unwrap();
            assert_eq!(g.disagreements, 0, "{label}");
            assert_eq!(g.bases.len(), bases, "{label}");
            assert!(is_ks_set(&g), "{label}");
        }
    }

    #[test]
    fn edges_stable_across_prime_pairs() {
        for label in ["peres33", "ks21", "penrose"] {
            let base = build(label);
            let reference = ortho_graph(&base).unwrap().edges;
            let mut p = base.prime();
            for _ in 0..2 {
                p = companion_prime(&base.over_prime(p).unwrap()).unwrap();
                let moved = base.over_prime(p).unwrap();
                assert_eq!(ortho_graph(&moved).unwrap().edges, reference, "{label} at {p}");
            }
        }
    }
}
