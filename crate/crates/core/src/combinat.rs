//! Incidence structure of finite point sets: line and plane censuses,
//! Brianchon points of a (3,3)-grid, and weak combinatorial equivalence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configs::Configuration;
use crate::field::{Fe, PrimeField};
use crate::linalg::{dot, Matrix};
use crate::projgeom::{Flat, GeomError, ProjPoint};

#[derive(Debug, Error)]
pub enum CombinatError {
    #[error("sets have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("input is not a (3,3)-grid")]
    NotA33Grid,
    #[error("plane census needs points of P^3, got P^{0}")]
    NotInP3(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Number of flats of a fixed dimension containing exactly `k` points, keyed by `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceCensus {
    pub flat_dim: usize,
    pub histogram: BTreeMap<usize, usize>,
}

impl IncidenceCensus {
    fn from_flats(flat_dim: usize, flats: &[Vec<usize>]) -> Self {
        let mut histogram = BTreeMap::new();
        for f in flats {
            *histogram.entry(f.len()).or_insert(0) += 1;
        }
        IncidenceCensus { flat_dim, histogram }
    }

    pub fn count(&self, k: usize) -> usize {
        self.histogram.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.histogram.values().sum()
    }
}

/// Every line spanned by two points of `z`, as the sorted indices of all points of `z` on it.
pub fn lines_of(field: PrimeField, z: &[ProjPoint]) -> Vec<Vec<usize>> {
    let n = z.len();
    let mut covered = vec![false; n * n];
    let mut lines = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if covered[i * n + j] {
                continue;
            }
            let line = Flat::span(field, &[&z[i], &z[j]]).expect("distinct points span a line");
            let on: Vec<usize> = (0..n).filter(|&k| k == i || k == j || line.contains(field, &z[k])).collect();
            for &x in &on {
                for &y in &on {
                    covered[x * n + y] = true;
                }
            }
            lines.push(on);
        }
    }
    lines
}

/// A normal vector of the plane through three points of `P^3`, or `None` if they are collinear.
fn plane_normal(field: PrimeField, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Option<Vec<Fe>> {
    let m = Matrix::from_rows(field, 4, &[a.coords().to_vec(), b.coords().to_vec(), c.coords().to_vec()]);
    let ker = m.kernel_basis();
    (ker.len() == 1).then(|| ker.into_iter().next().expect("one vector"))
}

/// Every plane spanned by three non-collinear points, with all points of `z` on it.
pub fn planes_of(field: PrimeField, z: &[ProjPoint]) -> Result<Vec<Vec<usize>>, CombinatError> {
    if let Some(p) = z.first() {
        if p.ambient_dim() != 3 {
            return Err(CombinatError::NotInP3(p.ambient_dim()));
        }
    }
    let n = z.len();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut covered = vec![false; n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if covered[idx(i, j, k)] {
                    continue;
                }
                let Some(normal) = plane_normal(field, &z[i], &z[j], &z[k]) else {
                    continue;
                };
                let on: Vec<usize> = (0..n).filter(|&t| dot(field, &normal, z[t].coords()).is_zero()).collect();
                for (x, &a) in on.iter().enumerate() {
                    for (y, &b) in on.iter().enumerate().skip(x + 1) {
                        for &c in on.iter().skip(y + 1) {
                            covered[idx(a, b, c)] = true;
                        }
                    }
                }
                seen.insert(on);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

pub fn line_census(field: PrimeField, z: &[ProjPoint]) -> IncidenceCensus {
    IncidenceCensus::from_flats(1, &lines_of(field, z))
}

pub fn plane_census(field: PrimeField, z: &[ProjPoint]) -> Result<IncidenceCensus, CombinatError> {
    Ok(IncidenceCensus::from_flats(2, &planes_of(field, z)?))
}

/// For each point, the sorted sizes of the lines through it.
pub fn point_profiles(n: usize, lines: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut prof = vec![Vec::new(); n];
    for l in lines {
        for &p in l {
            prof[p].push(l.len());
        }
    }
    for p in &mut prof {
        p.sort_unstable();
    }
    prof
}

/// Intersection point of two lines given by spanning pairs, if they meet in exactly one point.
fn meet(field: PrimeField, l1: (&ProjPoint, &ProjPoint), l2: (&ProjPoint, &ProjPoint)) -> Option<ProjPoint> {
    let n = l1.0.coords().len();
    let cols = [l1.0, l1.1, l2.0, l2.1];
    let mut m = Matrix::zeros(field, n, 4);
    for (c, p) in cols.iter().enumerate() {
        for r in 0..n {
            m.set(r, c, p.coords()[r]);
        }
    }
    let ker = m.kernel_basis();
    if ker.len() != 1 {
        return None;
    }
    let k = &ker[0];
    let v: Vec<Fe> = (0..n).map(|r| field.add(field.mul(k[0], l1.0.coords()[r]), field.mul(k[1], l1.1.coords()[r]))).collect();
    ProjPoint::new(field, v).ok()
}

/// The six points where three of the eighteen 2-point lines of a (3,3)-grid meet, as two collinear triples.
pub fn brianchon_points(grid: &Configuration) -> Result<[[ProjPoint; 3]; 2], CombinatError> {
    let field = grid.field();
    let z = &grid.points;
    if z.len() != 9 || grid.ambient_dim != 3 {
        return Err(CombinatError::NotA33Grid);
    }
    let lines = lines_of(field, z);
    let census = IncidenceCensus::from_flats(1, &lines);
    if census.count(3) != 6 || census.count(2) != 18 {
        return Err(CombinatError::NotA33Grid);
    }
    let two: Vec<&Vec<usize>> = lines.iter().filter(|l| l.len() == 2).collect();
    let mut through: BTreeMap<ProjPoint, BTreeSet<usize>> = BTreeMap::new();
    for (i, a) in two.iter().enumerate() {
        for (j, b) in two.iter().enumerate().skip(i + 1) {
            if a.iter().any(|p| b.contains(p)) {
                continue;
            }
            if let Some(x) = meet(field, (&z[a[0]], &z[a[1]]), (&z[b[0]], &z[b[1]])) {
                let e = through.entry(x).or_default();
                e.insert(i);
                e.insert(j);
            }
        }
    }
    let concurrent: Vec<ProjPoint> = through.into_iter().filter(|(_, s)| s.len() >= 3).map(|(p, _)| p).collect();
    if concurrent.len() != 6 {
        return Err(CombinatError::NotA33Grid);
    }
    for combo in crate::util::subsets(6, 3) {
        let first: Vec<ProjPoint> = combo.iter().map(|&i| concurrent[i].clone()).collect();
        let second: Vec<ProjPoint> = (0..6).filter(|i| !combo.contains(i)).map(|i| concurrent[i].clone()).collect();
        if combo[0] == 0 && crate::projgeom::collinear(field, &first)? && crate::projgeom::collinear(field, &second)? {
            let arr = |v: Vec<ProjPoint>| -> [ProjPoint; 3] { v.try_into().expect("three points") };
            return Ok([arr(first), arr(second)]);
        }
    }
    Err(CombinatError::NotA33Grid)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Equivalence {
    Distinguished { invariant: String },
    Equivalent { bijection: Vec<usize> },
    Unknown,
}

/// Incidence data of one set used by the staged equivalence test.
struct Structure {
    n: usize,
    lines: Vec<Vec<usize>>,
    pair_line: Vec<usize>,
    profiles: Vec<Vec<usize>>,
    two_point: Vec<BTreeSet<usize>>,
}

impl Structure {
    fn new(field: PrimeField, z: &[ProjPoint]) -> Self {
        let n = z.len();
        let lines = lines_of(field, z);
        let mut pair_line = vec![usize::MAX; n * n];
        let mut two_point = vec![BTreeSet::new(); n];
        for (li, l) in lines.iter().enumerate() {
            for &a in l {
                for &b in l {
                    pair_line[a * n + b] = li;
                }
            }
            if l.len() == 2 {
                two_point[l[0]].insert(l[1]);
                two_point[l[1]].insert(l[0]);
            }
        }
        let profiles = point_profiles(n, &lines);
        Structure { n, lines, pair_line, profiles, two_point }
    }

    fn line_size(&self, a: usize, b: usize) -> usize {
        self.lines[self.pair_line[a * self.n + b]].len()
    }

    /// Points grouped by profile, keyed by the profile.
    fn classes(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (p, prof) in self.profiles.iter().enumerate() {
            out.entry(prof.clone()).or_default().push(p);
        }
        out
    }

    /// Copies of `K_{3,3}` in the 2-point-line graph with one side in `left` and the other in `right`.
    fn k33_count(&self, left: &[usize], right: &[usize]) -> usize {
        let right: BTreeSet<usize> = right.iter().copied().collect();
        let mut total = 0;
        for s in crate::util::subsets(left.len(), 3) {
            let common = right
                .iter()
                .filter(|&&r| s.iter().all(|&i| self.two_point[left[i]].contains(&r)))
                .count();
            total += crate::util::binom(common, 3) as usize;
        }
        total
    }

    /// Triples (two points of `class`, one line) whose induced 2-point-line graph is two disjoint `K_{1,3}`.
    fn disjoint_k13_count(&self, class: &[usize]) -> usize {
        let mut total = 0;
        for (i, &y) in class.iter().enumerate() {
            for &y2 in &class[i + 1..] {
                if self.two_point[y].contains(&y2) {
                    continue;
                }
                for l in &self.lines {
                    if l.contains(&y) || l.contains(&y2) {
                        continue;
                    }
                    let ny: Vec<usize> = l.iter().copied().filter(|p| self.two_point[y].contains(p)).collect();
                    let ny2: Vec<usize> = l.iter().copied().filter(|p| self.two_point[y2].contains(p)).collect();
                    if ny.len() == 3 && ny2.len() == 3 && ny.iter().all(|p| !ny2.contains(p)) {
                        total += 1;
                    }
                }
            }
        }
        total
    }
}

/// Staged test for a bijection preserving collinearity and the points on every line.
///
/// Stages in order: identical sets, line census, point profiles, the
/// bipartite 2-point-line probes between profile classes, and finally an
/// exhaustive search when `|Z| <= exhaustive_bound`.
pub fn weak_comb_equivalent(z1: &Configuration, z2: &Configuration, exhaustive_bound: usize) -> Result<Equivalence, CombinatError> {
    if z1.len() != z2.len() {
        return Err(CombinatError::SizeMismatch(z1.len(), z2.len()));
    }
    if z1.field() == z2.field() && z1.points == z2.points {
        return Ok(Equivalence::Equivalent { bijection: (0..z1.len()).collect() });
    }
    let s1 = Structure::new(z1.field(), &z1.points);
    let s2 = Structure::new(z2.field(), &z2.points);
    let distinguished = |name: &str| Ok(Equivalence::Distinguished { invariant: name.to_string() });
    if IncidenceCensus::from_flats(1, &s1.lines) != IncidenceCensus::from_flats(1, &s2.lines) {
        return distinguished("line census");
    }
    let c1 = s1.classes();
    let c2 = s2.classes();
    let shape = |c: &BTreeMap<Vec<usize>, Vec<usize>>| c.iter().map(|(k, v)| (k.clone(), v.len())).collect::<Vec<_>>();
    if shape(&c1) != shape(&c2) {
        return distinguished("point line profiles");
    }
    let keys: Vec<&Vec<usize>> = c1.keys().collect();
    for ka in &keys {
        for kb in &keys {
            if ka == kb {
                continue;
            }
            if s1.k33_count(&c1[*ka], &c1[*kb]) != s2.k33_count(&c2[*ka], &c2[*kb]) {
                return distinguished("K_{3,3} count in the 2-point-line graph");
            }
        }
        if s1.disjoint_k13_count(&c1[*ka]) != s2.disjoint_k13_count(&c2[*ka]) {
            return distinguished("disjoint K_{1,3} pairs in the 2-point-line graph");
        }
    }
    if z1.len() > exhaustive_bound {
        return Ok(Equivalence::Unknown);
    }
    let mut map = vec![usize::MAX; s1.n];
    let mut used = vec![false; s1.n];
    if extend_bijection(&s1, &s2, &mut map, &mut used, 0) {
        Ok(Equivalence::Equivalent { bijection: map })
    } else {
        distinguished("no collinearity-preserving bijection")
    }
}

fn extend_bijection(s1: &Structure, s2: &Structure, map: &mut [usize], used: &mut [bool], k: usize) -> bool {
    if k == s1.n {
        return true;
    }
    for cand in 0..s2.n {
        if used[cand] || s1.profiles[k] != s2.profiles[cand] {
            continue;
        }
        let consistent = (0..k).all(|i| {
            if s1.line_size(i, k) != s2.line_size(map[i], cand) {
                return false;
            }
            (0..i).all(|j| {
                let same1 = s1.pair_line[i * s1.n + j] == s1.pair_line[i * s1.n + k];
                let same2 = s2.pair_line[map[i] * s2.n + map[j]] == s2.pair_line[map[i] * s2.n + cand];
                same1 == same2
            })
        });
        if !consistent {
            continue;
        }
        map[k] = cand;
        used[cand] = true;
        if extend_bijection(s1, s2, map, used, k + 1) {
            return true;
        }
        used[cand] = false;
        map[k] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::Tags;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    fn pts(f: PrimeField, rows: &[[i64; 4]]) -> Vec<ProjPoint> {
        rows.iter().map(|r| ProjPoint::from_i64(f, r).unwrap()).collect()
    }

    /// Brute force over all triples as an independent collinearity oracle.
    fn brute_line_census(f: PrimeField, z: &[ProjPoint]) -> BTreeMap<usize, usize> {
        let n = z.len();
        let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut on = vec![i, j];
                for k in 0..n {
                    if k != i && k != j && crate::projgeom::span_dim(f, &[z[i].clone(), z[j].clone(), z[k].clone()]).unwrap() == 1 {
                        on.push(k);
                    }
                }
                on.sort_unstable();
                lines.insert(on);
            }
        }
        let mut h = BTreeMap::new();
        for l in lines {
            *h.entry(l.len()).or_insert(0) += 1;
        }
        h
    }

    #[test]
    fn lgp_points() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z: Vec<ProjPoint> = (0..4).map(|_| ProjPoint::random(f, 3, &mut rng)).collect();
        assert_eq!(plane_census(f, &z).unwrap().histogram, BTreeMap::from([(3, 4)]));
        assert_eq!(line_census(f, &z).histogram, BTreeMap::from([(2, 6)]));
    }

    #[test]
    fn census_matches_brute_force() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut z = pts(f, &[[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [1, 2, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]]);
        z.extend((0..4).map(|_| ProjPoint::random(f, 3, &mut rng)));
        let census = line_census(f, &z);
        assert_eq!(census.histogram, brute_line_census(f, &z));
        let pairs: usize = census.histogram.iter().map(|(k, v)| k * (k - 1) / 2 * v).sum();
        assert_eq!(pairs, z.len() * (z.len() - 1) / 2);
    }

    #[test]
    fn brianchon_triples_of_reference_grid() {
        let f = field();
        let spec = crate::field::FieldSpec::with_prime(f.modulus(), &[], 0).unwrap();
        let grid = pts(f, &[[0, 0, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1], [1, 0, 1, 0], [1, 1, 1, 1], [0, 1, 0, 1], [1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 0, 0]]);
        let cfg = Configuration::from_points("grid33", spec, grid.clone(), Tags::default()).unwrap();
        let [t1, t2] = brianchon_points(&cfg).unwrap();
        let want1: BTreeSet<ProjPoint> = pts(f, &[[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, -1, 0]]).into_iter().collect();
        let want2: BTreeSet<ProjPoint> = pts(f, &[[1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 0, -1]]).into_iter().collect();
        let got: BTreeSet<BTreeSet<ProjPoint>> = [t1.to_vec(), t2.to_vec()].into_iter().map(|v| v.into_iter().collect()).collect();
        assert_eq!(got, BTreeSet::from([want1, want2]));
        for triple in [t1, t2] {
            let mut z = grid.clone();
            z.extend(triple);
            assert_eq!(line_census(f, &z).histogram, BTreeMap::from([(2, 18), (3, 16)]));
        }
    }

    #[test]
    fn identity_and_relabeling() {
        let f = field();
        let spec = crate::field::FieldSpec::with_prime(f.modulus(), &[], 0).unwrap();
        let z = pts(f, &[[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 1, 0]]);
        let a = Configuration::from_points("a", spec.clone(), z.clone(), Tags::default()).unwrap();
        assert_eq!(weak_comb_equivalent(&a, &a, 16).unwrap(), Equivalence::Equivalent { bijection: (0..6).collect() });
        let mut rev = z.clone();
        rev.reverse();
        let b = Configuration::from_points("b", spec.clone(), rev, Tags::default()).unwrap();
        assert!(matches!(weak_comb_equivalent(&a, &b, 16).unwrap(), Equivalence::Equivalent { .. }));
        let flat = pts(f, &[[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [1, 2, 0, 0], [0, 0, 0, 1], [1, 0, 1, 0]]);
        let c = Configuration::from_points("c", spec, flat, Tags::default()).unwrap();
        assert_eq!(weak_comb_equivalent(&a, &c, 16).unwrap(), Equivalence::Distinguished { invariant: "line census".into() });
    }
}
