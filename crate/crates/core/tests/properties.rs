use std::collections::BTreeSet;

use geproci::combinat::line_census;
use geproci::configs::{load_str, named, roots_grid, to_json, BuildOptions};
use geproci::field::{FieldSpec, PrimeField};
use geproci::geproci::is_geproci;
use geproci::ks::{truth_assignment, OrthoGraph};
use geproci::linalg::Matrix;
use geproci::projgeom::{cross_ratio, harmonic_conjugate, project_from, ProjPoint};
use geproci::weddle::random_point_on_line;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> PrimeField {
    FieldSpec::choose(&[], 1 << 30, 0).unwrap().field
}

fn binom2(k: usize) -> usize {
    k * (k - 1) / 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverses_and_square_roots(a in 1u64..1 << 30) {
        let f = field();
        let x = f.from_u64(a);
        let inv = f.inv(x).unwrap();
        prop_assert_eq!(f.mul(x, inv), f.one());
        let sq = f.mul(x, x);
        let r = f.sqrt(sq).unwrap();
        prop_assert_eq!(f.mul(r, r), sq);
    }

    #[test]
    fn harmonic_conjugation_is_an_involution(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ProjPoint::random(f, 3, &mut rng);
        let b = ProjPoint::random(f, 3, &mut rng);
        let c = random_point_on_line(f, &a, &b, &mut rng);
        prop_assume!(c != a && c != b);
        let h = harmonic_conjugate(f, &a, &b, &c).unwrap();
        prop_assert_eq!(harmonic_conjugate(f, &a, &b, &h).unwrap(), c.clone());
        prop_assert_eq!(cross_ratio(f, &a, &b, &c, &h).unwrap(), f.from_i64(-1));
    }

    #[test]
    fn every_pair_lies_on_exactly_one_census_line(seed in any::<u64>(), lines in 1usize..4, per_line in 2usize..6, loose in 0usize..5) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = BTreeSet::new();
        for _ in 0..lines {
            let a = ProjPoint::random(f, 3, &mut rng);
            let b = ProjPoint::random(f, 3, &mut rng);
            for _ in 0..per_line {
                pts.insert(random_point_on_line(f, &a, &b, &mut rng));
            }
        }
        for _ in 0..loose {
            pts.insert(ProjPoint::random(f, 3, &mut rng));
        }
        let pts: Vec<ProjPoint> = pts.into_iter().collect();
        let census = line_census(f, &pts);
        let covered: usize = census.histogram.iter().map(|(&k, &count)| binom2(k) * count).sum();
        prop_assert_eq!(covered, binom2(pts.len()));
        prop_assert!(census.histogram.keys().all(|&k| k >= 2));
    }

    #[test]
    fn general_projection_keeps_points_apart(seed in any::<u64>(), count in 2usize..30) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: BTreeSet<ProjPoint> = (0..count).map(|_| ProjPoint::random(f, 3, &mut rng)).collect();
        let pts: Vec<ProjPoint> = pts.into_iter().collect();
        let centre = ProjPoint::random(f, 3, &mut rng);
        let images: BTreeSet<ProjPoint> = project_from(f, &centre, &pts).unwrap().into_iter().collect();
        prop_assert_eq!(images.len(), pts.len());
    }

    #[test]
    fn row_rank_equals_column_rank(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8, inner in 1usize..8) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::random(f, rows, inner, &mut rng).mul(&Matrix::random(f, inner, cols, &mut rng)).unwrap();
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= inner.min(rows).min(cols));
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), cols);
    }

    #[test]
    fn truth_assignments_match_exhaustive_search(seed in any::<u64>(), vertices in 3usize..13, basis_count in 1usize..7, extra in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bases = BTreeSet::new();
        for _ in 0..basis_count {
            let mut b = BTreeSet::new();
            while b.len() < 3 {
                b.insert(rng.gen_range(0..vertices));
            }
            bases.insert(b.into_iter().collect::<Vec<_>>());
        }
        let mut edges = BTreeSet::new();
        for b in &bases {
            edges.extend([(b[0], b[1]), (b[0], b[2]), (b[1], b[2])]);
        }
        for _ in 0..extra {
            let (i, j) = (rng.gen_range(0..vertices), rng.gen_range(0..vertices));
            if i != j {
                edges.insert((i.min(j), i.max(j)));
            }
        }
        let g = OrthoGraph {
            primes: (0, 0),
            vertices,
            edges: edges.into_iter().collect(),
            disagreements: 0,
            bases: bases.into_iter().collect(),
        };
        let valid = |on: &dyn Fn(usize) -> bool| {
            g.edges.iter().all(|&(i, j)| !(on(i) && on(j))) && g.bases.iter().all(|b| b.iter().filter(|&&i| on(i)).count() == 1)
        };
        let exhaustive = (0u32..1 << vertices).any(|mask| valid(&|i| mask >> i & 1 == 1));
        match truth_assignment(&g) {
            Some(v) => prop_assert!(valid(&|i| v[i])),
            None => prop_assert!(!exhaustive),
        }
        prop_assert_eq!(truth_assignment(&g).is_some(), exhaustive);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn grids_are_geproci_for_their_shape(a in 2usize..5, b in 2usize..6) {
        let (a, b) = (a.min(b), a.max(b));
        let z = roots_grid(a, b, &BuildOptions::default()).unwrap();
        prop_assert!(is_geproci(&z, a, b, 2, 1).unwrap().is_yes());
    }

    #[test]
    fn decisions_depend_only_on_the_seed(seed in any::<u64>()) {
        let z = named("d4", &BuildOptions::default()).unwrap();
        let first = serde_json::to_string(&is_geproci(&z, 3, 4, 2, seed).unwrap()).unwrap();
        let second = serde_json::to_string(&is_geproci(&z, 3, 4, 2, seed).unwrap()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn configurations_survive_a_json_round_trip(k in 0usize..4) {
        let label = ["d4", "f4", "klein", "ks21"][k];
        let z = named(label, &BuildOptions::default()).unwrap();
        let back = load_str(&to_json(&z), None).unwrap();
        prop_assert_eq!(&back.points, &z.points);
        prop_assert_eq!(back.prime(), z.prime());
    }
}
