//! Weddle loci: vertices from which a point set has more cones of degree `d` than expected.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util::{stream_rng, Stream};
use crate::field::{Fe, PrimeField};
use crate::linalg::{interpolate, poly_degree, Matrix};
use crate::polyideal::{fat_point_rows, MonomialBasis, PolyError};
use crate::projgeom::{cross_ratio, GeomError, ProjPoint};

const RANK_SAMPLES: usize = 3;
const DEGREE_LINES: usize = 3;

#[derive(Debug, Error)]
pub enum WeddleError {
    #[error("the probe point lies in Z")]
    PointInZ,
    #[error("reduced matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("generic rank estimates disagree: {0:?}")]
    UnstableRank(Vec<usize>),
    #[error("empty point set")]
    Empty,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeddleDegree {
    Degree(usize),
    IdenticallyZero,
}

/// Precomputed data for Weddle queries on a fixed point set and degree.
#[derive(Clone, Debug)]
pub struct WeddleContext {
    field: PrimeField,
    points: Vec<ProjPoint>,
    degree: usize,
    basis: MonomialBasis,
    /// Columns span the kernel of the evaluation matrix of `Z`.
    kernel: Matrix,
    rank_z: usize,
    generic_rank: usize,
}

impl WeddleContext {
    pub fn new(field: PrimeField, points: &[ProjPoint], degree: usize, seed: u64) -> Result<Self, WeddleError> {
        let first = points.first().ok_or(WeddleError::Empty)?;
        if field.modulus() as usize <= degree {
            return Err(PolyError::CharTooSmall { prime: field.modulus(), degree }.into());
        }
        let nvars = first.coords().len();
        let basis = MonomialBasis::new(nvars, degree);
        let mut eval = Matrix::zeros(field, 0, basis.len());
        for p in points {
            eval.push_row(&basis.eval_row(field, p.coords()));
        }
        let rank_z = eval.rank();
        let ker = eval.kernel_basis();
        let kernel = Matrix::from_rows(field, basis.len(), &ker).transpose();
        let mut ctx = WeddleContext { field, points: points.to_vec(), degree, basis, kernel, rank_z, generic_rank: 0 };
        let mut rng = stream_rng(seed, Stream::WeddleRank);
        let ranks: Vec<usize> = (0..RANK_SAMPLES)
            .map(|_| {
                let q = ProjPoint::random(field, nvars - 1, &mut rng);
                ctx.reduced(q.coords()).rank()
            })
            .collect();
        if ranks.iter().any(|&r| r != ranks[0]) {
            return Err(WeddleError::UnstableRank(ranks));
        }
        ctx.generic_rank = rank_z + ranks[0];
        Ok(ctx)
    }

    /// `rho(Z, d, d)`, the rank of the full interpolation matrix at a general vertex.
    pub fn generic_rank(&self) -> usize {
        self.generic_rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The derivative rows at `q` restricted to the kernel of the evaluation rows of `Z`.
    pub fn reduced(&self, q: &[Fe]) -> Matrix {
        let rows = fat_point_rows(self.field, &self.basis, q, self.degree);
        let block = Matrix::from_rows(self.field, self.basis.len(), &rows);
        if self.kernel.cols() == 0 {
            return Matrix::zeros(self.field, block.rows(), 0);
        }
        block.mul(&self.kernel).expect("shapes agree")
    }

    pub fn reduced_shape(&self) -> (usize, usize) {
        (binom_rows(self.basis.nvars(), self.degree), self.kernel.cols())
    }

    /// Rank of the full interpolation matrix with a fat point of order `d` at `p`.
    pub fn rank_at(&self, p: &[Fe]) -> usize {
        self.rank_z + self.reduced(p).rank()
    }
}

fn binom_rows(nvars: usize, degree: usize) -> usize {
    MonomialBasis::new(nvars, degree.saturating_sub(1)).len()
}

/// Whether `p` lies in the `d`-Weddle locus of the context's point set.
pub fn weddle_member(ctx: &WeddleContext, p: &ProjPoint) -> Result<bool, WeddleError> {
    if ctx.points.contains(p) {
        return Err(WeddleError::PointInZ);
    }
    Ok(ctx.rank_at(p.coords()) < ctx.generic_rank)
}

/// Degree of the Weddle hypersurface, read off the determinant restricted to random lines.
pub fn weddle_degree(ctx: &WeddleContext, seed: u64) -> Result<WeddleDegree, WeddleError> {
    let (rows, cols) = ctx.reduced_shape();
    if rows != cols {
        return Err(WeddleError::NotSquare { rows, cols });
    }
    let f = ctx.field;
    let nvars = ctx.basis.nvars();
    let mut rng = stream_rng(seed, Stream::WeddleLines);
    let mut best: Option<usize> = None;
    for _ in 0..DEGREE_LINES {
        let a: Vec<Fe> = (0..nvars).map(|_| f.random(&mut rng)).collect();
        let b: Vec<Fe> = (0..nvars).map(|_| f.random(&mut rng)).collect();
        let xs: Vec<Fe> = (0..=rows as u64).map(|s| f.from_u64(s)).collect();
        let ys: Vec<Fe> = xs
            .iter()
            .map(|&s| {
                let q: Vec<Fe> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, f.mul(s, y))).collect();
                ctx.reduced(&q).det().expect("square")
            })
            .collect();
        if let Some(d) = poly_degree(&interpolate(f, &xs, &ys)) {
            best = Some(best.map_or(d, |m| m.max(d)));
        }
    }
    Ok(best.map_or(WeddleDegree::IdenticallyZero, WeddleDegree::Degree))
}

/// Result of checking the four-plane Weddle surface of six points on three concurrent lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibleWeddleReport {
    pub params: [u64; 3],
    pub samples: usize,
    /// Samples where the determinant equals `2xyz(bcx + acy + abz - 2abcw)`.
    pub formula_agreements: usize,
    /// Samples where the lex-ordered interpolation matrix has the same determinant up to one global sign.
    pub generic_agreements: usize,
    pub harmonic: [bool; 3],
    pub plane_meets_lines_at_h: bool,
}

impl ReducibleWeddleReport {
    pub fn passed(&self) -> bool {
        self.formula_agreements == self.samples
            && self.generic_agreements == self.samples
            && self.harmonic.iter().all(|&h| h)
            && self.plane_meets_lines_at_h
    }
}

/// The 10x10 interpolation matrix with columns `x^2, y^2, z^2, w^2, xy, xz, xw, yz, yw, zw`.
fn printed_matrix(f: PrimeField, abc: [Fe; 3], v: [Fe; 4]) -> Matrix {
    let [a, b, c] = abc;
    let [x, y, z, w] = v;
    let (o, i) = (f.zero(), f.one());
    let two = |t: Fe| f.add(t, t);
    let rows = vec![
        vec![i, o, o, o, o, o, o, o, o, o],
        vec![o, i, o, o, o, o, o, o, o, o],
        vec![o, o, i, o, o, o, o, o, o, o],
        vec![f.mul(a, a), o, o, i, o, o, a, o, o, o],
        vec![o, f.mul(b, b), o, i, o, o, o, o, b, o],
        vec![o, o, f.mul(c, c), i, o, o, o, o, o, c],
        vec![two(x), o, o, o, y, z, w, o, o, o],
        vec![o, two(y), o, o, x, o, o, z, w, o],
        vec![o, o, two(z), o, o, x, o, y, o, w],
        vec![o, o, o, two(w), o, o, x, o, y, z],
    ];
    Matrix::from_rows(f, 10, &rows)
}

pub fn verify_reducible_weddle(field: PrimeField, abc: [Fe; 3], samples: usize, seed: u64) -> Result<ReducibleWeddleReport, WeddleError> {
    let f = field;
    let [a, b, c] = abc;
    let mut rng = stream_rng(seed, Stream::Fixture);
    let raw = |v: [Fe; 4]| v.to_vec();
    let (o, i) = (f.zero(), f.one());
    let z_points = [raw([i, o, o, o]), raw([o, i, o, o]), raw([o, o, i, o]), raw([a, o, o, i]), raw([o, b, o, i]), raw([o, o, c, i])];
    let basis = MonomialBasis::new(4, 2);
    let two = f.from_u64(2);
    let mut formula_agreements = 0;
    let mut generic_agreements = 0;
    let mut sign: Option<Fe> = None;
    for _ in 0..samples {
        let v = [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)];
        let det = printed_matrix(f, abc, v).det().expect("square");
        let [x, y, zc, w] = v;
        let plane = f.sub(
            f.add(f.add(f.mul(f.mul(b, c), x), f.mul(f.mul(a, c), y)), f.mul(f.mul(a, b), zc)),
            f.mul(two, f.mul(f.mul(a, b), f.mul(c, w))),
        );
        let expected = f.mul(f.mul(two, f.mul(x, f.mul(y, zc))), plane);
        if det == expected {
            formula_agreements += 1;
        }
        let mut lex = Matrix::zeros(f, 0, basis.len());
        for p in &z_points {
            lex.push_row(&basis.eval_row(f, p));
        }
        for row in fat_point_rows(f, &basis, &v, 2) {
            lex.push_row(&row);
        }
        let lex_det = lex.det().expect("square");
        let matches = match (det.is_zero(), lex_det.is_zero()) {
            (true, true) => true,
            (false, false) => {
                let ratio = f.div(lex_det, det).expect("nonzero");
                let s = *sign.get_or_insert(ratio);
                ratio == s && (s == f.one() || s == f.neg(f.one()))
            }
            _ => false,
        };
        if matches {
            generic_agreements += 1;
        }
    }
    let origin = ProjPoint::new(f, raw([o, o, o, i]))?;
    let mut harmonic = [false; 3];
    let mut on_plane = true;
    for k in 0..3 {
        let mut p = [o; 4];
        p[k] = i;
        let mut q = [o, o, o, i];
        q[k] = abc[k];
        let mut h = [o, o, o, i];
        h[k] = f.mul(two, abc[k]);
        let (p, q, hp) = (ProjPoint::new(f, raw(p))?, ProjPoint::new(f, raw(q))?, ProjPoint::new(f, raw(h))?);
        harmonic[k] = cross_ratio(f, &p, &q, &origin, &hp)? == f.neg(f.one());
        let [x, y, zc, w] = h;
        let val = f.sub(
            f.add(f.add(f.mul(f.mul(b, c), x), f.mul(f.mul(a, c), y)), f.mul(f.mul(a, b), zc)),
            f.mul(two, f.mul(f.mul(a, b), f.mul(c, w))),
        );
        on_plane &= val.is_zero();
    }
    Ok(ReducibleWeddleReport {
        params: [a.0, b.0, c.0],
        samples,
        formula_agreements,
        generic_agreements,
        harmonic,
        plane_meets_lines_at_h: on_plane,
    })
}

/// A uniformly random point on the line through `a` and `b`, distinct from both.
pub fn random_point_on_line<R: Rng + ?Sized>(field: PrimeField, a: &ProjPoint, b: &ProjPoint, rng: &mut R) -> ProjPoint {
    loop {
        let s = field.random_nonzero(rng);
        let t = field.random_nonzero(rng);
        let v: Vec<Fe> = a.coords().iter().zip(b.coords()).map(|(&x, &y)| field.add(field.mul(s, x), field.mul(t, y))).collect();
        if let Ok(p) = ProjPoint::new(field, v) {
            if &p != a && &p != b {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    fn random_points(f: PrimeField, n: usize, k: usize, seed: u64) -> Vec<ProjPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..k).map(|_| ProjPoint::random(f, n, &mut rng)).collect()
    }

    #[test]
    fn six_points_pair_lines_are_in_the_locus() {
        let f = field();
        let z = random_points(f, 3, 6, 1);
        let ctx = WeddleContext::new(f, &z, 2, 7).unwrap();
        assert_eq!(ctx.generic_rank(), 10);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_point_on_line(f, &z[0], &z[3], &mut rng);
        assert!(weddle_member(&ctx, &p).unwrap());
        assert!(!weddle_member(&ctx, &ProjPoint::random(f, 3, &mut rng)).unwrap());
        assert!(matches!(weddle_member(&ctx, &z[2]), Err(WeddleError::PointInZ)));
    }

    #[test]
    fn membership_ignores_scaling() {
        let f = field();
        let z = random_points(f, 3, 6, 2);
        let ctx = WeddleContext::new(f, &z, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_point_on_line(f, &z[1], &z[4], &mut rng);
        let scaled: Vec<Fe> = p.coords().iter().map(|&c| f.mul(c, f.from_u64(17))).collect();
        assert_eq!(ctx.rank_at(p.coords()), ctx.rank_at(&scaled));
    }

    #[test]
    fn cone_over_conic_plus_apex() {
        let f = field();
        // five points on the conic x*y = z^2 in the plane w = 0, and the apex [0:0:0:1]
        let mut z: Vec<ProjPoint> = (1..=5).map(|t: i64| ProjPoint::from_i64(f, &[1, t * t, t, 0]).unwrap()).collect();
        z.push(ProjPoint::from_i64(f, &[0, 0, 0, 1]).unwrap());
        let ctx = WeddleContext::new(f, &z, 2, 4).unwrap();
        let on_cone = ProjPoint::from_i64(f, &[1, 49, 7, 12345]).unwrap();
        assert!(weddle_member(&ctx, &on_cone).unwrap());
        let off = ProjPoint::from_i64(f, &[1, 50, 7, 12345]).unwrap();
        assert!(!weddle_member(&ctx, &off).unwrap());
        assert_eq!(weddle_degree(&ctx, 1).unwrap(), WeddleDegree::Degree(4));
    }

    #[test]
    fn classical_degrees() {
        let f = field();
        let ctx = WeddleContext::new(f, &random_points(f, 3, 6, 11), 2, 0).unwrap();
        assert_eq!(weddle_degree(&ctx, 0).unwrap(), WeddleDegree::Degree(4));
        let ctx = WeddleContext::new(f, &random_points(f, 3, 5, 11), 2, 0).unwrap();
        assert!(matches!(weddle_degree(&ctx, 0), Err(WeddleError::NotSquare { rows: 4, cols: 5 })));
    }

    #[test]
    fn reducible_fixture_with_unit_parameters() {
        let f = field();
        let report = verify_reducible_weddle(f, [f.one(); 3], 50, 3).unwrap();
        assert!(report.passed(), "{report:?}");
        let det = printed_matrix(f, [f.one(); 3], [f.zero(), f.from_u64(3), f.from_u64(5), f.from_u64(8)]).det().unwrap();
        assert!(det.is_zero());
    }
}
