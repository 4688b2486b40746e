//! Points and flats of `P^n` over `F_p`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Fe, PrimeField};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("empty input")]
    EmptyInput,
    #[error("points live in different ambient spaces")]
    MixedAmbient,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("points are not distinct")]
    NotDistinct,
    #[error("expected a point of P^{expected}, got P^{got}")]
    WrongAmbient { expected: usize, got: usize },
    #[error("the projection centre {0} belongs to the set being projected")]
    VertexInZ(usize),
    #[error("points {0} and {1} have the same image under projection")]
    Collision(usize, usize),
}

/// A point of `P^n`, scaled so that its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    coords: Vec<Fe>,
}

impl ProjPoint {
    pub fn new(field: PrimeField, coords: Vec<Fe>) -> Result<Self, GeomError> {
        let lead = coords.iter().position(|c| !c.is_zero()).ok_or(GeomError::ZeroVector)?;
        let inv = field.inv(coords[lead]).expect("nonzero lead");
        let coords = coords.into_iter().map(|c| field.mul(c, inv)).collect();
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(field: PrimeField, coords: &[i64]) -> Result<Self, GeomError> {
        Self::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// The coordinate point `e_i` of `P^n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut coords = vec![Fe::ZERO; n + 1];
        coords[i] = Fe::ONE;
        ProjPoint { coords }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let v: Vec<Fe> = (0..=n).map(|_| field.random(rng)).collect();
            if let Ok(p) = Self::new(field, v) {
                return p;
            }
        }
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A linear subspace of `P^n`, stored as the RREF of a spanning matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    ambient: usize,
    basis: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Flat {
    pub fn span(field: PrimeField, points: &[&ProjPoint]) -> Result<Self, GeomError> {
        let ambient = common_ambient(points.iter().copied())?;
        let rows: Vec<Vec<Fe>> = points.iter().map(|p| p.coords.clone()).collect();
        let (r, pivots) = Matrix::from_rows(field, ambient + 1, &rows).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Flat { ambient, basis, pivots })
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.basis
    }

    pub fn contains(&self, field: PrimeField, p: &ProjPoint) -> bool {
        if p.ambient_dim() != self.ambient {
            return false;
        }
        let mut v = p.coords.clone();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let factor = v[c];
            if factor.is_zero() {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(factor, b));
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

fn common_ambient<'a>(mut points: impl Iterator<Item = &'a ProjPoint>) -> Result<usize, GeomError> {
    let first = points.next().ok_or(GeomError::EmptyInput)?;
    let n = first.ambient_dim();
    if points.any(|p| p.ambient_dim() != n) {
        return Err(GeomError::MixedAmbient);
    }
    Ok(n)
}

/// Projective dimension of the span of `points`.
pub fn span_dim(field: PrimeField, points: &[ProjPoint]) -> Result<usize, GeomError> {
    let n = common_ambient(points.iter())?;
    let rows: Vec<Vec<Fe>> = points.iter().map(|p| p.coords.clone()).collect();
    Ok(Matrix::from_rows(field, n + 1, &rows).rank() - 1)
}

pub fn collinear(field: PrimeField, points: &[ProjPoint]) -> Result<bool, GeomError> {
    Ok(span_dim(field, points)? <= 1)
}

pub fn coplanar(field: PrimeField, points: &[ProjPoint]) -> Result<bool, GeomError> {
    Ok(span_dim(field, points)? <= 2)
}

/// Coordinates of `c` in the basis `(a, b)` of the line they span.
fn line_coords(field: PrimeField, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<(Fe, Fe), GeomError> {
    // Solve c = s a + t b using two coordinates where the 2x2 minor of (a, b) is invertible.
    let n = a.coords.len();
    for i in 0..n {
        for j in i + 1..n {
            let det = field.sub(field.mul(a.coords[i], b.coords[j]), field.mul(a.coords[j], b.coords[i]));
            if det.is_zero() {
                continue;
            }
            let dinv = field.inv(det).expect("nonzero");
            let s = field.mul(
                field.sub(field.mul(c.coords[i], b.coords[j]), field.mul(c.coords[j], b.coords[i])),
                dinv,
            );
            let t = field.mul(
                field.sub(field.mul(a.coords[i], c.coords[j]), field.mul(a.coords[j], c.coords[i])),
                dinv,
            );
            let fits = (0..n).all(|k| {
                c.coords[k] == field.add(field.mul(s, a.coords[k]), field.mul(t, b.coords[k]))
            });
            return if fits { Ok((s, t)) } else { Err(GeomError::NotCollinear) };
        }
    }
    Err(GeomError::NotDistinct)
}

fn check_line(points: &[&ProjPoint]) -> Result<(), GeomError> {
    common_ambient(points.iter().copied())?;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(GeomError::NotDistinct);
            }
        }
    }
    Ok(())
}

/// Cross ratio of four distinct collinear points.
pub fn cross_ratio(field: PrimeField, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint) -> Result<Fe, GeomError> {
    check_line(&[a, b, c, d])?;
    let (c1, c2) = line_coords(field, a, b, c)?;
    let (d1, d2) = line_coords(field, a, b, d)?;
    // With a = (1, 0) and b = (0, 1) the bracket formula collapses to c2 d1 / (c1 d2).
    let num = field.mul(c2, d1);
    let den = field.mul(c1, d2);
    field.div(num, den).ok_or(GeomError::NotDistinct)
}

/// The fourth harmonic point: the unique `d` with `cross_ratio(a, b, c, d) = -1`.
pub fn harmonic_conjugate(field: PrimeField, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<ProjPoint, GeomError> {
    check_line(&[a, b, c])?;
    let (c1, c2) = line_coords(field, a, b, c)?;
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(&x, &y)| field.sub(field.mul(c1, x), field.mul(c2, y)))
        .collect();
    ProjPoint::new(field, coords)
}

/// Segre map `P^1 x P^1 -> P^3`, `([a:b],[c:d]) -> [ac:ad:bc:bd]`.
pub fn segre(field: PrimeField, left: &ProjPoint, right: &ProjPoint) -> Result<ProjPoint, GeomError> {
    for p in [left, right] {
        if p.ambient_dim() != 1 {
            return Err(GeomError::WrongAmbient { expected: 1, got: p.ambient_dim() });
        }
    }
    let (a, b) = (left.coords[0], left.coords[1]);
    let (c, d) = (right.coords[0], right.coords[1]);
    ProjPoint::new(field, vec![field.mul(a, c), field.mul(a, d), field.mul(b, c), field.mul(b, d)])
}

/// Linear projection from `centre` onto `P^{n-1}`.
///
/// With `k` the last index where the centre is nonzero, the image of `z` has
/// coordinates `z_j - (centre_j / centre_k) z_k` for `j != k`. The centre is
/// exactly the kernel of this map.
pub fn project_from(field: PrimeField, centre: &ProjPoint, points: &[ProjPoint]) -> Result<Vec<ProjPoint>, GeomError> {
    let n = centre.ambient_dim();
    if let Some(p) = points.iter().find(|p| p.ambient_dim() != n) {
        return Err(GeomError::WrongAmbient { expected: n, got: p.ambient_dim() });
    }
    let images = project_raw(field, centre, points)?;
    let mut order: Vec<usize> = (0..images.len()).collect();
    order.sort_by(|&i, &j| images[i].cmp(&images[j]));
    for w in order.windows(2) {
        if images[w[0]] == images[w[1]] {
            let (i, j) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(GeomError::Collision(i, j));
        }
    }
    Ok(images)
}

/// Projection without the collision check.
pub fn project_raw(field: PrimeField, centre: &ProjPoint, points: &[ProjPoint]) -> Result<Vec<ProjPoint>, GeomError> {
    let k = centre.coords.iter().rposition(|c| !c.is_zero()).expect("points are nonzero");
    let inv = field.inv(centre.coords[k]).expect("nonzero");
    let ratios: Vec<Fe> = centre.coords.iter().map(|&c| field.mul(c, inv)).collect();
    points
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let zk = z.coords[k];
            let coords: Vec<Fe> = (0..z.coords.len())
                .filter(|&j| j != k)
                .map(|j| field.sub(z.coords[j], field.mul(ratios[j], zk)))
                .collect();
            ProjPoint::new(field, coords).map_err(|_| GeomError::VertexInZ(idx))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    fn pt(f: PrimeField, c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(f, c).unwrap()
    }

    #[test]
    fn normalization_is_canonical() {
        let f = field();
        assert_eq!(pt(f, &[0, 3, 6]), pt(f, &[0, 1, 2]));
        assert_eq!(ProjPoint::from_i64(f, &[0, 0]), Err(GeomError::ZeroVector));
    }

    #[test]
    fn span_dimensions() {
        let f = field();
        assert_eq!(span_dim(f, &[pt(f, &[1, 0]), pt(f, &[0, 1])]).unwrap(), 1);
        let d4_triple = [pt(f, &[1, 1, 0, 0]), pt(f, &[1, 0, 1, 0]), pt(f, &[0, 1, -1, 0])];
        assert_eq!(span_dim(f, &d4_triple).unwrap(), 1);
        let coords: Vec<ProjPoint> = (0..4).map(|i| ProjPoint::coordinate(3, i)).collect();
        assert_eq!(span_dim(f, &coords).unwrap(), 3);
        assert_eq!(span_dim(f, &[]), Err(GeomError::EmptyInput));
        assert_eq!(span_dim(f, &[pt(f, &[1, 0]), pt(f, &[1, 0, 0])]), Err(GeomError::MixedAmbient));
    }

    #[test]
    fn flats_are_hashable_and_canonical() {
        let f = field();
        let a = pt(f, &[1, 0, 0, 0]);
        let b = pt(f, &[0, 1, 0, 0]);
        let c = pt(f, &[1, 1, 0, 0]);
        let l1 = Flat::span(f, &[&a, &b]).unwrap();
        let l2 = Flat::span(f, &[&c, &b]).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(l1.dim(), 1);
        assert!(l1.contains(f, &pt(f, &[2, 5, 0, 0])));
        assert!(!l1.contains(f, &pt(f, &[2, 5, 1, 0])));
    }

    #[test]
    fn standard_harmonic_quadruple() {
        let f = field();
        let cr = cross_ratio(f, &pt(f, &[0, 1]), &pt(f, &[1, 0]), &pt(f, &[1, 1]), &pt(f, &[1, -1])).unwrap();
        assert_eq!(cr, f.from_i64(-1));
        let d = harmonic_conjugate(f, &pt(f, &[1, 0]), &pt(f, &[0, 1]), &pt(f, &[1, 1])).unwrap();
        assert_eq!(d, pt(f, &[1, -1]));
    }

    #[test]
    fn defining_frame_gives_lambda() {
        let f = field();
        for lambda in [2i64, 5, -7, 1234] {
            let cr = cross_ratio(f, &pt(f, &[0, 1]), &pt(f, &[1, 0]), &pt(f, &[1, 1]), &pt(f, &[1, lambda])).unwrap();
            assert_eq!(cr, f.from_i64(lambda));
        }
    }

    #[test]
    fn consecutive_roots_of_unity() {
        let spec = crate::field::FieldSpec::choose(&[crate::field::Symbol::order("u", 12)], 1 << 20, 0).unwrap();
        let f = spec.field;
        let u = spec.get("u").unwrap();
        for t in 0..4u64 {
            let p = |e: u64| ProjPoint::new(f, vec![Fe::ONE, f.pow(u, e)]).unwrap();
            let cr = cross_ratio(f, &p(t), &p(t + 1), &p(t + 2), &p(t + 3)).unwrap();
            let up1 = f.add(u, f.one());
            let num = f.mul(up1, up1);
            let den = f.add(f.mul(u, u), up1);
            assert_eq!(cr, f.div(num, den).unwrap());
        }
    }

    #[test]
    fn not_collinear_and_not_distinct() {
        let f = field();
        let a = pt(f, &[1, 0, 0]);
        let b = pt(f, &[0, 1, 0]);
        let c = pt(f, &[1, 1, 0]);
        assert_eq!(cross_ratio(f, &a, &b, &c, &pt(f, &[0, 0, 1])), Err(GeomError::NotCollinear));
        assert_eq!(cross_ratio(f, &a, &b, &c, &c), Err(GeomError::NotDistinct));
    }

    #[test]
    fn segre_examples() {
        let spec = crate::field::FieldSpec::choose(&[crate::field::Symbol::order("u", 5)], 1 << 20, 0).unwrap();
        let f = spec.field;
        let u = spec.get("u").unwrap();
        let one = pt(f, &[1, 1]);
        assert_eq!(segre(f, &one, &one).unwrap(), pt(f, &[1, 1, 1, 1]));
        let a = ProjPoint::new(f, vec![Fe::ONE, u]).unwrap();
        let b = ProjPoint::new(f, vec![Fe::ONE, f.pow(u, 2)]).unwrap();
        let expected = ProjPoint::new(f, vec![Fe::ONE, f.pow(u, 2), u, f.pow(u, 3)]).unwrap();
        assert_eq!(segre(f, &a, &b).unwrap(), expected);
    }

    #[test]
    fn coordinate_projection() {
        let f = field();
        let img = project_from(f, &pt(f, &[0, 0, 0, 1]), &[pt(f, &[1, 0, 0, 5])]).unwrap();
        assert_eq!(img, vec![pt(f, &[1, 0, 0])]);
    }

    #[test]
    fn projection_errors() {
        let f = field();
        let centre = pt(f, &[1, 2, 3]);
        assert_eq!(project_from(f, &centre, &[pt(f, &[1, 0, 0]), centre.clone()]), Err(GeomError::VertexInZ(1)));
        // two points on a line through the centre collide
        let a = pt(f, &[1, 0, 0]);
        let b = pt(f, &[2, 2, 3]);
        assert_eq!(project_from(f, &centre, &[a, b]), Err(GeomError::Collision(0, 1)));
    }

    #[test]
    fn random_projection_is_injective_on_small_sets() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z: Vec<ProjPoint> = (0..20).map(|_| ProjPoint::random(f, 3, &mut rng)).collect();
        let centre = ProjPoint::random(f, 3, &mut rng);
        assert_eq!(project_from(f, &centre, &z).unwrap().len(), 20);
    }
}
