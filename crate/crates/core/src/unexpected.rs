//! Actual and virtual dimensions of cones with a general vertex, and the
//! closed forms known for coordinate skeleta.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util::{stream_rng, Stream};
use crate::configs::FlatUnion;
use crate::field::{Fe, PrimeField};
use crate::linalg::{interpolate, Matrix};
use crate::polyideal::{fat_point_rows, ideal_dim_points, MonomialBasis, PolyError};
use crate::projgeom::{project_from, GeomError, ProjPoint};
use crate::util::{binom, binom_signed, subsets};

#[derive(Debug, Error)]
pub enum UnexpError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("empty support")]
    Empty,
    #[error("skeleton form is only evaluated for 2 <= n <= 7, got {0}")]
    SkeletonSize(usize),
}

/// What the cones have to contain: finitely many points or a union of flats.
#[derive(Clone, Copy, Debug)]
pub enum Support<'a> {
    Points(&'a [ProjPoint]),
    Flats(&'a FlatUnion),
}

impl Support<'_> {
    pub fn ambient_dim(&self) -> Result<usize, UnexpError> {
        match self {
            Support::Points(p) => p.first().map(|q| q.ambient_dim()).ok_or(UnexpError::Empty),
            Support::Flats(u) => Ok(u.ambient_dim),
        }
    }

    /// Points imposing the same conditions in degree `t` (sampled for flats).
    fn condition_points<R: Rng + ?Sized>(&self, field: PrimeField, t: usize, rng: &mut R) -> Vec<ProjPoint> {
        match self {
            Support::Points(p) => p.to_vec(),
            Support::Flats(u) => u.sample_points(field, t, rng),
        }
    }
}

fn check_char(field: PrimeField, t: usize) -> Result<(), UnexpError> {
    if field.modulus() as usize <= t {
        return Err(PolyError::CharTooSmall { prime: field.modulus(), degree: t }.into());
    }
    Ok(())
}

/// `dim [I(Z)]_t`, with flats replaced by sampled points; the minimum over `trials` samplings.
pub fn ideal_dim(field: PrimeField, z: Support<'_>, t: usize, trials: usize, seed: u64) -> Result<usize, UnexpError> {
    let n = z.ambient_dim()?;
    let mut rng = stream_rng(seed, Stream::Cones);
    let rounds = if matches!(z, Support::Points(_)) { 1 } else { trials.max(1) };
    let mut best = usize::MAX;
    for _ in 0..rounds {
        let pts = z.condition_points(field, t, &mut rng);
        best = best.min(ideal_dim_points(field, &pts, n + 1, t));
    }
    Ok(best)
}

/// `dim [I(Z) ∩ I(P)^m]_t` for a general point `P`; the minimum over `trials` random vertices.
///
/// For finitely many points with `t = m` the cones are read off the
/// projection of `Z` from `P` to a hyperplane.
pub fn adim(field: PrimeField, z: Support<'_>, t: usize, m: usize, trials: usize, seed: u64) -> Result<usize, UnexpError> {
    check_char(field, t)?;
    let n = z.ambient_dim()?;
    let mut rng = stream_rng(seed, Stream::Vertices);
    let mut best = usize::MAX;
    for _ in 0..trials.max(1) {
        let p = ProjPoint::random(field, n, &mut rng);
        let value = match z {
            Support::Points(pts) if t == m => match project_from(field, &p, pts) {
                Ok(img) => ideal_dim_points(field, &img, n, t),
                Err(GeomError::VertexInZ(_)) | Err(GeomError::Collision(..)) => continue,
                Err(e) => return Err(e.into()),
            },
            _ => fat_vertex_dim(field, &z.condition_points(field, t, &mut rng), &p, n, t, m),
        };
        best = best.min(value);
    }
    Ok(if best == usize::MAX { 0 } else { best })
}

/// Kernel dimension of the point rows stacked with the order-`m` derivative rows at `p`.
fn fat_vertex_dim(field: PrimeField, pts: &[ProjPoint], p: &ProjPoint, n: usize, t: usize, m: usize) -> usize {
    let basis = MonomialBasis::new(n + 1, t);
    let mut mat = Matrix::zeros(field, 0, basis.len());
    for q in pts {
        mat.push_row(&basis.eval_row(field, q.coords()));
    }
    for row in fat_point_rows(field, &basis, p.coords(), m) {
        mat.push_row(&row);
    }
    basis.len() - mat.rank()
}

/// The same quantity as [`adim`] but always through derivative rows, for cross-checking the projection shortcut.
pub fn adim_by_derivatives(field: PrimeField, z: Support<'_>, t: usize, m: usize, trials: usize, seed: u64) -> Result<usize, UnexpError> {
    check_char(field, t)?;
    let n = z.ambient_dim()?;
    let mut rng = stream_rng(seed, Stream::Vertices);
    let mut best = usize::MAX;
    for _ in 0..trials.max(1) {
        let p = ProjPoint::random(field, n, &mut rng);
        best = best.min(fat_vertex_dim(field, &z.condition_points(field, t, &mut rng), &p, n, t, m));
    }
    Ok(best)
}

/// `dim [I(Z)]_t - binom(m + n - 1, n)`, possibly negative.
pub fn vdim(field: PrimeField, z: Support<'_>, t: usize, m: usize, trials: usize, seed: u64) -> Result<i64, UnexpError> {
    let n = z.ambient_dim()?;
    let idim = ideal_dim(field, z, t, trials, seed)? as i64;
    Ok(idim - binom(m + n - 1, n) as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnexpReport {
    pub t: usize,
    pub m: usize,
    pub adim: usize,
    pub vdim: i64,
    pub unexpected: bool,
}

impl UnexpReport {
    pub fn new(t: usize, m: usize, adim: usize, vdim: i64) -> Self {
        UnexpReport { t, m, adim, vdim, unexpected: adim as i64 > vdim.max(0) }
    }
}

/// Whether `Z` has unexpected cones of degree `t`.
pub fn c_predicate(field: PrimeField, z: Support<'_>, t: usize, trials: usize, seed: u64) -> Result<UnexpReport, UnexpError> {
    report(field, z, t, t, trials, seed)
}

pub fn report(field: PrimeField, z: Support<'_>, t: usize, m: usize, trials: usize, seed: u64) -> Result<UnexpReport, UnexpError> {
    let a = adim(field, z, t, m, trials, seed)?;
    let v = vdim(field, z, t, m, trials, seed)?;
    Ok(UnexpReport::new(t, m, a, v))
}

/// `dim [I(S_1 + 3P)]_3` for the coordinate lines of `P^n` and general `P`.
pub fn lines_skeleton_cubic_cones(n: usize) -> i64 {
    binom(n + 1, 3) as i64 - binom(n + 2, 2) as i64 + n as i64 + 1
}

/// Expected minus virtual count of degree-`m` cones for the codimension-2 coordinate skeleton of `P^n`.
pub fn skeleton_f(m: usize, n: usize) -> i64 {
    let r = binom(n + 1, 2) as i64;
    let (m, ni) = (m as i64, n as i64);
    let cones = if m >= r { binom_signed(m - r + ni - 1, n - 1) } else { 0 };
    let (idim, _) = skeleton_dims(n, m as usize);
    cones - idim + binom_signed(m + ni - 1, n)
}

/// `(dim [I(Z)]_m, dim [I(Z + mP)]_m)` for the codimension-2 coordinate skeleton of `P^n`.
pub fn skeleton_dims(n: usize, m: usize) -> (i64, i64) {
    let r = binom(n + 1, 2) as usize;
    let (mi, ni) = (m as i64, n as i64);
    let idim = if m < n { 0 } else { binom_signed(mi - 1, n) + (ni + 1) * binom_signed(mi - 1, n - 1) };
    let cone = if m < r { 0 } else { binom_signed(mi - r as i64 + ni - 1, n - 1) };
    (idim, cone)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonFormReport {
    pub n: usize,
    pub degree: usize,
    pub order_required: usize,
    pub flats: usize,
    pub flats_vanishing: usize,
    pub nonzero: bool,
    /// Smallest vanishing order at `Q` seen along the sampled lines.
    pub min_order_at_q: usize,
}

impl SkeletonFormReport {
    pub fn passed(&self) -> bool {
        self.nonzero && self.flats_vanishing == self.flats && self.min_order_at_q >= self.order_required
    }
}

/// The form `sum_sigma sgn(sigma) x_sigma(0)...x_sigma(k) * a-weights`, collapsed to square-free monomials.
struct SkeletonForm {
    terms: Vec<(Vec<usize>, Fe)>,
}

impl SkeletonForm {
    fn new(field: PrimeField, n: usize, q: &[Fe]) -> Self {
        let k = n / 2;
        let mut acc: std::collections::BTreeMap<Vec<usize>, Fe> = std::collections::BTreeMap::new();
        let mut perm: Vec<usize> = (0..=n).collect();
        let mut sign = true;
        // Heap's algorithm visits every permutation, each step a transposition
        let mut c = vec![0usize; n + 1];
        let mut visit = |perm: &[usize], positive: bool| {
            let mut w = if positive { field.one() } else { field.neg(field.one()) };
            for (e, &i) in perm[1..=k].iter().enumerate() {
                w = field.mul(w, field.pow(q[i], e as u64 + 1));
            }
            for (e, &i) in perm[k + 1..].iter().enumerate() {
                w = field.mul(w, field.pow(q[i], e as u64 + 1));
            }
            let mut key: Vec<usize> = perm[..=k].to_vec();
            key.sort_unstable();
            let slot = acc.entry(key).or_insert(field.zero());
            *slot = field.add(*slot, w);
        };
        visit(&perm, sign);
        let mut i = 0;
        while i <= n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                sign = !sign;
                visit(&perm, sign);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        SkeletonForm { terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    fn eval(&self, field: PrimeField, x: &[Fe]) -> Fe {
        self.terms.iter().fold(field.zero(), |s, (vars, c)| {
            let prod = vars.iter().fold(*c, |p, &v| field.mul(p, x[v]));
            field.add(s, prod)
        })
    }
}

/// Checks the explicit form of degree `floor(n/2) + 1` through the skeleton of `n + 2` points of `P^n`.
pub fn verify_skeleton_t(field: PrimeField, n: usize, seed: u64) -> Result<SkeletonFormReport, UnexpError> {
    if !(2..=7).contains(&n) {
        return Err(UnexpError::SkeletonSize(n));
    }
    let k = n / 2;
    let order_required = n.div_ceil(2);
    let mut rng = stream_rng(seed, Stream::SkeletonForm);
    let q: Vec<Fe> = (0..=n).map(|_| field.random_nonzero(&mut rng)).collect();
    let form = SkeletonForm::new(field, n, &q);
    let mut anchors: Vec<Vec<Fe>> = (0..=n).map(|i| ProjPoint::coordinate(n, i).coords().to_vec()).collect();
    anchors.push(vec![field.one(); n + 1]);
    let flats = subsets(n + 2, k);
    let mut flats_vanishing = 0;
    for s in &flats {
        let ok = (0..3).all(|_| {
            let mut v = vec![field.zero(); n + 1];
            for &i in s {
                let c = field.random(&mut rng);
                for (x, &a) in v.iter_mut().zip(&anchors[i]) {
                    *x = field.add(*x, field.mul(c, a));
                }
            }
            form.eval(field, &v).is_zero()
        });
        if ok {
            flats_vanishing += 1;
        }
    }
    let probe: Vec<Fe> = (0..=n).map(|_| field.random(&mut rng)).collect();
    let nonzero = !form.eval(field, &probe).is_zero();
    let degree = k + 1;
    let mut min_order = usize::MAX;
    for _ in 0..5 {
        let dir: Vec<Fe> = (0..=n).map(|_| field.random(&mut rng)).collect();
        let xs: Vec<Fe> = (0..=degree as u64).map(|s| field.from_u64(s)).collect();
        let ys: Vec<Fe> = xs
            .iter()
            .map(|&s| {
                let pt: Vec<Fe> = q.iter().zip(&dir).map(|(&a, &b)| field.add(a, field.mul(s, b))).collect();
                form.eval(field, &pt)
            })
            .collect();
        let coeffs = interpolate(field, &xs, &ys);
        let order = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX);
        min_order = min_order.min(order);
    }
    Ok(SkeletonFormReport {
        n,
        degree,
        order_required,
        flats: flats.len(),
        flats_vanishing,
        nonzero,
        min_order_at_q: min_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use crate::configs::{skeleton, SkeletonKind};

    fn field() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn cubic_cones_on_line_skeleta() {
        let f = field();
        for n in 4..=6 {
            let s = skeleton(f, n, SkeletonKind::Lines);
            let got = adim(f, Support::Flats(&s), 3, 3, 2, n as u64).unwrap();
            assert_eq!(got as i64, lines_skeleton_cubic_cones(n), "n = {n}");
            assert_eq!(ideal_dim(f, Support::Flats(&s), 3, 1, 0).unwrap(), binom(n + 1, 3) as usize);
        }
    }

    #[test]
    fn f_closed_forms() {
        for m in 3..=20 {
            assert_eq!(skeleton_f(m, 2), 0, "m = {m}");
        }
        for m in 6..=20 {
            assert_eq!(skeleton_f(m, 3), 7, "m = {m}");
        }
        for m in 10..=20 {
            assert_eq!(skeleton_f(m, 4), 25 * m as i64 - 80, "m = {m}");
        }
    }

    #[test]
    fn codim_two_skeleton_numeric() {
        let f = field();
        for (n, m) in [(3, 6), (3, 8)] {
            let s = skeleton(f, n, SkeletonKind::Codim2);
            let (idim, cone) = skeleton_dims(n, m);
            assert_eq!(ideal_dim(f, Support::Flats(&s), m, 1, 2).unwrap() as i64, idim);
            assert_eq!(adim(f, Support::Flats(&s), m, m, 1, 3).unwrap() as i64, cone);
        }
    }

    #[test]
    fn projection_shortcut_matches_derivative_rows() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for k in [5usize, 9, 12] {
            let pts: Vec<ProjPoint> = (0..k).map(|_| ProjPoint::random(f, 3, &mut rng)).collect();
            for t in 2..=4 {
                let a = adim(f, Support::Points(&pts), t, t, 2, 1).unwrap();
                let b = adim_by_derivatives(f, Support::Points(&pts), t, t, 2, 1).unwrap();
                assert_eq!(a, b, "k = {k}, t = {t}");
            }
        }
    }

    #[test]
    fn empty_vdim_formula() {
        let f = field();
        let s = skeleton(f, 3, SkeletonKind::Lines);
        let v = vdim(f, Support::Flats(&s), 1, 1, 1, 0).unwrap();
        assert_eq!(v, -1);
    }

    #[test]
    fn skeleton_forms_small() {
        let f = field();
        for n in 2..=5 {
            let r = verify_skeleton_t(f, n, 1).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(verify_skeleton_t(f, 4, 0).unwrap().flats, 15);
        assert!(verify_skeleton_t(f, 8, 0).is_err());
    }
}
