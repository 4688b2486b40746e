//! Graded pieces of ideals of (fat) points through evaluation matrices.
//!
//! Monomials of a fixed degree are enumerated lexicographically descending,
//! so in three variables and degree 2 the order is `x0^2, x0x1, x0x2, x1^2,
//! x1x2, x2^2`. Every matrix in this module uses that column order.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::field::{Fe, PrimeField};
use crate::linalg::Matrix;
use crate::projgeom::ProjPoint;
use crate::util::binom;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("characteristic {prime} is too small for degree {degree}")]
    CharTooSmall { prime: u64, degree: usize },
    #[error("the zero form has no curve")]
    ZeroForm,
    #[error("coefficient vector of length {got} does not match {expected} monomials")]
    BadLength { got: usize, expected: usize },
    #[error("points have {got} coordinates, expected {expected}")]
    WrongAmbient { got: usize, expected: usize },
}

/// Exponent vectors of a fixed degree in lex-descending order, with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let mut exps = Vec::with_capacity(binom(degree + nvars - 1, nvars - 1) as usize);
        let mut cur = vec![0u32; nvars];
        fill(&mut exps, &mut cur, 0, degree as u32);
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialBasis { nvars, degree, exps, index }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exps(&self) -> &[Vec<u32>] {
        &self.exps
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    /// `(M(x))_M` for a coordinate vector `x`.
    pub fn eval_row(&self, field: PrimeField, x: &[Fe]) -> Vec<Fe> {
        let pows = power_table(field, x, self.degree);
        self.exps.iter().map(|e| monomial_value(field, &pows, e)).collect()
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, left: u32) {
    if var + 1 == cur.len() {
        cur[var] = left;
        out.push(cur.clone());
        return;
    }
    for a in (0..=left).rev() {
        cur[var] = a;
        fill(out, cur, var + 1, left - a);
    }
    cur[var] = 0;
}

fn power_table(field: PrimeField, x: &[Fe], max: usize) -> Vec<Vec<Fe>> {
    x.iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(max + 1);
            let mut acc = field.one();
            for _ in 0..=max {
                row.push(acc);
                acc = field.mul(acc, xi);
            }
            row
        })
        .collect()
}

fn monomial_value(field: PrimeField, pows: &[Vec<Fe>], exp: &[u32]) -> Fe {
    exp.iter().zip(pows).fold(field.one(), |acc, (&e, row)| field.mul(acc, row[e as usize]))
}

fn factorial(field: PrimeField, n: u32) -> Fe {
    (1..=n as u64).fold(field.one(), |acc, k| field.mul(acc, field.from_u64(k)))
}

/// `e_M`, the product of the factorials of the exponents.
pub fn exp_factorial(field: PrimeField, exp: &[u32]) -> Fe {
    exp.iter().fold(field.one(), |acc, &e| field.mul(acc, factorial(field, e)))
}

fn check_char(field: PrimeField, degree: usize) -> Result<(), PolyError> {
    if field.modulus() as usize <= degree {
        return Err(PolyError::CharTooSmall { prime: field.modulus(), degree });
    }
    Ok(())
}

/// A homogeneous form stored as coefficients on a [`MonomialBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub nvars: usize,
    pub degree: usize,
    pub coeffs: Vec<Fe>,
}

impl Form {
    pub fn new(nvars: usize, degree: usize, coeffs: Vec<Fe>) -> Result<Self, PolyError> {
        let expected = binom(degree + nvars - 1, nvars - 1) as usize;
        if coeffs.len() != expected {
            return Err(PolyError::BadLength { got: coeffs.len(), expected });
        }
        Ok(Form { nvars, degree, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, field: PrimeField, x: &[Fe]) -> Fe {
        let basis = MonomialBasis::new(self.nvars, self.degree);
        let row = basis.eval_row(field, x);
        crate::linalg::dot(field, &row, &self.coeffs)
    }

    pub fn mul(&self, field: PrimeField, other: &Form) -> Form {
        let a = MonomialBasis::new(self.nvars, self.degree);
        let b = MonomialBasis::new(other.nvars, other.degree);
        let c = MonomialBasis::new(self.nvars, self.degree + other.degree);
        let mut out = vec![field.zero(); c.len()];
        for (i, ea) in a.exps().iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for (j, eb) in b.exps().iter().enumerate() {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let k = c.index_of(&e).expect("degrees add");
                out[k] = field.add(out[k], field.mul(self.coeffs[i], other.coeffs[j]));
            }
        }
        Form { nvars: self.nvars, degree: self.degree + other.degree, coeffs: out }
    }

    /// The form `F(A x)` for a square matrix `A`.
    pub fn compose_linear(&self, field: PrimeField, a: &Matrix) -> Form {
        let n = self.nvars;
        let linear: Vec<Form> = (0..n)
            .map(|i| Form { nvars: n, degree: 1, coeffs: (0..n).map(|j| a.get(i, j)).collect() })
            .collect();
        let basis = MonomialBasis::new(n, self.degree);
        let out_len = basis.len();
        let mut out = vec![field.zero(); out_len];
        for (k, e) in basis.exps().iter().enumerate() {
            if self.coeffs[k].is_zero() {
                continue;
            }
            let mut term = Form { nvars: n, degree: 0, coeffs: vec![self.coeffs[k]] };
            for (var, &power) in e.iter().enumerate() {
                for _ in 0..power {
                    term = term.mul(field, &linear[var]);
                }
            }
            for (o, c) in out.iter_mut().zip(&term.coeffs) {
                *o = field.add(*o, *c);
            }
        }
        Form { nvars: n, degree: self.degree, coeffs: out }
    }
}

/// All monomials of degree `k` as forms.
pub fn monomial_forms(nvars: usize, k: usize) -> Vec<Form> {
    let b = MonomialBasis::new(nvars, k);
    (0..b.len())
        .map(|i| {
            let mut coeffs = vec![Fe::ZERO; b.len()];
            coeffs[i] = Fe::ONE;
            Form { nvars, degree: k, coeffs }
        })
        .collect()
}

/// Points with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatPointScheme {
    pub points: Vec<(ProjPoint, usize)>,
}

impl FatPointScheme {
    pub fn reduced(points: &[ProjPoint]) -> Self {
        FatPointScheme { points: points.iter().map(|p| (p.clone(), 1)).collect() }
    }

    pub fn with(mut self, p: ProjPoint, mult: usize) -> Self {
        self.points.push((p, mult));
        self
    }
}

/// Rows imposing vanishing to order `mult` at `x`: one row per derivative `d^beta`, `|beta| = mult - 1`.
pub fn fat_point_rows(field: PrimeField, basis: &MonomialBasis, x: &[Fe], mult: usize) -> Vec<Vec<Fe>> {
    if mult == 0 {
        return Vec::new();
    }
    let order = mult - 1;
    if order == 0 {
        return vec![basis.eval_row(field, x)];
    }
    if order > basis.degree() {
        // derivatives of order above the degree vanish identically
        return Vec::new();
    }
    let derivs = MonomialBasis::new(basis.nvars(), order);
    let pows = power_table(field, x, basis.degree());
    derivs
        .exps()
        .iter()
        .map(|beta| {
            basis
                .exps()
                .iter()
                .map(|alpha| {
                    if alpha.iter().zip(beta).any(|(a, b)| a < b) {
                        return field.zero();
                    }
                    let mut coef = field.one();
                    let mut rest = Vec::with_capacity(alpha.len());
                    for (&a, &b) in alpha.iter().zip(beta) {
                        // a! / (a - b)!
                        for k in (a - b + 1)..=a {
                            coef = field.mul(coef, field.from_u64(k as u64));
                        }
                        rest.push(a - b);
                    }
                    field.mul(coef, monomial_value(field, &pows, &rest))
                })
                .collect()
        })
        .collect()
}

/// The interpolation matrix of a fat point scheme in degree `t`.
pub fn interp_matrix(field: PrimeField, scheme: &FatPointScheme, t: usize) -> Result<Matrix, PolyError> {
    check_char(field, t)?;
    let nvars = scheme.points.first().map_or(1, |(p, _)| p.coords().len());
    let basis = MonomialBasis::new(nvars, t);
    let mut m = Matrix::zeros(field, 0, basis.len());
    for (p, s) in &scheme.points {
        if p.coords().len() != nvars {
            return Err(PolyError::WrongAmbient { got: p.coords().len(), expected: nvars });
        }
        for row in fat_point_rows(field, &basis, p.coords(), *s) {
            m.push_row(&row);
        }
    }
    Ok(m)
}

/// Evaluation matrix of reduced points in degree `t` (rows are points).
pub fn eval_matrix(field: PrimeField, points: &[ProjPoint], nvars: usize, t: usize) -> Matrix {
    let basis = MonomialBasis::new(nvars, t);
    let mut m = Matrix::zeros(field, 0, basis.len());
    for p in points {
        m.push_row(&basis.eval_row(field, p.coords()));
    }
    m
}

/// `dim [I(X)]_t`.
pub fn ideal_dim(field: PrimeField, scheme: &FatPointScheme, nvars: usize, t: usize) -> Result<usize, PolyError> {
    let cols = binom(t + nvars - 1, nvars - 1) as usize;
    if scheme.points.is_empty() {
        return Ok(cols);
    }
    Ok(cols - interp_matrix(field, scheme, t)?.rank())
}

/// `dim [I(Z)]_t` for reduced points in `P^(nvars-1)`.
pub fn ideal_dim_points(field: PrimeField, points: &[ProjPoint], nvars: usize, t: usize) -> usize {
    let m = eval_matrix(field, points, nvars, t);
    m.cols() - m.rank()
}

/// Basis of `[I(Z)]_t` as forms.
pub fn ideal_basis(field: PrimeField, points: &[ProjPoint], nvars: usize, t: usize) -> Vec<Form> {
    eval_matrix(field, points, nvars, t)
        .kernel_basis()
        .into_iter()
        .map(|coeffs| Form { nvars, degree: t, coeffs })
        .collect()
}

/// Hilbert function of the points, `t -> rank` of the evaluation matrix.
pub fn hilbert_function(field: PrimeField, points: &[ProjPoint], nvars: usize, t: usize) -> usize {
    eval_matrix(field, points, nvars, t).rank()
}

/// First differences of the Hilbert function, stopping once it reaches `|Z|`.
pub fn hilbert_h_vector(field: PrimeField, points: &[ProjPoint]) -> Vec<usize> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let nvars = first.coords().len();
    let mut out = Vec::new();
    let mut prev = 0;
    for t in 0.. {
        let h = hilbert_function(field, points, nvars, t);
        out.push(h - prev);
        prev = h;
        if h == points.len() {
            break;
        }
    }
    out
}

/// Columns of `T(Z, dQ)`: first the points, then the monomials of degree `d - 1`.
pub fn macaulay_matrix(field: PrimeField, points: &[Vec<Fe>], d: usize, q: &[Fe]) -> Result<Matrix, PolyError> {
    check_char(field, d)?;
    let nvars = q.len();
    let big = MonomialBasis::new(nvars, d);
    let small = MonomialBasis::new(nvars, d.saturating_sub(1));
    let d_fact = factorial(field, d as u32);
    let mut m = Matrix::zeros(field, big.len(), points.len() + if d == 0 { 0 } else { small.len() });
    for (j, p) in points.iter().enumerate() {
        if p.len() != nvars {
            return Err(PolyError::WrongAmbient { got: p.len(), expected: nvars });
        }
        let vals = big.eval_row(field, p);
        for (i, e) in big.exps().iter().enumerate() {
            let c = field.div(d_fact, exp_factorial(field, e)).expect("p > d");
            m.set(i, j, field.mul(c, vals[i]));
        }
    }
    if d > 0 {
        for (k, e) in small.exps().iter().enumerate() {
            for var in 0..nvars {
                let mut up = e.clone();
                up[var] += 1;
                let i = big.index_of(&up).expect("degree d");
                m.set(i, points.len() + k, q[var]);
            }
        }
    }
    Ok(m)
}

/// `Lambda(Z + dQ, d)` for points given by coordinate vectors (no normalization).
pub fn weddle_interp_matrix(field: PrimeField, points: &[Vec<Fe>], d: usize, q: &[Fe]) -> Result<Matrix, PolyError> {
    check_char(field, d)?;
    let basis = MonomialBasis::new(q.len(), d);
    let mut m = Matrix::zeros(field, 0, basis.len());
    for p in points {
        m.push_row(&basis.eval_row(field, p));
    }
    for row in fat_point_rows(field, &basis, q, d) {
        m.push_row(&row);
    }
    Ok(m)
}

/// Whether `[I(Z)]_d` generates `[I(Z)]_(d+1)`.
pub fn generated_to_next_degree(field: PrimeField, points: &[ProjPoint], nvars: usize, d: usize) -> bool {
    let target = ideal_dim_points(field, points, nvars, d + 1);
    let basis = ideal_basis(field, points, nvars, d);
    let vars = monomial_forms(nvars, 1);
    let big = MonomialBasis::new(nvars, d + 1);
    let mut m = Matrix::zeros(field, 0, big.len());
    for f in &basis {
        for x in &vars {
            m.push_row(&f.mul(field, x).coeffs);
        }
    }
    m.rank() == target
}

/// Whether two ternary forms share no common factor.
///
/// After a random invertible change of coordinates with `F(A e2)`, `G(A e2)`
/// nonzero, both forms are monic up to scalars in the last variable, and the
/// resultant with respect to it is a binary form of degree `ab`. It is sampled
/// on `ab + 1` affine points; any nonzero value proves coprimality.
pub fn coprime_plane_curves<R: Rng + ?Sized>(field: PrimeField, f: &Form, g: &Form, rng: &mut R) -> Result<bool, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    if f.degree == 0 || g.degree == 0 {
        return Ok(true);
    }
    check_char(field, f.degree * g.degree)?;
    let (a, b) = (f.degree, g.degree);
    for _attempt in 0..3 {
        let change = loop {
            let m = Matrix::random(field, 3, 3, rng);
            if m.det().map(|d| !d.is_zero()).unwrap_or(false) {
                let col: Vec<Fe> = (0..3).map(|r| m.get(r, 2)).collect();
                if !f.eval(field, &col).is_zero() && !g.eval(field, &col).is_zero() {
                    break m;
                }
            }
        };
        let ft = f.compose_linear(field, &change);
        let gt = g.compose_linear(field, &change);
        for s in 0..=(a * b) as u64 {
            let s = field.from_u64(s);
            let pf = univariate_in_last(field, &ft, s);
            let pg = univariate_in_last(field, &gt, s);
            if !sylvester(field, &pf, &pg).det().expect("square").is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Coefficients (constant first) of `z -> F(1, s, z)`.
fn univariate_in_last(field: PrimeField, f: &Form, s: Fe) -> Vec<Fe> {
    let basis = MonomialBasis::new(3, f.degree);
    let mut out = vec![field.zero(); f.degree + 1];
    for (k, e) in basis.exps().iter().enumerate() {
        let c = f.coeffs[k];
        if c.is_zero() {
            continue;
        }
        let v = field.mul(c, field.pow(s, e[1] as u64));
        let z = e[2] as usize;
        out[z] = field.add(out[z], v);
    }
    out
}

/// Sylvester matrix of two univariate polynomials given constant term first.
fn sylvester(field: PrimeField, p: &[Fe], q: &[Fe]) -> Matrix {
    let a = p.len() - 1;
    let b = q.len() - 1;
    let n = a + b;
    let mut m = Matrix::zeros(field, n, n);
    for r in 0..b {
        for (k, &c) in p.iter().rev().enumerate() {
            m.set(r, r + k, c);
        }
    }
    for r in 0..a {
        for (k, &c) in q.iter().rev().enumerate() {
            m.set(b + r, r + k, c);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    fn form(f: PrimeField, nvars: usize, degree: usize, terms: &[(&[u32], i64)]) -> Form {
        let b = MonomialBasis::new(nvars, degree);
        let mut coeffs = vec![Fe::ZERO; b.len()];
        for (e, c) in terms {
            coeffs[b.index_of(e).unwrap()] = f.from_i64(*c);
        }
        Form::new(nvars, degree, coeffs).unwrap()
    }

    #[test]
    fn lex_descending_order() {
        let b = MonomialBasis::new(4, 3);
        assert_eq!(b.len(), 20);
        assert_eq!(b.exps()[0], vec![3, 0, 0, 0]);
        assert_eq!(b.exps()[1], vec![2, 1, 0, 0]);
        assert_eq!(b.exps()[10], vec![0, 3, 0, 0]);
        assert_eq!(b.exps()[19], vec![0, 0, 0, 3]);
    }

    #[test]
    fn single_simple_point_row() {
        let f = field();
        let p = ProjPoint::from_i64(f, &[1, 2, 3]).unwrap();
        let m = interp_matrix(f, &FatPointScheme::reduced(&[p.clone()]), 2).unwrap();
        let expected: Vec<Fe> = [1, 2, 3, 4, 6, 9].iter().map(|&v| f.from_i64(v)).collect();
        assert_eq!(m.row(0), &expected[..]);
        let zero_deg = interp_matrix(f, &FatPointScheme::reduced(&[p]), 0).unwrap();
        assert_eq!(zero_deg, Matrix::from_i64(f, &[&[1]]));
    }

    #[test]
    fn big_example_spot_entries() {
        let f = field();
        let raw: Vec<Vec<Fe>> = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1], [2, 3, 5, 7]]
            .iter()
            .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
            .collect();
        let q: Vec<Fe> = [11, 13, 17, 19].iter().map(|&v| f.from_i64(v)).collect();
        let n = weddle_interp_matrix(f, &raw, 3, &q).unwrap().transpose();
        assert_eq!(n.get(1, 5), f.from_i64(12));
        assert_eq!(n.get(10, 10), f.from_i64(6 * 13));
        let t = macaulay_matrix(f, &raw, 3, &q).unwrap();
        assert_eq!(t.get(1, 5), f.from_i64(36));
        assert_eq!(t.get(10, 10), f.from_i64(13));
        assert_eq!(t.get(5, 4), f.from_i64(6));
        assert_eq!(t.get(5, 5), f.from_i64(180));
    }

    #[test]
    fn minors_differ_by_factorial_factor() {
        let f = field();
        let raw: Vec<Vec<Fe>> = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1], [2, 3, 5, 7]]
            .iter()
            .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
            .collect();
        let q: Vec<Fe> = [3, 1, 4, 1].iter().map(|&v| f.from_i64(v)).collect();
        let n = weddle_interp_matrix(f, &raw, 3, &q).unwrap().transpose();
        let t = macaulay_matrix(f, &raw, 3, &q).unwrap();
        // drop monomial rows 2, 12, 18, 19 (1-based)
        let keep: Vec<usize> = (0..20).filter(|i| ![1, 11, 17, 18].contains(i)).collect();
        let b = n.select_rows(&keep).det().unwrap();
        let a = t.select_rows(&keep).det().unwrap();
        let basis = MonomialBasis::new(4, 3);
        let prod_e = keep.iter().fold(f.one(), |acc, &i| f.mul(acc, exp_factorial(f, &basis.exps()[i])));
        let factor = f.div(prod_e, f.pow(f.from_u64(6), 6)).unwrap();
        assert_eq!(factor, f.div(f.from_u64(64), f.from_u64(9)).unwrap());
        assert_eq!(b, f.mul(factor, a));
    }

    #[test]
    fn random_macaulay_rank_matches_interpolation_rank() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..50 {
            let n = 2 + trial % 3;
            let d = 1 + trial % 4;
            let r = rng.gen_range(1..=binom(d + n, n) as usize);
            let raw: Vec<Vec<Fe>> = (0..r).map(|_| (0..=n).map(|_| f.random(&mut rng)).collect()).collect();
            let q: Vec<Fe> = (0..=n).map(|_| f.random(&mut rng)).collect();
            let l = weddle_interp_matrix(f, &raw, d, &q).unwrap();
            let t = macaulay_matrix(f, &raw, d, &q).unwrap();
            assert_eq!(l.rank(), t.rank(), "trial {trial}");
        }
    }

    #[test]
    fn empty_z_macaulay_is_multiplication() {
        let f = field();
        let q: Vec<Fe> = [2, 7, 5].iter().map(|&v| f.from_i64(v)).collect();
        let t = macaulay_matrix(f, &[], 3, &q).unwrap();
        assert_eq!(t.rank(), binom(4, 2) as usize);
    }

    #[test]
    fn h_vectors() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seven: Vec<ProjPoint> = (0..7).map(|_| ProjPoint::random(f, 2, &mut rng)).collect();
        assert_eq!(hilbert_h_vector(f, &seven), vec![1, 2, 3, 1]);
        assert_eq!(hilbert_h_vector(f, &seven[..1]), vec![1]);
        let grid: Vec<ProjPoint> = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 1, 1]]
            .iter()
            .map(|r| ProjPoint::from_i64(f, r).unwrap())
            .collect();
        // a (2,3)-grid: two skew lines with three points each
        assert_eq!(hilbert_h_vector(f, &grid), vec![1, 3, 2]);
    }

    #[test]
    fn simple_point_codimension_one() {
        let f = field();
        let p = ProjPoint::from_i64(f, &[1, 5, 2, 9]).unwrap();
        for t in 1..6 {
            assert_eq!(ideal_dim(f, &FatPointScheme::reduced(&[p.clone()]), 4, t).unwrap(), binom(t + 3, 3) as usize - 1);
        }
    }

    #[test]
    fn double_point_conditions() {
        let f = field();
        let p = ProjPoint::from_i64(f, &[1, 2, 3]).unwrap();
        let s = FatPointScheme { points: vec![(p, 2)] };
        assert_eq!(ideal_dim(f, &s, 3, 2).unwrap(), 3);
        assert_eq!(ideal_dim(f, &s, 3, 3).unwrap(), 7);
    }

    #[test]
    fn coprimality_examples() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = form(f, 3, 1, &[(&[1, 0, 0], 1)]);
        let y = form(f, 3, 1, &[(&[0, 1, 0], 1)]);
        assert!(coprime_plane_curves(f, &x, &y, &mut rng).unwrap());
        let xy = form(f, 3, 2, &[(&[1, 1, 0], 1)]);
        let xz = form(f, 3, 2, &[(&[1, 0, 1], 1)]);
        assert!(!coprime_plane_curves(f, &xy, &xz, &mut rng).unwrap());
        let conic = form(f, 3, 2, &[(&[2, 0, 0], 1), (&[0, 1, 1], -1)]);
        let cube = form(f, 3, 3, &[(&[3, 0, 0], 1)]);
        assert!(coprime_plane_curves(f, &conic, &cube, &mut rng).unwrap());
        let zero = Form::new(3, 2, vec![Fe::ZERO; 6]).unwrap();
        assert_eq!(coprime_plane_curves(f, &zero, &x, &mut rng), Err(PolyError::ZeroForm));
        // common conic factor inside higher degree forms
        let g1 = conic.mul(f, &x);
        let g2 = conic.mul(f, &y).mul(f, &y);
        assert!(!coprime_plane_curves(f, &g1, &g2, &mut rng).unwrap());
    }

    #[test]
    fn generation_checks() {
        let f = field();
        // five points on a line in P^2: the line generates degree 2 only together with a quintic
        let line: Vec<ProjPoint> = (1..=5).map(|k| ProjPoint::from_i64(f, &[1, k, 0]).unwrap()).collect();
        assert!(!generated_to_next_degree(f, &line, 3, 4));
        assert!(generated_to_next_degree(f, &[], 3, 2));
    }

    #[test]
    fn composition_with_identity() {
        let f = field();
        let conic = form(f, 3, 2, &[(&[2, 0, 0], 1), (&[0, 1, 1], -1)]);
        assert_eq!(conic.compose_linear(f, &Matrix::identity(f, 3)), conic);
    }
}
