//! Dense matrices over a prime field.
//!
//! Storage is row-major. Elimination always picks the first nonzero entry of
//! the current column as pivot, so every result is reproducible bit for bit.

use rand::Rng;
use thiserror::Error;

use crate::field::{Fe, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, a square matrix is required")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    /// Build from row vectors. `cols` is needed so that zero-row matrices keep their width.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<Fe>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend_from_slice(r);
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// Convenience constructor from small signed integers.
    pub fn from_i64(field: PrimeField, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, cols, &rows)
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix { field, rows, cols, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[Fe]) {
        assert_eq!(row.len(), self.cols, "ragged row");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { left: self.shape(), right: other.shape() });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { left: self.shape(), right: (v.len(), 1) });
        }
        let f = self.field;
        Ok((0..self.rows).map(|r| dot(f, self.row(r), v)).collect())
    }

    pub fn select_rows(&self, keep: &[usize]) -> Matrix {
        let rows: Vec<Vec<Fe>> = keep.iter().map(|&r| self.row(r).to_vec()).collect();
        Matrix::from_rows(self.field, self.cols, &rows)
    }

    pub fn select_cols(&self, keep: &[usize]) -> Matrix {
        let rows: Vec<Vec<Fe>> = (0..self.rows).map(|r| keep.iter().map(|&c| self.get(r, c)).collect()).collect();
        Matrix::from_rows(self.field, keep.len(), &rows)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch { left: self.shape(), right: other.shape() });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Fe>> {
        let (r, pivots) = self.rref();
        let f = self.field;
        let mut is_pivot = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(i);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left null space `{w : w M = 0}`.
    pub fn left_kernel_basis(&self) -> Vec<Vec<Fe>> {
        self.transpose().kernel_basis()
    }

    pub fn det(&self) -> Result<Fe, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = Fe::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if piv != col {
                m.swap_rows(piv, col);
                acc = f.neg(acc);
            }
            let pv = m.get(col, col);
            acc = f.mul(acc, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), inv);
                if !factor.is_zero() {
                    m.axpy_row(r, col, f.neg(factor), col);
                }
            }
        }
        Ok(acc)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[dst] += factor * row[src]`, touching columns `from..`.
    fn axpy_row(&mut self, dst: usize, src: usize, factor: Fe, from: usize) {
        let p = self.field.modulus();
        let cols = self.cols;
        let (s, d) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&lo[src * cols..(src + 1) * cols], &mut hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&hi[..cols], &mut lo[dst * cols..(dst + 1) * cols])
        };
        let fac = factor.0;
        for c in from..cols {
            let sv = s[c].0;
            if sv != 0 {
                d[c] = Fe((d[c].0 + fac * sv % p) % p);
            }
        }
    }

    /// Gaussian elimination in place; returns pivot columns.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(piv, r);
            let inv = f.inv(self.get(r, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = f.mul(self.get(r, c), inv);
                self.set(r, c, v);
            }
            let start = if reduced { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, col);
                if !factor.is_zero() {
                    self.axpy_row(i, r, f.neg(factor), col);
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }
}

/// Dot product of two equal-length vectors.
pub fn dot(f: PrimeField, a: &[Fe], b: &[Fe]) -> Fe {
    let p = f.modulus();
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc = (acc + x.0 * y.0 % p) % p;
    }
    Fe(acc)
}

/// Coefficients (constant term first) of the polynomial of degree `< xs.len()` through the given values.
///
/// Newton divided differences; the `xs` must be distinct.
pub fn interpolate(f: PrimeField, xs: &[Fe], ys: &[Fe]) -> Vec<Fe> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = f.sub(dd[i], dd[i - 1]);
            let den = f.sub(xs[i], xs[i - level]);
            dd[i] = f.div(num, den).expect("distinct nodes");
        }
    }
    // expand the Newton form from the innermost term outwards
    let mut coeffs = vec![f.zero(); n];
    for i in (0..n).rev() {
        let mut next = vec![f.zero(); n];
        for (k, &c) in coeffs.iter().enumerate() {
            if k + 1 < n {
                next[k + 1] = f.add(next[k + 1], c);
            }
            next[k] = f.sub(next[k], f.mul(c, xs[i]));
        }
        next[0] = f.add(next[0], dd[i]);
        coeffs = next;
    }
    coeffs
}

/// Degree of a coefficient vector, `None` for the zero polynomial.
pub fn poly_degree(coeffs: &[Fe]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_cubic() {
        let f = PrimeField::new(10_007).unwrap();
        let poly = [5i64, -3, 0, 7];
        let eval = |x: Fe| poly.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), f.from_i64(c)));
        let xs: Vec<Fe> = (0..6).map(|k| f.from_u64(k * 3 + 1)).collect();
        let ys: Vec<Fe> = xs.iter().map(|&x| eval(x)).collect();
        let c = interpolate(f, &xs, &ys);
        let want: Vec<Fe> = [5, -3, 0, 7, 0, 0].iter().map(|&v| f.from_i64(v)).collect();
        assert_eq!(c, want);
        assert_eq!(poly_degree(&c), Some(3));
        assert_eq!(poly_degree(&[f.zero(); 3]), None);
    }
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    /// Laplace expansion along the first row, used as an independent determinant.
    fn cofactor_det(f: PrimeField, m: &[Vec<Fe>]) -> Fe {
        let n = m.len();
        if n == 0 {
            return Fe::ONE;
        }
        let mut acc = Fe::ZERO;
        for j in 0..n {
            let minor: Vec<Vec<Fe>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let term = f.mul(m[0][j], cofactor_det(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    /// Rank as the size of the largest nonvanishing minor.
    fn minor_rank(f: PrimeField, m: &Matrix) -> usize {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub: Vec<Vec<Fe>> = rs.iter().map(|&r| cs.iter().map(|&c| m.get(r, c)).collect()).collect();
                    if !cofactor_det(f, &sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn identity_rank_and_det() {
        let f = f7();
        let id = Matrix::identity(f, 3);
        assert_eq!(id.rank(), 3);
        assert_eq!(id.det().unwrap(), Fe::ONE);
        assert!(id.kernel_basis().is_empty());
    }

    #[test]
    fn proportional_rows() {
        let m = Matrix::from_i64(f7(), &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn swap_has_determinant_minus_one() {
        let m = Matrix::from_i64(f7(), &[&[0, 1], &[1, 0]]);
        assert_eq!(m.det().unwrap(), Fe(6));
    }

    #[test]
    fn non_square_det_errors() {
        let m = Matrix::zeros(f7(), 2, 3);
        assert_eq!(m.det(), Err(LinalgError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn zero_matrix_kernel() {
        let m = Matrix::zeros(f7(), 2, 3);
        assert_eq!(m.kernel_basis().len(), 3);
    }

    #[test]
    fn single_row_kernel_is_annihilated() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(f, &[&[1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn random_rank_and_det_match_cofactor_oracle() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let n = 1 + trial % 6;
            let mut m = Matrix::random(f, n, n, &mut rng);
            if trial % 3 == 0 && n > 1 {
                // force a dependency
                for c in 0..n {
                    let v = f.add(m.get(0, c), m.get(1, c));
                    m.set(n - 1, c, v);
                }
            }
            let rows: Vec<Vec<Fe>> = (0..n).map(|r| m.row(r).to_vec()).collect();
            assert_eq!(m.det().unwrap(), cofactor_det(f, &rows));
            assert_eq!(m.rank(), minor_rank(f, &m));
        }
    }

    #[test]
    fn rectangular_rank_matches_minor_oracle() {
        let f = PrimeField::new(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..6);
            let m = Matrix::random(f, r, c, &mut rng);
            assert_eq!(m.rank(), minor_rank(f, &m));
        }
    }

    #[test]
    fn rref_pivots_are_unit_columns() {
        let f = PrimeField::new(13).unwrap();
        let m = Matrix::from_i64(f, &[&[0, 2, 4, 1], &[0, 1, 2, 3], &[1, 1, 1, 1]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1, 3]);
        for (i, &c) in piv.iter().enumerate() {
            for k in 0..r.rows() {
                assert_eq!(r.get(k, c), if k == i { Fe::ONE } else { Fe::ZERO });
            }
        }
    }
}
