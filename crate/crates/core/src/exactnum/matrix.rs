use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use super::{Backend, NumError, Scalar};

/// Dense row-major matrix of [`Scalar`]s sharing one backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Relative pivot threshold used by elimination in the float backend.
const FLOAT_PIVOT_EPS: f64 = 1e-12;

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix, NumError> {
        if rows == 0 || cols == 0 || rows * cols != entries.len() {
            return Err(NumError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let mut backend = entries[0].backend();
        for e in &entries[1..] {
            backend = backend.join(e.backend())?;
        }
        let entries = entries
            .into_iter()
            .map(|e| e.to_backend(backend))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, entries).expect("entries share a backend")
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64], backend: Backend) -> Matrix {
        assert_eq!(vals.len(), rows * cols);
        Matrix::from_fn(rows, cols, |i, j| backend.from_i64(vals[i * cols + j]))
    }

    pub fn zeros(rows: usize, cols: usize, backend: Backend) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| backend.zero())
    }

    pub fn identity(n: usize, backend: Backend) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i == j { backend.one() } else { backend.zero() })
    }

    pub fn diag(values: &[Scalar]) -> Matrix {
        let n = values.len();
        let zero = values[0].zero_like();
        Matrix::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn backend(&self) -> Backend {
        self.entries[0].backend()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_backend(&self, backend: Backend) -> Result<Matrix, NumError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_backend(backend))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix, NumError> {
        if self.cols != rhs.rows {
            return Err(NumError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        self.backend().join(rhs.backend())?;
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self[(i, 0)].zero_like();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                acc += &(a * &rhs[(k, j)]);
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self[(i, 0)].zero_like();
                for (k, x) in v.iter().enumerate() {
                    if !self[(i, k)].is_zero() && !x.is_zero() {
                        acc += &(&self[(i, k)] * x);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)], &rhs[(i, j)]))
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).fold(self.backend().zero(), |a, b| a + b)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        Scalar::max_abs(&self.entries)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    fn pivot_ok(x: &Scalar, scale: f64) -> bool {
        match x {
            Scalar::Float(v) => v.abs() > FLOAT_PIVOT_EPS * scale.max(1e-300),
            _ => !x.is_zero(),
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.max_abs();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // float: partial pivoting; exact: first nonzero
            let pick = if m.backend().is_exact() {
                (r..m.rows).find(|&i| !m[(i, c)].is_zero())
            } else {
                (r..m.rows)
                    .max_by(|&a, &b| m[(a, c)].abs_f64().total_cmp(&m[(b, c)].abs_f64()))
                    .filter(|&i| Matrix::pivot_ok(&m[(i, c)], scale))
            };
            let Some(p) = pick else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("nonzero pivot");
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let b = self.backend();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![b.zero(); self.cols];
                v[free] = b.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, free)];
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let scale = self.max_abs();
        let mut det = m.backend().one();
        for c in 0..n {
            let pick = if m.backend().is_exact() {
                (c..n).find(|&i| !m[(i, c)].is_zero())
            } else {
                (c..n)
                    .max_by(|&a, &b| m[(a, c)].abs_f64().total_cmp(&m[(b, c)].abs_f64()))
                    .filter(|&i| m[(i, c)].abs_f64() > 0.0 || scale == 0.0)
            };
            let Some(p) = pick else {
                return m.backend().zero();
            };
            if m[(p, c)].is_zero() {
                return m.backend().zero();
            }
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix, NumError> {
        assert!(self.is_square());
        let n = self.rows;
        let b = self.backend();
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                b.one()
            } else {
                b.zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(NumError::SingularInput(self.det().abs_f64()));
        }
        Ok(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solve `self · x = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Vec<Scalar>, NumError> {
        Ok(self.inverse()?.mul_vec(rhs))
    }

    /// Leading principal minors `det(A[..k, ..k])`, `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        (1..=self.rows)
            .map(|k| Matrix::from_fn(k, k, |i, j| self[(i, j)].clone()).det())
            .collect()
    }

    /// Sylvester test; exact for exact backends.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(Scalar::is_positive)
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Matrix {
        Matrix::from_fn(m.nrows(), m.ncols(), |i, j| Scalar::Float(m[(i, j)]))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("matrix product: {e}"))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_exact() {
        let a = Matrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2], Backend::Rational);
        assert_eq!(a.det(), Scalar::int(6));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(3, Backend::Rational));
    }

    #[test]
    fn nullspace_of_rank_two() {
        let a = Matrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6], Backend::Rational);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn singular_inverse_fails() {
        let a = Matrix::from_i64(2, 2, &[1, 2, 2, 4], Backend::Rational);
        assert!(matches!(a.inverse(), Err(NumError::SingularInput(_))));
        assert!(a.det().is_zero());
    }

    #[test]
    fn sylvester() {
        let a = Matrix::from_i64(2, 2, &[2, 1, 1, 2], Backend::Rational);
        assert!(a.is_positive_definite());
        let b = Matrix::from_i64(2, 2, &[1, 2, 2, 1], Backend::Rational);
        assert!(!b.is_positive_definite());
    }

    #[test]
    fn mixed_backends_rejected() {
        let e = Matrix::new(1, 2, vec![Scalar::int(1), Scalar::float(1.0)]);
        assert_eq!(e, Err(NumError::MixedBackend));
    }
}
