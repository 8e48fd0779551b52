use nalgebra::DMatrix;

use super::{Matrix, NumError, Scalar};

/// Result of [`so3_diagonalize`]: `M · C · Nᵀ = diag`, `M, N ∈ SO(3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalization {
    pub m: Matrix,
    pub n: Matrix,
    pub diag: Matrix,
}

impl Diagonalization {
    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..3).map(|i| self.diag[(i, i)].clone()).collect()
    }

    /// `‖Mᵀ · diag · N − C‖∞` as `f64`.
    pub fn residual(&self, c: &Matrix) -> f64 {
        let back = &(&self.m.transpose() * &self.diag) * &self.n;
        back.to_nalgebra().iter().zip(c.to_nalgebra().iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Find `M, N ∈ SO(3)` with `M · C · Nᵀ` diagonal (entries may be negative).
///
/// Exact inputs whose every row and column has a single nonzero entry are
/// handled exactly by a signed permutation. Everything else goes through a
/// float SVD with determinant repair; exact inputs are converted to `f64`
/// first and the result is in the float backend.
pub fn so3_diagonalize(c: &Matrix, singular_tol: f64) -> Result<Diagonalization, NumError> {
    if c.rows() != 3 || c.cols() != 3 {
        return Err(NumError::DimensionMismatch(format!(
            "expected a 3x3 matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    let det = c.det();
    if c.backend().is_exact() {
        if det.is_zero() {
            return Err(NumError::SingularInput(0.0));
        }
        if let Some(d) = monomial_path(c) {
            return Ok(d);
        }
    } else if det.abs_f64() < singular_tol {
        return Err(NumError::SingularInput(det.abs_f64()));
    }
    svd_path(&c.to_nalgebra())
}

fn monomial_path(c: &Matrix) -> Option<Diagonalization> {
    let b = c.backend();
    let mut perm = [0usize; 3];
    for (i, p) in perm.iter_mut().enumerate() {
        let nz: Vec<usize> = (0..3).filter(|&j| !c[(i, j)].is_zero()).collect();
        if nz.len() != 1 {
            return None;
        }
        *p = nz[0];
    }
    // N[j][perm[j]] = 1 so that (C Nᵀ)[i][i] = C[i][perm[i]]
    let mut n = Matrix::from_fn(3, 3, |i, j| if perm[i] == j { b.one() } else { b.zero() });
    let mut diag: Vec<Scalar> = (0..3).map(|i| c[(i, perm[i])].clone()).collect();
    if n.det().is_negative() {
        let j = perm[2];
        n[(2, j)] = -&n[(2, j)];
        diag[2] = -&diag[2];
    }
    Some(Diagonalization {
        m: Matrix::identity(3, b),
        n,
        diag: Matrix::diag(&diag),
    })
}

fn svd_path(c: &DMatrix<f64>) -> Result<Diagonalization, NumError> {
    let svd = c
        .clone()
        .try_svd(true, true, 1e-15, 10_000)
        .ok_or(NumError::NoConvergence)?;
    let u = svd.u.ok_or(NumError::NoConvergence)?;
    let v_t = svd.v_t.ok_or(NumError::NoConvergence)?;
    let mut m = u.transpose();
    let mut n = v_t;
    let mut sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    // flip the same index in M and N; each flip negates the singular value
    if m.determinant() < 0.0 {
        m.row_mut(2).neg_mut();
        sigma[2] = -sigma[2];
    }
    if n.determinant() < 0.0 {
        n.row_mut(2).neg_mut();
        sigma[2] = -sigma[2];
    }
    let diag: Vec<Scalar> = sigma.into_iter().map(Scalar::Float).collect();
    Ok(Diagonalization {
        m: Matrix::from_nalgebra(&m),
        n: Matrix::from_nalgebra(&n),
        diag: Matrix::diag(&diag),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Backend;

    fn check_so3(m: &Matrix) {
        let mf = m.to_nalgebra();
        let g = mf.transpose() * &mf - DMatrix::<f64>::identity(3, 3);
        assert!(g.amax() < 1e-12);
        assert!((mf.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_is_fixed() {
        let i = Matrix::identity(3, Backend::Rational);
        let d = so3_diagonalize(&i, 1e-10).unwrap();
        assert_eq!(d.m, i);
        assert_eq!(d.n, i);
        assert_eq!(d.diag, i);
    }

    #[test]
    fn diagonal_input_exact() {
        let c = Matrix::from_i64(3, 3, &[1, 0, 0, 0, 2, 0, 0, 0, -3], Backend::Rational);
        let d = so3_diagonalize(&c, 1e-10).unwrap();
        let prod = &(&d.m * &c) * &d.n.transpose();
        assert_eq!(prod, d.diag);
        let abs: Vec<_> = d.diagonal_entries().iter().map(Scalar::abs).collect();
        assert_eq!(abs, vec![Scalar::int(1), Scalar::int(2), Scalar::int(3)]);
        assert!(d.n.det().is_one());
    }

    #[test]
    fn odd_permutation_gets_sign_repair() {
        let c = Matrix::from_i64(3, 3, &[0, 1, 0, 2, 0, 0, 0, 0, 3], Backend::Rational);
        let d = so3_diagonalize(&c, 1e-10).unwrap();
        assert_eq!(&(&d.m * &c) * &d.n.transpose(), d.diag);
        assert!(d.n.det().is_one());
        assert_eq!(d.diag.det().abs(), c.det().abs());
    }

    #[test]
    fn float_general() {
        let c = Matrix::from_nalgebra(&DMatrix::from_row_slice(
            3,
            3,
            &[1.0, -2.0, 0.5, 3.0, 1.0, -1.0, 0.0, 2.0, 4.0],
        ));
        let d = so3_diagonalize(&c, 1e-10).unwrap();
        check_so3(&d.m);
        check_so3(&d.n);
        assert!(d.residual(&c) < 1e-10);
        let prod = (&(&d.m * &c) * &d.n.transpose()).to_nalgebra();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(prod[(i, j)].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn singular_rejected() {
        let c = Matrix::from_i64(3, 3, &[1, 2, 3, 2, 4, 6, 0, 0, 1], Backend::Rational);
        assert!(matches!(so3_diagonalize(&c, 1e-10), Err(NumError::SingularInput(_))));
        let f = c.to_backend(Backend::Float).unwrap();
        assert!(matches!(so3_diagonalize(&f, 1e-10), Err(NumError::SingularInput(_))));
    }
}
