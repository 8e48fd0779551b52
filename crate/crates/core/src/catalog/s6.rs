//! The round `S⁶ ⊂ Im 𝕆` with `J_x v = x × v`.
//!
//! For tangent `X, Y` at `x`, `(∇_X J)Y` is the tangential part of the
//! ambient derivative of `p ↦ p × Y`, which is `X × Y`. Everything below is
//! written for an arbitrary bilinear product so the same check runs on
//! structures pushed forward by `SO(7)`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exactnum::{cross7, Matrix, Scalar};

use super::CatalogError;

/// A point of `S⁶`, validated to have unit length.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePointFrame {
    x: Vec<Scalar>,
}

impl SpherePointFrame {
    pub fn new(x: Vec<Scalar>, tol: f64) -> Result<SpherePointFrame, CatalogError> {
        if x.len() != 7 {
            return Err(CatalogError::InvalidParams(format!("need 7 coordinates, got {}", x.len())));
        }
        let n2 = dot(&x, &x);
        let unit = if n2.is_exact() {
            n2.is_one()
        } else {
            (n2.to_f64() - 1.0).abs() <= tol
        };
        if !unit {
            return Err(CatalogError::NotUnitVector(n2.to_f64()));
        }
        Ok(SpherePointFrame { x })
    }

    /// The `i`-th imaginary unit `eᵢ` (0-based), exact.
    pub fn basis(i: usize) -> SpherePointFrame {
        let x = (0..7).map(|k| Scalar::int((k == i) as i64)).collect();
        SpherePointFrame { x }
    }

    pub fn point(&self) -> &[Scalar] {
        &self.x
    }

    /// Orthogonal basis of `x^⊥` by Gram–Schmidt on the coordinate axes,
    /// skipping the axis most aligned with `x`. Unnormalized so that rational
    /// points stay rational.
    pub fn tangent_basis(&self) -> Vec<Vec<Scalar>> {
        let skip = (0..7)
            .max_by(|&a, &b| self.x[a].abs_f64().total_cmp(&self.x[b].abs_f64()))
            .unwrap();
        let zero = self.x[0].zero_like();
        let mut done = vec![self.x.clone()];
        for i in (0..7).filter(|&i| i != skip) {
            let mut v = vec![zero.clone(); 7];
            v[i] = zero.one_like();
            for u in &done {
                let c = &dot(&v, u) / &dot(u, u);
                v = v.iter().zip(u).map(|(a, b)| a - &(&c * b)).collect();
            }
            done.push(v);
        }
        let mut basis: Vec<Vec<Scalar>> = done.split_off(1);
        if !zero.is_exact() {
            for v in &mut basis {
                let n = dot(v, v).to_f64().sqrt();
                *v = v.iter().map(|a| Scalar::float(a.to_f64() / n)).collect();
            }
        }
        basis
    }
}

fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).fold(u[0].zero_like(), |acc, (a, b)| acc + &(a * b))
}

fn add(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct S6Report {
    pub point: Vec<f64>,
    pub exact: bool,
    pub nabla_omega_norm: f64,
    /// `max |∇ω(X,Y,Z) + ∇ω(Y,X,Z)|` over the tangent frame.
    pub antisym_residual: f64,
    pub j_squared_residual: f64,
    pub compatibility_residual: f64,
    pub type_constant: Scalar,
    pub type_constant_residual: f64,
    /// Central finite difference at `h = 1e-5` against the exact `∇J`.
    pub fd_residual: f64,
    pub passes: bool,
}

const FD_STEP: f64 = 1e-5;
const FD_TOL: f64 = 1e-6;

fn run_check(
    x: &SpherePointFrame,
    product: &dyn Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
    tol: f64,
) -> Result<S6Report, CatalogError> {
    let p = x.point();
    let exact = p[0].is_exact();
    let u = x.tangent_basis();
    let n = u.len();
    let ok = |r: &Scalar| if exact { r.is_zero() } else { r.abs_f64() <= tol };
    let worst = |acc: f64, r: &Scalar| acc.max(r.abs_f64());

    let gram = Matrix::from_fn(n, n, |a, b| dot(&u[a], &u[b]));
    let ju: Vec<Vec<Scalar>> = u.iter().map(|v| product(p, v)).collect();
    // J in the frame: column b holds the coefficients of J u_b
    let jm = Matrix::from_fn(n, n, |a, b| &dot(&u[a], &ju[b]) / &gram[(a, a)]);
    let j2 = (&jm * &jm).add(&Matrix::identity(n, jm.backend()));
    let j_squared_residual = j2.entries().iter().fold(0.0, worst);
    let compat = Matrix::from_fn(n, n, |a, b| &dot(&ju[a], &ju[b]) - &gram[(a, b)]);
    let compatibility_residual = compat.entries().iter().fold(0.0, worst);

    // ∇ω(a,b,c) = ⟨(∇_{u_a} J) u_b, u_c⟩ = ⟨u_a ∘ u_b, u_c⟩
    let prods: Vec<Vec<Vec<Scalar>>> =
        (0..n).map(|a| (0..n).map(|b| product(&u[a], &u[b])).collect()).collect();
    let mut antisym = p[0].zero_like();
    let mut norm = 0.0f64;
    let mut antisym_ok = true;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let w = dot(&prods[a][b], &u[c]);
                let r = &w + &dot(&prods[b][a], &u[c]);
                norm = norm.max(w.abs_f64());
                antisym_ok &= ok(&r);
                if r.abs_f64() > antisym.abs_f64() {
                    antisym = r;
                }
            }
        }
    }

    // ‖(∇_X J)Y‖² = α(‖X‖²‖Y‖² − ⟨X,Y⟩² − ⟨JX,Y⟩²) on basis pairs and on
    // (u_a + u_b, u_c)
    let mut pairs: Vec<(Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            pairs.push((u[a].clone(), u[b].clone()));
            for c in (a + 1)..n {
                pairs.push((add(&u[a], &u[c]), u[b].clone()));
            }
        }
    }
    let x2 = dot(p, p);
    let mut alpha: Option<Scalar> = None;
    let mut alpha_res = 0.0f64;
    let mut alpha_ok = true;
    for (xv, yv) in &pairs {
        let xy = product(xv, yv);
        let along = dot(&xy, p);
        let lhs = &dot(&xy, &xy) - &(&(&along * &along) / &x2);
        let xyg = dot(xv, yv);
        let jxy = dot(&product(p, xv), yv);
        let rhs = &(&(&dot(xv, xv) * &dot(yv, yv)) - &(&xyg * &xyg)) - &(&jxy * &jxy);
        let degenerate = if exact { rhs.is_zero() } else { rhs.abs_f64() <= tol };
        if degenerate {
            continue;
        }
        let k = alpha.get_or_insert_with(|| &lhs / &rhs).clone();
        let r = &lhs - &(&k * &rhs);
        alpha_ok &= ok(&r);
        alpha_res = alpha_res.max(r.abs_f64());
    }
    let type_constant = alpha.ok_or_else(|| CatalogError::Solve("no nondegenerate pair".into()))?;

    let fd_residual = fd_check(p, &u, product);
    let alpha_one = if exact {
        type_constant.is_one()
    } else {
        (type_constant.to_f64() - 1.0).abs() <= tol
    };
    let passes = antisym_ok
        && alpha_ok
        && alpha_one
        && norm > 0.0
        && j2.entries().iter().all(ok)
        && compat.entries().iter().all(ok)
        && fd_residual <= FD_TOL;
    Ok(S6Report {
        point: p.iter().map(Scalar::to_f64).collect(),
        exact,
        nabla_omega_norm: norm,
        antisym_residual: antisym.abs_f64(),
        j_squared_residual,
        compatibility_residual,
        type_constant,
        type_constant_residual: alpha_res,
        fd_residual,
        passes,
    })
}

/// Tangential part of the central difference of `p ↦ Ĵ(p)Y` with
/// `Ĵ(p)Y = (p/|p|) ∘ (Y − ⟨Y,p⟩p/|p|²)`, compared with `X ∘ Y`.
fn fd_check(
    p: &[Scalar],
    u: &[Vec<Scalar>],
    product: &dyn Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
) -> f64 {
    let f = |v: &[Scalar]| -> Vec<f64> { v.iter().map(Scalar::to_f64).collect() };
    let s = |v: &[f64]| -> Vec<Scalar> { v.iter().map(|&a| Scalar::float(a)).collect() };
    let fdot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let x = f(p);
    let ext = |q: &[f64], y: &[f64]| -> Vec<f64> {
        let q2 = fdot(q, q);
        let qn = q2.sqrt();
        let c = fdot(y, q) / q2;
        let yt: Vec<f64> = y.iter().zip(q).map(|(a, b)| a - c * b).collect();
        let unit: Vec<f64> = q.iter().map(|a| a / qn).collect();
        f(&product(&s(&unit), &s(&yt)))
    };
    let uf: Vec<Vec<f64>> = u.iter().map(|v| {
        let v = f(v);
        let n = fdot(&v, &v).sqrt();
        v.iter().map(|a| a / n).collect()
    }).collect();
    let mut worst = 0.0f64;
    for xv in &uf {
        for yv in &uf {
            let plus: Vec<f64> = x.iter().zip(xv).map(|(a, b)| a + FD_STEP * b).collect();
            let minus: Vec<f64> = x.iter().zip(xv).map(|(a, b)| a - FD_STEP * b).collect();
            let d: Vec<f64> = ext(&plus, yv)
                .iter()
                .zip(ext(&minus, yv))
                .map(|(a, b)| (a - b) / (2.0 * FD_STEP))
                .collect();
            let exact = f(&product(&s(xv), &s(yv)));
            let diff: Vec<f64> = d.iter().zip(&exact).map(|(a, b)| a - b).collect();
            let along = fdot(&diff, &x);
            let tangential = diff.iter().zip(&x).map(|(a, b)| a - along * b);
            worst = tangential.fold(worst, |m, v| m.max(v.abs()));
        }
    }
    worst
}

/// Verify the nearly-Kähler identities of the octonionic `J` at `x`.
pub fn s6_check(x: &SpherePointFrame, tol: f64) -> Result<S6Report, CatalogError> {
    run_check(x, &|a: &[Scalar], b: &[Scalar]| cross7(a, b), tol)
}

/// Push `J` forward by `g ∈ SO(7)`, `(g·J)_{gx} = g J_x g⁻¹`, and run the
/// same check at `g x` for the transformed product `g(gᵀu × gᵀv)`.
pub fn s6_orbit_check(
    g: &Matrix,
    x: &SpherePointFrame,
    tol: f64,
) -> Result<S6Report, CatalogError> {
    if g.rows() != 7 || !g.is_square() {
        return Err(CatalogError::InvalidParams("g must be 7×7".into()));
    }
    let gt = g.transpose();
    let id = (&gt * g).sub(&Matrix::identity(7, g.backend()));
    let det = g.det();
    let orthogonal = if g.backend().is_exact() {
        id.is_zero() && det.is_one()
    } else {
        id.max_abs() <= tol && (det.to_f64() - 1.0).abs() <= tol
    };
    if !orthogonal {
        return Err(CatalogError::InvalidParams("g is not in SO(7)".into()));
    }
    let gx = g.mul_vec(x.point());
    let y = SpherePointFrame::new(gx, tol)?;
    let product = |a: &[Scalar], b: &[Scalar]| g.mul_vec(&cross7(&gt.mul_vec(a), &gt.mul_vec(b)));
    run_check(&y, &product, tol)
}

/// Uniform random point of `S⁶`.
pub fn random_unit_point<R: Rng>(rng: &mut R) -> SpherePointFrame {
    let v: Vec<f64> = (0..7).map(|_| rng.sample(StandardNormal)).collect();
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    SpherePointFrame {
        x: v.iter().map(|a| Scalar::float(a / n)).collect(),
    }
}

/// Haar-random element of `SO(7)` from the QR factorization of a Gaussian
/// matrix.
pub fn random_so7<R: Rng>(rng: &mut R) -> Matrix {
    let a = DMatrix::<f64>::from_fn(7, 7, |_, _| rng.sample(StandardNormal));
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..7 {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    Matrix::from_nalgebra(&q)
}

/// `s6_check` and `s6_orbit_check` at one random point.
#[derive(Clone, Debug, PartialEq)]
pub struct S6Sample {
    pub check: S6Report,
    pub orbit: S6Report,
}

/// `n` random points and `SO(7)` elements drawn from a ChaCha stream seeded
/// with `seed`.
pub fn s6_random_samples(n: usize, seed: u64, tol: f64) -> Result<Vec<S6Sample>, CatalogError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = random_unit_point(&mut rng);
            let g = random_so7(&mut rng);
            Ok(S6Sample {
                check: s6_check(&x, tol)?,
                orbit: s6_orbit_check(&g, &x, tol)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_basis_points() {
        for i in 0..7 {
            let r = s6_check(&SpherePointFrame::basis(i), 0.0).unwrap();
            assert!(r.exact);
            assert!(r.passes, "{r:?}");
            assert_eq!(r.antisym_residual, 0.0);
            assert_eq!(r.type_constant, Scalar::int(1));
        }
    }

    #[test]
    fn exact_rational_point() {
        // (3/5, 4/5, 0, …) is rational with a rational orthogonal frame
        let mut x = vec![Scalar::int(0); 7];
        x[0] = Scalar::ratio(3, 5);
        x[1] = Scalar::ratio(4, 5);
        let r = s6_check(&SpherePointFrame::new(x, 0.0).unwrap(), 0.0).unwrap();
        assert!(r.passes, "{r:?}");
        assert_eq!(r.type_constant, Scalar::int(1));
    }

    #[test]
    fn diagonal_vanishes() {
        let x = SpherePointFrame::basis(0);
        for v in x.tangent_basis() {
            assert!(cross7(&v, &v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn random_points_and_orbit() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let x = random_unit_point(&mut rng);
            let r = s6_check(&x, 1e-9).unwrap();
            assert!(r.passes, "{r:?}");
            let g = random_so7(&mut rng);
            let o = s6_orbit_check(&g, &x, 1e-9).unwrap();
            assert!(o.passes, "{o:?}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let x = vec![Scalar::int(1); 7];
        assert!(matches!(SpherePointFrame::new(x, 1e-9), Err(CatalogError::NotUnitVector(_))));
        let mut g = Matrix::identity(7, crate::exactnum::Backend::Rational);
        g[(0, 0)] = Scalar::int(-1);
        assert!(s6_orbit_check(&g, &SpherePointFrame::basis(0), 0.0).is_err());
    }
}
