use crate::exactnum::{Matrix, Scalar};

use super::{HomogError, HomogeneousModel, InvariantAcs, InvariantMetric, Tensor3};

/// Wang map of the Levi-Civita connection: `Λ(X_a)` as a matrix on `m`
/// (column `b` is `Λ(X_a) X_b`), together with the symmetric part `U`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionMap {
    lambda: Vec<Matrix>,
    u: Tensor3,
}

/// `Λ(X)Y = ½[X,Y]_m + U(X,Y)` with
/// `2 g(U(X,Y), Z) = g([Z,Y]_m, X) + g([Z,X]_m, Y)`.
pub fn koszul_connection(model: &HomogeneousModel) -> Result<ConnectionMap, HomogError> {
    let md = model.m_dim();
    let g = model.metric().matrix();
    let ginv = g.inverse().map_err(|_| HomogError::SingularMetric)?;
    let br = model.m_brackets();
    let b = model.backend();
    let half = b.from_ratio(1, 2);
    // gb[z][y][x] = g([X_z, X_y]_m, X_x)
    let gb = Tensor3::from_fn(md, |z, y, x| {
        let mut acc = b.zero();
        for c in 0..md {
            let s = br.get(z, y, c);
            if !s.is_zero() {
                acc += &(s * &g[(c, x)]);
            }
        }
        acc
    });
    let mut u_data = Vec::with_capacity(md * md * md);
    for a in 0..md {
        for bb in 0..md {
            let rhs: Vec<Scalar> = (0..md)
                .map(|z| gb.get(z, bb, a) + gb.get(z, a, bb))
                .collect();
            let v = ginv.mul_vec(&rhs);
            u_data.extend(v.into_iter().map(|x| &x * &half));
        }
    }
    let u = Tensor3 {
        n: md,
        data: u_data,
    };
    let lambda = (0..md)
        .map(|a| Matrix::from_fn(md, md, |c, bb| &(br.get(a, bb, c) * &half) + u.get(a, bb, c)))
        .collect();
    Ok(ConnectionMap { lambda, u })
}

impl ConnectionMap {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self, a: usize) -> &Matrix {
        &self.lambda[a]
    }

    pub fn u(&self) -> &Tensor3 {
        &self.u
    }

    /// `Λ(X) Y` for coefficient vectors.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let md = self.dim();
        let mut out = vec![y[0].zero_like(); md];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let v = self.lambda[a].mul_vec(y);
            for (o, vi) in out.iter_mut().zip(&v) {
                *o += &(xa * vi);
            }
        }
        out
    }

    /// Max residuals of metric skewness `g(Λ(X)Y,Z) + g(Λ(X)Z,Y) = 0` and of
    /// torsion-freeness `Λ(X)Y − Λ(Y)X = [X,Y]_m`, over basis vectors.
    pub fn identity_residuals(&self, model: &HomogeneousModel) -> (Scalar, Scalar) {
        let md = self.dim();
        let g = model.metric().matrix();
        let br = model.m_brackets();
        let zero = model.backend().zero();
        let mut skew = zero.clone();
        let mut torsion = zero;
        for a in 0..md {
            let gl = &self.lambda[a].transpose() * g;
            for y in 0..md {
                for z in 0..md {
                    // g(Λ(X_a)X_y, X_z) = (Λᵀ g)[y][z]
                    let r = (&gl[(y, z)] + &gl[(z, y)]).abs();
                    if r > skew {
                        skew = r;
                    }
                }
            }
            for bb in 0..md {
                for c in 0..md {
                    let r = (&(&self.lambda[a][(c, bb)] - &self.lambda[bb][(c, a)]) - br.get(a, bb, c))
                        .abs();
                    if r > torsion {
                        torsion = r;
                    }
                }
            }
        }
        (skew, torsion)
    }

    /// Max of `|U(X,Y) − U(Y,X)|` over basis pairs.
    pub fn u_symmetry_residual(&self) -> Scalar {
        let md = self.dim();
        let mut worst = self.u.get(0, 0, 0).zero_like();
        for a in 0..md {
            for b in 0..md {
                for c in 0..md {
                    let r = (self.u.get(a, b, c) - self.u.get(b, a, c)).abs();
                    if r > worst {
                        worst = r;
                    }
                }
            }
        }
        worst
    }

    /// The scalar `k` with `Λ(X)Y = k [X,Y]_m` for all `X` in block `from`
    /// and `Y` in block `to`; errors when no such single `k` exists.
    pub fn block_coefficient(
        &self,
        model: &HomogeneousModel,
        from: &str,
        to: &str,
        tol: f64,
    ) -> Result<Scalar, HomogError> {
        let split = model.split();
        let not_found = || HomogError::InvalidSplit(format!("no block labeled {from} or {to}"));
        let xs = split.block(from).ok_or_else(not_found)?;
        let ys = split.block(to).ok_or_else(not_found)?;
        let br = model.m_brackets();
        let exact = model.backend().is_exact();
        let fail = || HomogError::NotBlockScalar(from.to_string(), to.to_string());
        let mut k: Option<Scalar> = None;
        for &x in xs {
            for &y in ys {
                // find k from the first nonzero bracket component
                for c in 0..self.dim() {
                    let bc = br.get(x, y, c);
                    let lc = &self.lambda[x][(c, y)];
                    if bc.is_zero() || (!exact && bc.abs_f64() <= tol) {
                        let nonzero = if exact { !lc.is_zero() } else { lc.abs_f64() > tol };
                        if nonzero {
                            return Err(fail());
                        }
                        continue;
                    }
                    let ratio = lc / bc;
                    match &k {
                        None => k = Some(ratio),
                        Some(k0) => {
                            let same = if exact {
                                &ratio == k0
                            } else {
                                (ratio.to_f64() - k0.to_f64()).abs() <= tol
                            };
                            if !same {
                                return Err(fail());
                            }
                        }
                    }
                }
            }
        }
        k.ok_or_else(fail)
    }
}

/// `(∇_{X_a} J) X_b = Λ(X_a)(J X_b) − J(Λ(X_a) X_b)`, stored as `t[a][b][·]`.
pub fn nabla_j(conn: &ConnectionMap, j: &InvariantAcs) -> Tensor3 {
    let md = conn.dim();
    let jm = j.matrix();
    let comm: Vec<Matrix> = (0..md)
        .map(|a| (conn.lambda(a) * jm).sub(&(jm * conn.lambda(a))))
        .collect();
    Tensor3::from_fn(md, |a, b, c| comm[a][(c, b)].clone())
}

/// `∇ω(X_a, X_b, X_c) = g((∇_{X_a} J) X_b, X_c)`.
pub fn nabla_omega(nj: &Tensor3, metric: &InvariantMetric) -> Tensor3 {
    let md = nj.dim();
    let g = metric.matrix();
    let rows: Vec<Vec<Scalar>> = (0..md)
        .flat_map(|a| (0..md).map(move |b| (a, b)))
        .map(|(a, b)| g.mul_vec(nj.fiber(a, b)))
        .collect();
    Tensor3::from_fn(md, |a, b, c| rows[a * md + b][c].clone())
}
