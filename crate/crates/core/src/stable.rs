//! Stable 3-forms in dimension 6 and the 3-form on the 7-dimensional cone.
//!
//! For a 3-form `ρ` and a volume form `s`, `K̂` is the endomorphism with
//! `(ι(v)ρ ∧ ρ) ∧ θʷ = (K̂v)ʷ · s`, i.e. a 5-form is turned into a vector by
//! wedging with the coframe. Then `K̂² = λ(ρ)·Id` with
//! `λ(ρ) = tr(K̂²)/6`, and when `λ(ρ) < 0` the form determines
//! `J = K̂ / c`, `c = √(−λ(ρ))`.

use thiserror::Error;

use crate::exactnum::{Backend, Matrix, NumError, Scalar};
use crate::forms::{CoframeDifferential, FormError, KForm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StableError {
    #[error("expected a form of degree {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("volume form is zero or not of top degree")]
    ZeroVolume,
    #[error("3-form is not stable of negative type (lambda = {0})")]
    NotStable(String),
    #[error("3-form is not of type (3,0)+(0,3) for J (mismatch {0:e})")]
    WrongType(f64),
    #[error("2-form is degenerate (ω∧ω∧ω = 0)")]
    Degenerate,
    #[error("the nearly-Kähler constant must be nonzero")]
    ZeroLambda,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// `K̂` together with the volume form it was computed against.
#[derive(Clone, Debug, PartialEq)]
pub struct KMap {
    k: Matrix,
    volume: KForm,
}

impl KMap {
    pub fn matrix(&self) -> &Matrix {
        &self.k
    }

    pub fn volume(&self) -> &KForm {
        &self.volume
    }

    /// `λ(ρ) = tr(K̂²)/6`.
    pub fn lambda(&self) -> Scalar {
        let n = self.k.rows() as i64;
        (&self.k * &self.k).trace() / self.k.backend().from_i64(n)
    }
}

fn top_coefficient(s: &KForm) -> Result<Scalar, StableError> {
    if s.degree() != s.dim() {
        return Err(StableError::ZeroVolume);
    }
    let idx: Vec<usize> = (0..s.dim()).collect();
    let c = s.coeff(&idx);
    if c.is_zero() {
        return Err(StableError::ZeroVolume);
    }
    Ok(c)
}

/// `K̂` of a 3-form relative to the volume form `s`.
pub fn k_map(rho: &KForm, s: &KForm) -> Result<KMap, StableError> {
    if rho.degree() != 3 {
        return Err(StableError::WrongDegree {
            expected: 3,
            got: rho.degree(),
        });
    }
    if s.dim() != rho.dim() {
        return Err(FormError::DimMismatch(rho.dim(), s.dim()).into());
    }
    let n = rho.dim();
    let sc = top_coefficient(s)?;
    let b = rho.backend().join(sc.backend())?;
    let mut k = Matrix::zeros(n, n, b);
    for v in 0..n {
        let five = rho.interior_basis(v)?.wedge(rho)?;
        for w in 0..n {
            let top = five.wedge(&KForm::basis(n, &[w], b))?;
            let c = top.coeff(&(0..n).collect::<Vec<_>>());
            k[(w, v)] = &c / &sc;
        }
    }
    Ok(KMap {
        k,
        volume: s.clone(),
    })
}

/// `J = K̂/c` and the data it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoStructure {
    pub kmap: KMap,
    pub lambda: Scalar,
    /// `c = √(−λ(ρ))`.
    pub c: Scalar,
    pub j: Matrix,
}

/// Reconstruct `J` from a stable 3-form of negative type.
pub fn j_from_rho(rho: &KForm, s: &KForm) -> Result<RhoStructure, StableError> {
    let kmap = k_map(rho, s)?;
    let lambda = kmap.lambda();
    let degenerate = if lambda.is_exact() {
        !lambda.is_negative()
    } else {
        lambda.to_f64() >= -1e-12 * kmap.k.max_abs().powi(2).max(1e-300)
    };
    if degenerate {
        return Err(StableError::NotStable(lambda.to_string()));
    }
    let c = (-&lambda).sqrt()?;
    let j = kmap.k.scale(&c.recip()?);
    Ok(RhoStructure { kmap, lambda, c, j })
}

/// Closed form of `c²` for `ρ = dω`, `ω = Σ λᵢ eᵢ∧fᵢ` on the circular
/// coframe, read off the `(X₁, Y₁)` block of `K̂`:
/// `c² = 4λ₂²λ₃² − (λ₁² − λ₂² − λ₃²)²`.
pub fn diagonal_c_squared(l: &[Scalar; 3]) -> Scalar {
    let sq: Vec<Scalar> = l.iter().map(|x| x * x).collect();
    let a = &(&sq[0] - &sq[1]) - &sq[2];
    let four = l[0].backend().from_i64(4);
    &(&four * &(&sq[1] * &sq[2])) - &(&a * &a)
}

fn unit_vectors(n: usize, b: Backend) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|k| if i == k { b.one() } else { b.zero() }).collect())
        .collect()
}

/// `ρ̂(X,Y,Z) = ρ(JX,Y,Z)`, checked against `−ρ(JX,JY,JZ)`.
pub fn hat(rho: &KForm, j: &Matrix, tol: f64) -> Result<KForm, StableError> {
    if rho.degree() != 3 {
        return Err(StableError::WrongDegree {
            expected: 3,
            got: rho.degree(),
        });
    }
    let n = rho.dim();
    let b = rho.backend().join(j.backend())?;
    let e = unit_vectors(n, b);
    let je: Vec<Vec<Scalar>> = (0..n).map(|i| j.col(i)).collect();
    let mut first = Vec::new();
    let mut worst = 0.0f64;
    let mut exact_mismatch = false;
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let a = rho.eval(&[je[x].clone(), e[y].clone(), e[z].clone()])?;
                let c = -rho.eval(&[je[x].clone(), je[y].clone(), je[z].clone()])?;
                let diff = &a - &c;
                worst = worst.max(diff.abs_f64());
                exact_mismatch |= diff.is_exact() && !diff.is_zero();
                first.push((vec![x, y, z], a));
            }
        }
    }
    if exact_mismatch || worst > tol {
        return Err(StableError::WrongType(worst));
    }
    Ok(KForm::from_terms(n, 3, b, first)?)
}

/// `ι(v − iJv)(ρ + iρ̂) = 0` for every basis vector `v`, split into real and
/// imaginary parts; returns the largest coefficient seen.
pub fn type_30_residual(rho: &KForm, rho_hat: &KForm, j: &Matrix) -> Result<Scalar, StableError> {
    let n = rho.dim();
    let b = rho.backend().join(rho_hat.backend())?.join(j.backend())?;
    let mut worst = b.zero();
    for (v, ev) in unit_vectors(n, b).into_iter().enumerate() {
        let jv = j.col(v);
        // real: ι(v)ρ + ι(Jv)ρ̂ ; imaginary: ι(v)ρ̂ − ι(Jv)ρ
        let re = rho.interior(&ev)?.try_add(&rho_hat.interior(&jv)?)?;
        let im = rho_hat.interior(&ev)?.try_sub(&rho.interior(&jv)?)?;
        for (_, c) in re.terms().chain(im.terms()) {
            let a = c.abs();
            if a > worst {
                worst = a;
            }
        }
    }
    Ok(worst)
}

/// `−2λ ω∧ω = dρ̂` with `dω = 3λρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReyesCarrionProblem {
    omega: KForm,
    lambda: Scalar,
    coframe: CoframeDifferential,
}

/// Outcome of [`check_reyes_carrion`].
#[derive(Clone, Debug, PartialEq)]
pub struct RcOutcome {
    pub holds: bool,
    /// Max-abs coefficient of `dρ̂ + 2λ ω∧ω`.
    pub residual: Scalar,
    pub structure: RhoStructure,
    pub rho: KForm,
    pub rho_hat: KForm,
}

impl ReyesCarrionProblem {
    pub fn new(
        omega: KForm,
        lambda: Scalar,
        coframe: CoframeDifferential,
    ) -> Result<ReyesCarrionProblem, StableError> {
        if omega.degree() != 2 {
            return Err(StableError::WrongDegree {
                expected: 2,
                got: omega.degree(),
            });
        }
        if omega.dim() != coframe.dim() {
            return Err(FormError::DimMismatch(omega.dim(), coframe.dim()).into());
        }
        if lambda.is_zero() {
            return Err(StableError::ZeroLambda);
        }
        let cube = omega.wedge(&omega)?.wedge(&omega)?;
        let degenerate = if omega.backend().is_exact() {
            cube.is_zero()
        } else {
            cube.max_abs() <= 1e-12 * omega.max_abs().powi(3)
        };
        if degenerate {
            return Err(StableError::Degenerate);
        }
        Ok(ReyesCarrionProblem {
            omega,
            lambda,
            coframe,
        })
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn coframe(&self) -> &CoframeDifferential {
        &self.coframe
    }
}

/// Run `ρ = dω/(3λ)`, `J(ρ)`, `ρ̂`, `dρ̂` and test `dρ̂ + 2λ ω∧ω = 0`.
///
/// `tol` is only used by float inputs.
pub fn check_reyes_carrion(p: &ReyesCarrionProblem, tol: f64) -> Result<RcOutcome, StableError> {
    let n = p.omega.dim();
    let domega = p.omega.d(&p.coframe)?;
    let three_lambda = &p.lambda * &p.lambda.backend().from_i64(3);
    let rho = domega.scale(&three_lambda.recip()?);
    let vol = KForm::volume(n, rho.backend());
    let structure = j_from_rho(&rho, &vol)?;
    let rho_hat = hat(&rho, &structure.j, tol)?;
    let lhs = rho_hat.d(&p.coframe)?;
    let two_lambda = &p.lambda * &p.lambda.backend().from_i64(2);
    let ww = p.omega.wedge(&p.omega)?.scale(&two_lambda);
    let res = lhs.try_add(&ww.to_backend(lhs.backend().join(ww.backend())?)?)?;
    let mut residual = res.backend().zero();
    for (_, c) in res.terms() {
        let a = c.abs();
        if a > residual {
            residual = a;
        }
    }
    let holds = if residual.is_exact() {
        residual.is_zero()
    } else {
        residual.to_f64() <= tol
    };
    Ok(RcOutcome {
        holds,
        residual,
        structure,
        rho,
        rho_hat,
    })
}

/// The `λ²` for which `ω` solves the Reyes Carrión system, if any:
/// `d((dω)^) = −6λ² ω∧ω` with `(dω)^` built from `J(dω)`.
///
/// Returns `Ok(None)` when `d((dω)^)` is not a multiple of `ω∧ω`.
pub fn reyes_carrion_lambda_squared(
    omega: &KForm,
    coframe: &CoframeDifferential,
    tol: f64,
) -> Result<Option<Scalar>, StableError> {
    let n = omega.dim();
    let domega = omega.d(coframe)?;
    let vol = KForm::volume(n, domega.backend());
    let st = j_from_rho(&domega, &vol)?;
    let h = hat(&domega, &st.j, tol)?;
    let dh = h.d(coframe)?;
    let ww = omega.wedge(omega)?;
    let exact = dh.backend().is_exact();
    let scale = ww.max_abs().max(dh.max_abs());
    let mut ratio: Option<Scalar> = None;
    for (key, w) in ww.terms() {
        let r = &dh.coeff(key) / w;
        match &ratio {
            None => ratio = Some(r),
            Some(r0) => {
                let same = if exact {
                    &r == r0
                } else {
                    (r.to_f64() - r0.to_f64()).abs() <= tol * scale.max(1.0)
                };
                if !same {
                    return Ok(None);
                }
            }
        }
    }
    // components of dρ̂ outside the support of ω∧ω must vanish
    for (key, c) in dh.terms() {
        let w = ww.coeff(key);
        let outside = if exact { w.is_zero() } else { w.abs_f64() <= tol };
        if outside && (if exact { !c.is_zero() } else { c.abs_f64() > tol }) {
            return Ok(None);
        }
    }
    let Some(r) = ratio else { return Ok(None) };
    let six = r.backend().from_i64(-6);
    Ok(Some(&r / &six))
}

/// `φ = dt∧ω + dω` on the coframe `(dt, θ⁰, …, θ⁵)`.
pub fn cone_3form(omega: &KForm, domega: &KForm) -> Result<KForm, StableError> {
    if omega.degree() != 2 {
        return Err(StableError::WrongDegree {
            expected: 2,
            got: omega.degree(),
        });
    }
    if domega.degree() != 3 {
        return Err(StableError::WrongDegree {
            expected: 3,
            got: domega.degree(),
        });
    }
    let n = omega.dim() + 1;
    let b = omega.backend().join(domega.backend())?;
    let lift = |f: &KForm| -> Result<KForm, StableError> {
        let terms = f
            .terms()
            .map(|(k, c)| (k.iter().map(|i| i + 1).collect::<Vec<_>>(), c.clone()));
        Ok(KForm::from_terms(n, f.degree(), b, terms)?)
    };
    let dt = KForm::basis(n, &[0], b);
    Ok(dt.wedge(&lift(omega)?)?.try_add(&lift(domega)?)?)
}

/// `b_φ(u,v)·vol = ι(u)φ ∧ ι(v)φ ∧ φ` with `vol = θ⁰∧…∧θ⁶`.
pub fn g2_bilinear(phi: &KForm) -> Result<Matrix, StableError> {
    if phi.degree() != 3 {
        return Err(StableError::WrongDegree {
            expected: 3,
            got: phi.degree(),
        });
    }
    let n = phi.dim();
    let top: Vec<usize> = (0..n).collect();
    let contractions: Vec<KForm> = (0..n)
        .map(|u| phi.interior_basis(u))
        .collect::<Result<_, _>>()?;
    let mut b = Matrix::zeros(n, n, phi.backend());
    for u in 0..n {
        for v in u..n {
            let f = contractions[u].wedge(&contractions[v])?.wedge(phi)?;
            let c = f.coeff(&top);
            b[(u, v)] = c.clone();
            b[(v, u)] = c;
        }
    }
    Ok(b)
}

/// Result of [`g2_generic`].
#[derive(Clone, Debug, PartialEq)]
pub struct G2Genericity {
    pub generic: bool,
    /// `+1` or `−1` for a definite `b_φ`, `0` otherwise.
    pub sign: i8,
    pub bilinear: Matrix,
}

/// Definiteness of `b_φ`: exact leading-minor signs, or float eigenvalue
/// signs with a `1e−9` relative threshold.
pub fn g2_generic(phi: &KForm) -> Result<G2Genericity, StableError> {
    if phi.dim() != 7 {
        return Err(FormError::DimMismatch(7, phi.dim()).into());
    }
    let b = g2_bilinear(phi)?;
    let sign = if b.backend().is_exact() {
        let minors = b.leading_minors();
        if minors.iter().all(Scalar::is_positive) {
            1
        } else if minors
            .iter()
            .enumerate()
            .all(|(k, m)| if k % 2 == 0 { m.is_negative() } else { m.is_positive() })
        {
            -1
        } else {
            0
        }
    } else {
        let eig = nalgebra::SymmetricEigen::new(b.to_nalgebra()).eigenvalues;
        let scale = eig.amax();
        let thr = 1e-9 * scale;
        if scale > 0.0 && eig.iter().all(|&x| x > thr) {
            1
        } else if scale > 0.0 && eig.iter().all(|&x| x < -thr) {
            -1
        } else {
            0
        }
    };
    Ok(G2Genericity {
        generic: sign != 0,
        sign,
        bilinear: b,
    })
}

/// The G₂ 3-form `φ(x,y,z) = ⟨x, yz⟩` on `Im 𝕆 = ℝ⁷`.
pub fn octonion_phi(backend: Backend) -> KForm {
    let terms = crate::exactnum::g2_phi_coefficients(backend)
        .into_iter()
        .map(|(k, c)| (k.to_vec(), c));
    KForm::from_terms(7, 3, backend, terms).expect("valid 3-form")
}
