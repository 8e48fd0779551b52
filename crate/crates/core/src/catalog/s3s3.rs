//! S³×S³: the circular coframe `deᵢ = e_{i+1}∧e_{i+2}`, `dfᵢ = f_{i+1}∧f_{i+2}`
//! (indices `e1..e3 = 0..2`, `f1..f3 = 3..5`), invariant 2-forms, their
//! reduction to diagonal form and the algebraic solution of the
//! Reyes Carrión system; plus the Ledger–Obata presentation
//! `SU(2)³/ΔSU(2)`.

use nalgebra::SymmetricEigen;

use crate::config::Tolerance;
use crate::exactnum::{so3_diagonalize, Backend, Matrix, Scalar};
use crate::forms::{CoframeDifferential, KForm};
use crate::homog::{
    classify, ClassificationReport, HomogeneousModel, InvariantAcs, InvariantMetric,
    LieAlgebraData, ReductiveSplit, Verdict,
};
use crate::stable::{j_from_rho, reyes_carrion_lambda_squared, RhoStructure, StableError};

use super::CatalogError;

pub const LABELS: [&str; 6] = ["e1", "e2", "e3", "f1", "f2", "f3"];

/// `deᵢ = e_{i+1}∧e_{i+2}` and `dfᵢ = f_{i+1}∧f_{i+2}`.
pub fn circular_coframe(backend: Backend) -> CoframeDifferential {
    let table = (0..6)
        .map(|i| {
            let (base, k) = (i / 3 * 3, i % 3);
            KForm::basis(6, &[base + (k + 1) % 3, base + (k + 2) % 3], backend)
        })
        .collect();
    CoframeDifferential::new(table).expect("circular coframe satisfies d² = 0")
}

/// su(2)⊕su(2) with `[X_{i+1}, X_{i+2}] = −X_i` on each factor, the
/// brackets dual to the circular coframe.
pub fn su2_pair(backend: Backend) -> LieAlgebraData {
    let mut entries = Vec::new();
    for base in [0, 3] {
        for i in 0..3 {
            entries.push((base + (i + 1) % 3, base + (i + 2) % 3, base + i, backend.from_i64(-1)));
        }
    }
    LieAlgebraData::from_entries(6, backend, &entries).expect("su(2)⊕su(2) is a Lie algebra")
}

/// `s = e1∧e2∧e3∧f1∧f2∧f3`.
pub fn volume(backend: Backend) -> KForm {
    KForm::volume(6, backend)
}

/// `ω = Σ aᵢ e_{i+1}∧e_{i+2} + Σ bᵢ f_{i+1}∧f_{i+2} + Σ c_{ij} eᵢ∧fⱼ`.
#[derive(Clone, Debug, PartialEq)]
pub struct S3S3TwoForm {
    a: [Scalar; 3],
    b: [Scalar; 3],
    c: Matrix,
}

impl S3S3TwoForm {
    /// Rejects degenerate forms (`ω³ = 0`).
    pub fn new(a: [Scalar; 3], b: [Scalar; 3], c: Matrix) -> Result<S3S3TwoForm, CatalogError> {
        if c.rows() != 3 || c.cols() != 3 {
            return Err(CatalogError::InvalidParams("C must be 3x3".into()));
        }
        let mut backend = c.backend();
        for x in a.iter().chain(b.iter()) {
            backend = backend.join(x.backend())?;
        }
        let conv = |v: &[Scalar; 3]| -> Result<[Scalar; 3], CatalogError> {
            Ok([v[0].to_backend(backend)?, v[1].to_backend(backend)?, v[2].to_backend(backend)?])
        };
        let w = S3S3TwoForm {
            a: conv(&a)?,
            b: conv(&b)?,
            c: c.to_backend(backend)?,
        };
        let nd = w.nondegeneracy();
        let degenerate = if backend.is_exact() {
            nd.is_zero()
        } else {
            let scale = w.c.max_abs().max(Scalar::max_abs(w.a.iter().chain(w.b.iter())));
            nd.abs_f64() <= 1e-12 * scale.powi(3).max(1e-300)
        };
        if degenerate {
            return Err(CatalogError::Degenerate);
        }
        Ok(w)
    }

    /// `Σ λᵢ eᵢ∧fᵢ`.
    pub fn diagonal(l: &[Scalar; 3]) -> Result<S3S3TwoForm, CatalogError> {
        let b = l[0].backend();
        S3S3TwoForm::new([b.zero(), b.zero(), b.zero()], [b.zero(), b.zero(), b.zero()], Matrix::diag(l))
    }

    /// `(√3/2) Σ eᵢ∧fᵢ` in `Q(√3)`.
    pub fn canonical() -> S3S3TwoForm {
        let mu = Scalar::quad((0, 1), (1, 2), 3);
        S3S3TwoForm::diagonal(&[mu.clone(), mu.clone(), mu]).expect("canonical form is non-degenerate")
    }

    pub fn a(&self) -> &[Scalar; 3] {
        &self.a
    }

    pub fn b(&self) -> &[Scalar; 3] {
        &self.b
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn backend(&self) -> Backend {
        self.c.backend()
    }

    /// `ω³ = 6 (ᵗA C B − det C) s`; this returns `ᵗA C B − det C`.
    pub fn nondegeneracy(&self) -> Scalar {
        let cb = self.c.mul_vec(&self.b);
        let acb = self.a.iter().zip(&cb).fold(self.backend().zero(), |acc, (x, y)| acc + x * y);
        acb - self.c.det()
    }

    pub fn to_kform(&self) -> KForm {
        let bk = self.backend();
        let mut terms = Vec::new();
        for i in 0..3 {
            let (p, q) = ((i + 1) % 3, (i + 2) % 3);
            terms.push((vec![p, q], self.a[i].clone()));
            terms.push((vec![3 + p, 3 + q], self.b[i].clone()));
            for j in 0..3 {
                terms.push((vec![i, 3 + j], self.c[(i, j)].clone()));
            }
        }
        KForm::from_terms(6, 2, bk, terms).expect("valid indices")
    }

    /// Read a 2-form on the circular coframe back into `(A, B, C)`.
    pub fn from_kform(w: &KForm) -> Result<S3S3TwoForm, CatalogError> {
        if w.dim() != 6 || w.degree() != 2 {
            return Err(CatalogError::InvalidParams("expected a 2-form in dimension 6".into()));
        }
        let a = [w.coeff(&[1, 2]), w.coeff(&[2, 0]), w.coeff(&[0, 1])];
        let b = [w.coeff(&[4, 5]), w.coeff(&[5, 3]), w.coeff(&[3, 4])];
        let c = Matrix::from_fn(3, 3, |i, j| w.coeff(&[i, 3 + j]));
        S3S3TwoForm::new(a, b, c)
    }
}

/// `(√3/2) Σ eᵢ∧fᵢ`.
pub fn canonical_omega() -> KForm {
    S3S3TwoForm::canonical().to_kform()
}

/// Diagonal form of a semi-Kähler 2-form: `M C Nᵀ = diag(λ)` with
/// `M, N ∈ SO(3)`, so `ω = Σ λᵢ eᵢ′∧fᵢ′` for `e′ = Me`, `f′ = Nf`.
#[derive(Clone, Debug, PartialEq)]
pub struct S3S3Reduction {
    pub lambdas: [Scalar; 3],
    pub m: Matrix,
    pub n: Matrix,
    /// `‖Mᵀ diag N − C‖∞`.
    pub residual: f64,
}

fn negligible(x: &Scalar, thr: f64) -> bool {
    if x.is_exact() {
        x.is_zero()
    } else {
        x.abs_f64() <= thr
    }
}

/// Reduce `ω` to diagonal form. Requires `ω∧dω = 0`, which forces
/// `A = B = 0` once `C` is invertible.
pub fn s3s3_reduce(w: &S3S3TwoForm, tol: &Tolerance) -> Result<S3S3Reduction, CatalogError> {
    let b = w.backend();
    let omega = w.to_kform();
    let cf = circular_coframe(b);
    let owd = omega.wedge(&omega.d(&cf)?)?;
    let thr = tol.verdict_threshold(omega.max_abs().powi(2).max(1.0));
    if !owd.terms().all(|(_, c)| negligible(c, thr)) {
        return Err(CatalogError::NotSemiKahler);
    }
    if !w.a.iter().chain(w.b.iter()).all(|x| negligible(x, thr)) {
        return Err(CatalogError::NotSemiKahler);
    }
    let d = so3_diagonalize(&w.c, tol.abs).map_err(|e| match e {
        crate::exactnum::NumError::SingularInput(_) => CatalogError::Degenerate,
        other => other.into(),
    })?;
    let l = d.diagonal_entries();
    Ok(S3S3Reduction {
        residual: d.residual(&w.c),
        lambdas: [l[0].clone(), l[1].clone(), l[2].clone()],
        m: d.m,
        n: d.n,
    })
}

/// `diag(Mᵀ, Nᵀ)`: substituting it into a form written in `(e, f)` gives the
/// same form in `(Me, Nf)`.
pub fn coframe_rotation(m: &Matrix, n: &Matrix) -> Matrix {
    let b = m.backend().join(n.backend()).expect("same backend family");
    Matrix::from_fn(6, 6, |i, j| match (i / 3, j / 3) {
        (0, 0) => m[(j, i)].to_backend(b).expect("joined"),
        (1, 1) => n[(j - 3, i - 3)].to_backend(b).expect("joined"),
        _ => b.zero(),
    })
}

/// `+1` positive definite, `−1` negative definite, `0` otherwise.
pub fn definiteness(g: &Matrix) -> i8 {
    if g.backend().is_exact() {
        if g.is_positive_definite() {
            1
        } else if g.neg().is_positive_definite() {
            -1
        } else {
            0
        }
    } else {
        let eig = SymmetricEigen::new(g.to_nalgebra()).eigenvalues;
        let thr = 1e-12 * g.max_abs().max(1e-300);
        if eig.iter().all(|&e| e > thr) {
            1
        } else if eig.iter().all(|&e| e < -thr) {
            -1
        } else {
            0
        }
    }
}

/// Everything the S³×S³ pipeline computes for one 2-form.
#[derive(Clone, Debug)]
pub struct S3S3Analysis {
    pub omega: KForm,
    pub domega: KForm,
    /// `J(dω)` with `K̂` and `c`; `None` when `dω` is not stable of
    /// negative type.
    pub structure: Option<RhoStructure>,
    /// `g = ω(J(dω)·, ·)`.
    pub metric: Option<Matrix>,
    /// Sign of definiteness of `g` (`0` indefinite).
    pub metric_sign: Option<i8>,
    /// `λ²` of the Reyes Carrión equation when `ω` solves it.
    pub rc_lambda_squared: Option<Scalar>,
    pub model: Option<HomogeneousModel>,
    pub report: Option<ClassificationReport>,
    pub verdict: Verdict,
    pub reason: String,
}

/// `ω → dω → J(dω) → g = ω(J·,·)`, then classify the left-invariant
/// structure `(g, −J(dω))` on SU(2)×SU(2), whose Kähler form is `ω`.
pub fn s3s3_analyze(omega: &KForm, tol: &Tolerance) -> Result<S3S3Analysis, CatalogError> {
    if omega.dim() != 6 || omega.degree() != 2 {
        return Err(CatalogError::InvalidParams("expected a 2-form in dimension 6".into()));
    }
    let b = omega.backend();
    let cf = circular_coframe(b);
    let domega = omega.d(&cf)?;
    let mut out = S3S3Analysis {
        omega: omega.clone(),
        domega: domega.clone(),
        structure: None,
        metric: None,
        metric_sign: None,
        rc_lambda_squared: None,
        model: None,
        report: None,
        verdict: Verdict::Neither,
        reason: String::new(),
    };
    let st = match j_from_rho(&domega, &volume(b)) {
        Ok(st) => st,
        Err(StableError::NotStable(l)) => {
            out.reason = format!("dω is not stable of negative type (λ(dω) = {l})");
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    let om = omega.to_skew_matrix()?;
    let mut g = &st.j.transpose() * &om;
    if !b.is_exact() {
        let gt = g.transpose();
        g = g.add(&gt).scale(&b.from_ratio(1, 2));
    }
    let sign = definiteness(&g);
    out.rc_lambda_squared = reyes_carrion_lambda_squared(omega, &cf, tol.abs).ok().flatten();
    out.metric_sign = Some(sign);
    out.metric = Some(g.clone());
    let jm = st.j.clone();
    out.structure = Some(st);
    if sign != 1 {
        out.reason = if sign == -1 {
            "ω(J·,·) is negative definite".into()
        } else {
            "ω(J·,·) is indefinite".into()
        };
        return Ok(out);
    }
    let lie = su2_pair(b);
    let split = ReductiveSplit::trivial(&lie);
    let metric = InvariantMetric::new(g)?;
    let acs = InvariantAcs::new(jm.neg(), &metric)?;
    let model = HomogeneousModel::new("s3s3", lie, split, metric, Some(acs))?;
    let report = classify(&model, &cf, tol)?;
    out.verdict = report.verdict;
    out.reason = "classified".into();
    out.model = Some(model);
    out.report = Some(report);
    Ok(out)
}

/// The block matrix `[[D, E], [−E, −D]]`, rows indexed by the image basis vector
/// (`J Xᵢ = Σⱼ P[i][j] Xⱼ` with `X = (X₁, X₂, X₃, Y₁, Y₂, Y₃)`), with
/// `D = diag(λᵢ² − λ_{i+1}² − λ_{i+2}²)/c` and `E = diag(−2λ_{i+1}λ_{i+2})/c`.
pub fn de_block_matrix(l: &[Scalar; 3], c: &Scalar) -> Result<Matrix, CatalogError> {
    let b = l[0].backend().join(c.backend())?;
    let inv = c.recip()?;
    let mut p = Matrix::zeros(6, 6, b);
    for i in 0..3 {
        let (x, y, z) = (&l[i], &l[(i + 1) % 3], &l[(i + 2) % 3]);
        let d = &(&(&(x * x) - &(y * y)) - &(z * z)) * &inv;
        let e = &(&(y * z) * &b.from_i64(-2)) * &inv;
        p[(i, i)] = d.clone();
        p[(i, 3 + i)] = e.clone();
        p[(3 + i, i)] = -&e;
        p[(3 + i, 3 + i)] = -&d;
    }
    Ok(p)
}

/// One branch of the factorized system: for each cyclic `i`, either
/// `xᵢ = x_{i+1}` (`true`) or `xᵢ + x_{i+1} = x_{i+2}` (`false`), `x = λ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Li2Branch {
    pub equal: [bool; 3],
    pub nullspace: Vec<Vec<Scalar>>,
    /// Some solution has all `xᵢ > 0`.
    pub positive: bool,
}

/// Definiteness data for `λ = (ε₁, ε₂, ε₃)·μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignPattern {
    pub signs: [i8; 3],
    pub det_c_sign: i8,
    /// Sign of the square coefficients of
    /// `qᵢ = (2λᵢ/c)(λ_{i+1}λ_{i+2}x² − (λᵢ² − λ_{i+1}² − λ_{i+2}²)xy + λ_{i+1}λ_{i+2}y²)`.
    pub q_square_sign: [i8; 3],
    /// `(λᵢ² − λ_{i+1}² − λ_{i+2}²)² − 4λ_{i+1}²λ_{i+2}²`, equal to `−c²`.
    pub q_discriminant: [Scalar; 3],
    /// Definiteness of `ω(J·,·)` from the full pipeline at `μ = 1`.
    pub metric_sign: i8,
    pub verdict: Verdict,
}

/// Outcome of [`solve_li2`].
#[derive(Clone, Debug, PartialEq)]
pub struct Li2Solution {
    pub branches: Vec<Li2Branch>,
    /// The only direction with all `λᵢ² > 0`: `(1, 1, 1)`.
    pub family: Vec<Scalar>,
    /// `k` on the family as a multiple of `μ⁴`.
    pub k_over_mu4: Scalar,
    pub sign_patterns: Vec<SignPattern>,
    pub description: String,
}

/// `kᵢ = xᵢ(xᵢ − x_{i+1} − x_{i+2})`, the three values `k` must take.
pub fn li2_k_values(l: &[Scalar; 3]) -> [Scalar; 3] {
    let x: Vec<Scalar> = l.iter().map(|v| v * v).collect();
    let k = |i: usize| &x[i] * &(&(&x[i] - &x[(i + 1) % 3]) - &x[(i + 2) % 3]);
    [k(0), k(1), k(2)]
}

/// `max |kᵢ − kⱼ|`: zero iff some `k` solves all three equations.
pub fn li2_residual(l: &[Scalar; 3]) -> Scalar {
    let k = li2_k_values(l);
    let mut worst = k[0].zero_like();
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let r = (&k[i] - &k[j]).abs();
        if r > worst {
            worst = r;
        }
    }
    worst
}

fn has_positive_point(basis: &[Vec<Scalar>]) -> bool {
    match basis.len() {
        0 => false,
        1 => {
            let s: Vec<i8> = basis[0].iter().map(Scalar::signum).collect();
            s.iter().all(|&x| x == 1) || s.iter().all(|&x| x == -1)
        }
        _ => {
            // small integer combinations suffice for these tiny systems
            let b = basis[0][0].backend();
            let mut idx = vec![-3i64; basis.len()];
            loop {
                let v: Vec<Scalar> = (0..basis[0].len())
                    .map(|k| {
                        basis
                            .iter()
                            .zip(&idx)
                            .fold(b.zero(), |acc, (vec, &c)| acc + &vec[k] * &b.from_i64(c))
                    })
                    .collect();
                if v.iter().all(Scalar::is_positive) {
                    return true;
                }
                let mut p = 0;
                loop {
                    if p == idx.len() {
                        return false;
                    }
                    idx[p] += 1;
                    if idx[p] <= 3 {
                        break;
                    }
                    idx[p] = -3;
                    p += 1;
                }
            }
        }
    }
}

/// Solve `k/λᵢ = λᵢ(λᵢ² − λ_{i+1}² − λ_{i+2}²)` with `k` eliminated.
///
/// With `xᵢ = λᵢ²`, `kᵢ − k_{i+1} = (xᵢ − x_{i+1})(xᵢ + x_{i+1} − x_{i+2})`,
/// so every solution lies on one of 8 linear branches.
pub fn solve_li2() -> Result<Li2Solution, CatalogError> {
    let r = Backend::Rational;
    let mut branches = Vec::new();
    let mut positive_dirs: Vec<Vec<Scalar>> = Vec::new();
    for mask in 0..8u8 {
        let equal = [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0];
        let mut rows = Vec::new();
        for i in 0..3 {
            let mut row = [0i64; 3];
            if equal[i] {
                row[i] += 1;
                row[(i + 1) % 3] -= 1;
            } else {
                row[i] += 1;
                row[(i + 1) % 3] += 1;
                row[(i + 2) % 3] -= 1;
            }
            rows.extend_from_slice(&row);
        }
        let a = Matrix::from_i64(3, 3, &rows, r);
        let nullspace = a.nullspace();
        let positive = has_positive_point(&nullspace);
        if positive {
            positive_dirs.extend(nullspace.iter().cloned());
        }
        branches.push(Li2Branch {
            equal,
            nullspace,
            positive,
        });
    }
    let family = match positive_dirs.as_slice() {
        [v] => {
            let s = v[0].recip()?;
            v.iter().map(|x| x * &s).collect::<Vec<_>>()
        }
        _ => {
            return Err(CatalogError::Solve(format!(
                "expected a single positive direction, found {}",
                positive_dirs.len()
            )))
        }
    };
    let one = [r.one(), r.one(), r.one()];
    let k = li2_k_values(&one);
    if !li2_residual(&one).is_zero() {
        return Err(CatalogError::Solve("equal moduli do not solve the system".into()));
    }
    let mut sign_patterns = Vec::new();
    let tol = Tolerance::default();
    for mask in 0..8u8 {
        let signs: [i8; 3] = [0, 1, 2].map(|i| if mask >> i & 1 == 0 { 1 } else { -1 });
        let l = signs.map(|s| r.from_i64(s as i64));
        let w = S3S3TwoForm::diagonal(&l)?;
        let an = s3s3_analyze(&w.to_kform(), &tol)?;
        let c = an
            .structure
            .as_ref()
            .map(|s| s.c.clone())
            .ok_or_else(|| CatalogError::Solve("equal moduli must give a stable dω".into()))?;
        let det_c_sign = w.c().det().signum();
        let mut q_square_sign = [0i8; 3];
        let mut q_discriminant = [r.zero(), r.zero(), r.zero()];
        for i in 0..3 {
            let (x, y, z) = (&l[i], &l[(i + 1) % 3], &l[(i + 2) % 3]);
            let lead = &(&(&(x * &(y * z)) * &r.from_i64(2)) / &c);
            q_square_sign[i] = lead.signum();
            let a = &(&(x * x) - &(y * y)) - &(z * z);
            q_discriminant[i] = &(&a * &a) - &(&(&(y * y) * &(z * z)) * &r.from_i64(4));
        }
        sign_patterns.push(SignPattern {
            signs,
            det_c_sign,
            q_square_sign,
            q_discriminant,
            metric_sign: an.metric_sign.unwrap_or(0),
            verdict: an.verdict,
        });
    }
    Ok(Li2Solution {
        branches,
        family,
        k_over_mu4: k[0].clone(),
        sign_patterns,
        description: "|λ1| = |λ2| = |λ3| ≠ 0; ω(J·,·) positive definite iff det C > 0".into(),
    })
}

/// The `λ` moduli on the solution family are equal: the analytic membership
/// test used when sweeping.
pub fn li2_predicts_nk(l: &[Scalar; 3], tol: f64) -> bool {
    let a: Vec<f64> = l.iter().map(Scalar::abs_f64).collect();
    if l.iter().any(|x| x.is_zero()) {
        return false;
    }
    let det_positive = l.iter().map(Scalar::signum).product::<i8>() > 0;
    let equal = if l.iter().all(Scalar::is_exact) {
        l[0].abs() == l[1].abs() && l[1].abs() == l[2].abs()
    } else {
        let scale = a.iter().cloned().fold(0.0, f64::max);
        (a[0] - a[1]).abs() <= tol * scale && (a[1] - a[2]).abs() <= tol * scale
    };
    equal && det_positive
}

/// `SU(2)³/ΔSU(2)` in the basis `hᵢ = (Xᵢ,Xᵢ,Xᵢ)`, `uᵢ = (Xᵢ,−Xᵢ,0)`,
/// `vᵢ = (0,Xᵢ,−Xᵢ)`, metric induced by the sum of the three standard
/// inner products, and `J = (2σ + 1)/√3` for the order-3 automorphism
/// `σ(a,b,c) = (c,a,b)`, so `σu = v`, `σv = −u − v`.
pub fn ledger_obata_model() -> Result<HomogeneousModel, CatalogError> {
    let r = Backend::Rational;
    let su2 = su2_pair(r);
    // su(2)³ bracket of coordinate vectors, factor f at 3f..3f+3
    let bracket = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![r.zero(); 9];
        for f in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let xy = &x[3 * f + i] * &y[3 * f + j];
                    if xy.is_zero() {
                        continue;
                    }
                    for k in 0..3 {
                        let c = su2.c(i, j, k);
                        if !c.is_zero() {
                            out[3 * f + k] += &(&xy * c);
                        }
                    }
                }
            }
        }
        out
    };
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    let pattern = [[1, 1, 1], [1, -1, 0], [0, 1, -1]];
    for p in pattern {
        for i in 0..3 {
            let mut v = vec![r.zero(); 9];
            for f in 0..3 {
                v[3 * f + i] = r.from_i64(p[f]);
            }
            cols.push(v);
        }
    }
    let basis = Matrix::from_fn(9, 9, |i, j| cols[j][i].clone());
    let inv = basis.inverse()?;
    let mut entries = Vec::new();
    for a in 0..9 {
        for b in a + 1..9 {
            let coords = inv.mul_vec(&bracket(&cols[a], &cols[b]));
            for (k, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((a, b, k, c));
                }
            }
        }
    }
    let q = Backend::QuadExt(3);
    let lie = LieAlgebraData::from_entries(9, r, &entries)?.to_backend(q)?;
    let split = ReductiveSplit::new(
        &lie,
        vec![0, 1, 2],
        (3..9).collect(),
        vec![("u".into(), vec![0, 1, 2]), ("v".into(), vec![3, 4, 5])],
    )?;
    let g = Matrix::from_fn(6, 6, |a, b| {
        let dot = cols[3 + a].iter().zip(&cols[3 + b]).fold(r.zero(), |acc, (x, y)| acc + x * y);
        dot.to_backend(q).expect("rational into Q(√3)")
    });
    let metric = InvariantMetric::new(g)?;
    // σ on m, column convention: σ u_i = v_i, σ v_i = −u_i − v_i
    let sigma = Matrix::from_fn(6, 6, |row, col| {
        let (i, j) = (row % 3, col % 3);
        if i != j {
            return q.zero();
        }
        match (col / 3, row / 3) {
            (0, 1) => q.one(),
            (1, 0) | (1, 1) => q.from_i64(-1),
            _ => q.zero(),
        }
    });
    let inv_sqrt3 = Scalar::quad((0, 1), (1, 3), 3);
    let j = sigma
        .scale(&q.from_i64(2))
        .add(&Matrix::identity(6, q))
        .scale(&inv_sqrt3);
    let acs = InvariantAcs::new(j, &metric)?;
    Ok(HomogeneousModel::new("s3s3-ledger-obata", lie, split, metric, Some(acs))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: Backend = Backend::Rational;

    fn q(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn circular_coframe_matches_brackets() {
        let lie = su2_pair(R);
        let model = HomogeneousModel::new(
            "t",
            lie.clone(),
            ReductiveSplit::trivial(&lie),
            InvariantMetric::new(Matrix::identity(6, R)).unwrap(),
            None,
        )
        .unwrap();
        let from_brackets = model.coframe().unwrap();
        let cf = circular_coframe(R);
        for i in 0..6 {
            assert_eq!(from_brackets.of(i), cf.of(i));
        }
        assert_eq!(cf.of(0), &KForm::basis(6, &[1, 2], R));
    }

    #[test]
    fn omega_cubed_matches_nondegeneracy() {
        let w = S3S3TwoForm::new(
            [q(1), q(2), q(-1)],
            [q(0), q(3), q(1)],
            Matrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2], R),
        )
        .unwrap();
        let om = w.to_kform();
        let cube = om.wedge(&om).unwrap().wedge(&om).unwrap();
        let top = cube.coeff(&[0, 1, 2, 3, 4, 5]);
        assert_eq!(top, &q(6) * &w.nondegeneracy());
        assert_eq!(S3S3TwoForm::from_kform(&om).unwrap(), w);
    }

    #[test]
    fn degenerate_rejected() {
        let w = S3S3TwoForm::diagonal(&[q(1), q(1), q(0)]);
        assert_eq!(w, Err(CatalogError::Degenerate));
    }

    #[test]
    fn reduce_canonical() {
        let red = s3s3_reduce(&S3S3TwoForm::canonical(), &Tolerance::default()).unwrap();
        let mu = Scalar::quad((0, 1), (1, 2), 3);
        assert_eq!(red.lambdas, [mu.clone(), mu.clone(), mu]);
        assert_eq!(red.m, Matrix::identity(3, Backend::QuadExt(3)));
        assert_eq!(red.n, Matrix::identity(3, Backend::QuadExt(3)));
    }

    #[test]
    fn surviving_a_is_not_semi_kahler() {
        let w = S3S3TwoForm::new([q(1), q(0), q(0)], [q(0), q(0), q(0)], Matrix::identity(3, R))
            .unwrap();
        assert_eq!(s3s3_reduce(&w, &Tolerance::default()), Err(CatalogError::NotSemiKahler));
    }

    #[test]
    fn semi_kahler_iff_ct_a_and_c_b_vanish() {
        // C singular in one direction lets a matching A survive ω∧dω = 0
        let c = Matrix::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 0], R);
        let cases = [
            ([0, 0, 1], [0, 0, 0], true),
            ([0, 0, 0], [0, 0, 1], true),
            ([1, 0, 0], [0, 0, 0], false),
            ([0, 0, 0], [0, 1, 0], false),
        ];
        for (a, b, expect) in cases {
            let om = S3S3TwoForm {
                a: a.map(q),
                b: b.map(q),
                c: c.clone(),
            }
            .to_kform();
            let owd = om.wedge(&om.d(&circular_coframe(R)).unwrap()).unwrap();
            let ca = c.transpose().mul_vec(&a.map(q));
            let cb = c.mul_vec(&b.map(q));
            let algebraic = ca.iter().chain(cb.iter()).all(Scalar::is_zero);
            assert_eq!(owd.is_zero(), expect);
            assert_eq!(algebraic, expect);
        }
    }

    #[test]
    fn rotated_c_recovers_diagonal() {
        let rot = Matrix::from_i64(3, 3, &[0, -1, 0, 1, 0, 0, 0, 0, 1], R);
        let c = &rot * &Matrix::diag(&[q(1), q(2), q(3)]);
        let w = S3S3TwoForm::new([q(0), q(0), q(0)], [q(0), q(0), q(0)], c.clone()).unwrap();
        let red = s3s3_reduce(&w, &Tolerance::default()).unwrap();
        let mut mods: Vec<i64> = red.lambdas.iter().map(|x| x.abs_f64().round() as i64).collect();
        mods.sort();
        assert_eq!(mods, vec![1, 2, 3]);
        assert!(red.residual <= 1e-12);
        let prod: f64 = red.lambdas.iter().map(Scalar::to_f64).product();
        assert!((prod - c.det().to_f64()).abs() < 1e-9);
    }

    #[test]
    fn canonical_is_strict_nk_with_rc() {
        let an = s3s3_analyze(&canonical_omega(), &Tolerance::default()).unwrap();
        assert_eq!(an.verdict, Verdict::StrictNK);
        assert_eq!(an.rc_lambda_squared, Some(Scalar::ratio(1, 9)));
        let st = an.structure.unwrap();
        assert_eq!(st.lambda, Scalar::ratio(-27, 16));
        assert_eq!(st.c, Scalar::quad((0, 1), (3, 4), 3));
        let report = an.report.unwrap();
        assert_eq!(report.type_constant, Some(Scalar::ratio(1, 9)));
        assert!(report.domega_type_30 && report.omega_wedge_domega_zero);
    }

    #[test]
    fn j_is_transpose_of_de_blocks() {
        let mu = Scalar::quad((0, 1), (1, 2), 3);
        let l = [mu.clone(), mu.clone(), mu];
        let an = s3s3_analyze(&canonical_omega(), &Tolerance::default()).unwrap();
        let st = an.structure.unwrap();
        let p = de_block_matrix(&l, &st.c).unwrap();
        assert_eq!(st.j, p.transpose());
    }

    #[test]
    fn k_column_matches_closed_form() {
        let l = [q(1), q(2), q(3)];
        let om = S3S3TwoForm::diagonal(&l).unwrap().to_kform();
        let dw = om.d(&circular_coframe(R)).unwrap();
        let k = crate::stable::k_map(&dw, &volume(R)).unwrap();
        // K̂X₁ = (λ₁² − λ₂² − λ₃²)X₁ − 2λ₂λ₃Y₁
        let col = k.matrix().col(0);
        assert_eq!(col, vec![q(-12), q(0), q(0), q(-12), q(0), q(0)]);
    }

    #[test]
    fn unequal_moduli_fail() {
        let tol = Tolerance::default();
        for l in [[2, 2, 4], [2, 2, 3]] {
            let l = l.map(|x| Scalar::ratio(x, 2));
            let an = s3s3_analyze(&S3S3TwoForm::diagonal(&l).unwrap().to_kform(), &tol).unwrap();
            assert_ne!(an.verdict, Verdict::StrictNK);
            assert_eq!(an.rc_lambda_squared, None);
        }
        let an = s3s3_analyze(
            &S3S3TwoForm::diagonal(&[q(1), q(1), q(2)]).unwrap().to_kform(),
            &tol,
        )
        .unwrap();
        assert!(an.structure.is_none());
    }

    #[test]
    fn negative_det_gives_negative_metric() {
        let an = s3s3_analyze(
            &S3S3TwoForm::diagonal(&[q(1), q(1), q(-1)]).unwrap().to_kform(),
            &Tolerance::default(),
        )
        .unwrap();
        assert_eq!(an.metric_sign, Some(-1));
        assert_eq!(an.verdict, Verdict::Neither);
    }

    #[test]
    fn li2_solution_set() {
        let sol = solve_li2().unwrap();
        assert_eq!(sol.family, vec![q(1), q(1), q(1)]);
        assert_eq!(sol.k_over_mu4, q(-1));
        assert_eq!(sol.branches.iter().filter(|b| b.positive).count(), 1);
        for sp in &sol.sign_patterns {
            assert_eq!(sp.metric_sign, sp.det_c_sign);
            assert_eq!(sp.q_square_sign, [sp.det_c_sign; 3]);
            for d in &sp.q_discriminant {
                assert_eq!(d, &q(-3));
            }
            let expect = if sp.det_c_sign > 0 { Verdict::StrictNK } else { Verdict::Neither };
            assert_eq!(sp.verdict, expect);
        }
        assert!(!li2_residual(&[q(1), q(1), q(2)]).is_zero());
    }

    #[test]
    fn ledger_obata_is_naturally_reductive_nk() {
        let lo = ledger_obata_model().unwrap();
        let conn = crate::homog::koszul_connection(&lo).unwrap();
        assert!(conn.u().is_zero());
        let report = classify(&lo, &lo.coframe().unwrap(), &Tolerance::default()).unwrap();
        assert_eq!(report.verdict, Verdict::StrictNK);
        assert!(report.naturally_reductive);
        assert!(report.three_symmetric_canonical);
        assert!(report.type_constant.is_some());
    }
}
