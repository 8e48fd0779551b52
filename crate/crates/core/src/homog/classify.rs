use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerance;
use crate::exactnum::Scalar;
use crate::forms::{CoframeDifferential, KForm};

use super::connection::{koszul_connection, nabla_j, nabla_omega, ConnectionMap};
use super::{HomogError, HomogeneousModel, InvariantAcs, Tensor3};

/// Gray–Hervella verdict for an invariant almost-Hermitian structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// `∇ω = 0`.
    Kahler,
    /// `∇ω ≠ 0` and totally antisymmetric.
    StrictNK,
    /// `J` integrable but not Kähler.
    HermitianOther,
    Neither,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Kahler => "Kahler",
            Verdict::StrictNK => "StrictNK",
            Verdict::HermitianOther => "HermitianOther",
            Verdict::Neither => "Neither",
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        match s {
            "Kahler" => Some(Verdict::Kahler),
            "StrictNK" => Some(Verdict::StrictNK),
            "HermitianOther" => Some(Verdict::HermitianOther),
            "Neither" => Some(Verdict::Neither),
            _ => None,
        }
    }

    /// Kähler or strictly nearly Kähler.
    pub fn is_nk_class(self) -> bool {
        matches!(self, Verdict::Kahler | Verdict::StrictNK)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Max-abs sizes of the tensors behind a verdict.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Norms {
    pub nabla_omega: f64,
    /// `½ |∇ω(X,Y,Z) − ∇ω(Y,X,Z)|`.
    pub antisym_part: f64,
    /// `|∇ω(X,Y,Z) + ∇ω(Y,X,Z)|`.
    pub sym_residual: f64,
    pub nijenhuis: f64,
    /// `(2,1)+(1,2)` part of `dω`.
    pub dw34: f64,
    /// Metric skewness and torsion residuals of the connection.
    pub connection_skew: f64,
    pub connection_torsion: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub norms: Norms,
    pub type_constant: Option<Scalar>,
    pub naturally_reductive: bool,
    pub three_symmetric_canonical: bool,
    /// `dω` equals its `(3,0)+(0,3)` projection.
    pub domega_type_30: bool,
    pub omega_wedge_domega_zero: bool,
}

fn negligible(x: &Scalar, thr: f64) -> bool {
    if x.is_exact() {
        x.is_zero()
    } else {
        x.abs_f64() <= thr
    }
}

fn all_negligible<'a>(it: impl IntoIterator<Item = &'a Scalar>, thr: f64) -> bool {
    it.into_iter().all(|x| negligible(x, thr))
}

fn require_acs(model: &HomogeneousModel) -> Result<&InvariantAcs, HomogError> {
    model
        .acs()
        .ok_or_else(|| HomogError::InconsistentInputs("model has no almost complex structure".into()))
}

/// Classify `(g, J)` on `model`; `coframe` drives the independent `dω`
/// checks through the forms module.
pub fn classify(
    model: &HomogeneousModel,
    coframe: &CoframeDifferential,
    tol: &Tolerance,
) -> Result<ClassificationReport, HomogError> {
    let j = require_acs(model)?;
    let md = model.m_dim();
    if coframe.dim() != md {
        return Err(HomogError::InconsistentInputs(format!(
            "coframe has {} elements, m has dimension {md}",
            coframe.dim()
        )));
    }
    let thr = tol.verdict_threshold(model.input_scale());
    let conn = koszul_connection(model)?;
    let (skew, torsion) = conn.identity_residuals(model);
    let nj = nabla_j(&conn, j);
    let t = nabla_omega(&nj, model.metric());

    let mut sym = 0.0f64;
    let mut anti = 0.0f64;
    let mut sym_zero = true;
    for a in 0..md {
        for b in 0..md {
            for c in 0..md {
                let s = t.get(a, b, c) + t.get(b, a, c);
                let d = t.get(a, b, c) - t.get(b, a, c);
                sym = sym.max(s.abs_f64());
                anti = anti.max(d.abs_f64() / 2.0);
                sym_zero &= negligible(&s, thr);
            }
        }
    }
    let kahler = all_negligible(t.entries(), thr);
    let n = nijenhuis(model)?;
    let integrable = all_negligible(n.entries(), thr);

    let omega = model.kahler_form()?;
    let domega = omega.d(coframe)?;
    let (_, rest) = type_split_3form(&domega, j)?;
    let domega_type_30 = all_negligible(rest.terms().map(|(_, c)| c), thr);
    let owd = omega.wedge(&domega)?;
    let omega_wedge_domega_zero = all_negligible(owd.terms().map(|(_, c)| c), thr);

    let verdict = if kahler {
        Verdict::Kahler
    } else if sym_zero {
        Verdict::StrictNK
    } else if integrable {
        Verdict::HermitianOther
    } else {
        Verdict::Neither
    };
    let type_constant = if verdict == Verdict::StrictNK {
        type_constant_with_seed(model, &conn, tol, 0).ok()
    } else {
        None
    };
    Ok(ClassificationReport {
        verdict,
        norms: Norms {
            nabla_omega: t.max_abs(),
            antisym_part: anti,
            sym_residual: sym,
            nijenhuis: n.max_abs(),
            dw34: rest.max_abs(),
            connection_skew: skew.to_f64(),
            connection_torsion: torsion.to_f64(),
        },
        type_constant,
        naturally_reductive: naturally_reductive_test(model, tol),
        three_symmetric_canonical: canonical_3symmetric_check(model, tol)?,
        domega_type_30,
        omega_wedge_domega_zero,
    })
}

/// `([X,Y]_m | Z) = (X | [Y,Z]_m)` on all basis triples.
pub fn naturally_reductive_test(model: &HomogeneousModel, tol: &Tolerance) -> bool {
    let md = model.m_dim();
    let thr = tol.verdict_threshold(model.input_scale());
    let basis = |i: usize| unit(md, i, model);
    let g = model.metric();
    for a in 0..md {
        for b in 0..md {
            let xy = model.m_bracket(&basis(a), &basis(b));
            for c in 0..md {
                let yz = model.m_bracket(&basis(b), &basis(c));
                let lhs = g.inner(&xy, &basis(c));
                let rhs = g.inner(&basis(a), &yz);
                if !negligible(&(lhs - rhs), thr) {
                    return false;
                }
            }
        }
    }
    true
}

/// `[X, JY]_m = −J [X, Y]_m` on all basis pairs.
pub fn canonical_3symmetric_check(
    model: &HomogeneousModel,
    tol: &Tolerance,
) -> Result<bool, HomogError> {
    let j = require_acs(model)?;
    let md = model.m_dim();
    let thr = tol.verdict_threshold(model.input_scale());
    for a in 0..md {
        for b in 0..md {
            let x = unit(md, a, model);
            let y = unit(md, b, model);
            let lhs = model.m_bracket(&x, &j.apply(&y));
            let rhs = j.apply(&model.m_bracket(&x, &y));
            if !lhs.iter().zip(&rhs).all(|(l, r)| negligible(&(l + r), thr)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `N(X,Y) = [JX,JY]_m − J[JX,Y]_m − J[X,JY]_m − [X,Y]_m`, stored as `t[a][b][·]`.
pub fn nijenhuis(model: &HomogeneousModel) -> Result<Tensor3, HomogError> {
    let j = require_acs(model)?;
    let md = model.m_dim();
    let mut vecs = Vec::with_capacity(md * md);
    for a in 0..md {
        for b in 0..md {
            let x = unit(md, a, model);
            let y = unit(md, b, model);
            let (jx, jy) = (j.apply(&x), j.apply(&y));
            let t1 = model.m_bracket(&jx, &jy);
            let t2 = j.apply(&model.m_bracket(&jx, &y));
            let t3 = j.apply(&model.m_bracket(&x, &jy));
            let t4 = model.m_bracket(&x, &y);
            vecs.push(
                (0..md)
                    .map(|k| &(&(&t1[k] - &t2[k]) - &t3[k]) - &t4[k])
                    .collect::<Vec<_>>(),
            );
        }
    }
    Ok(Tensor3::from_fn(md, |a, b, c| vecs[a * md + b][c].clone()))
}

/// Max-abs coefficient of the `(2,1)+(1,2)` part of `dω`.
pub fn dw34_diagnostic(
    omega: &KForm,
    coframe: &CoframeDifferential,
    j: &InvariantAcs,
) -> Result<Scalar, HomogError> {
    let domega = omega.d(coframe)?;
    let (_, rest) = type_split_3form(&domega, j)?;
    let mut worst = domega.backend().zero();
    for (_, c) in rest.terms() {
        let a = c.abs();
        if a > worst {
            worst = a;
        }
    }
    Ok(worst)
}

/// Split a real 3-form into its `(3,0)+(0,3)` and `(2,1)+(1,2)` parts:
/// `Pψ = ¼(ψ − ψ(X,JY,JZ) − ψ(JX,Y,JZ) − ψ(JX,JY,Z))`.
pub fn type_split_3form(psi: &KForm, j: &InvariantAcs) -> Result<(KForm, KForm), HomogError> {
    let n = psi.dim();
    if psi.degree() != 3 {
        return Err(HomogError::InconsistentInputs(format!(
            "expected a 3-form, got degree {}",
            psi.degree()
        )));
    }
    let b = psi.backend().join(j.matrix().backend())?;
    let e: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|k| if i == k { b.one() } else { b.zero() }).collect())
        .collect();
    let je: Vec<Vec<Scalar>> = (0..n).map(|i| j.matrix().col(i)).collect();
    let quarter = b.from_ratio(1, 4);
    let mut terms = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let v0 = psi.eval(&[e[x].clone(), e[y].clone(), e[z].clone()])?;
                let v1 = psi.eval(&[e[x].clone(), je[y].clone(), je[z].clone()])?;
                let v2 = psi.eval(&[je[x].clone(), e[y].clone(), je[z].clone()])?;
                let v3 = psi.eval(&[je[x].clone(), je[y].clone(), e[z].clone()])?;
                let p = &(&(&(&v0 - &v1) - &v2) - &v3) * &quarter;
                terms.push((vec![x, y, z], p));
            }
        }
    }
    let p = KForm::from_terms(n, 3, b, terms)?;
    let rest = psi.to_backend(b)?.try_sub(&p)?;
    Ok((p, rest))
}

fn unit(md: usize, i: usize, model: &HomogeneousModel) -> Vec<Scalar> {
    let b = model.backend();
    (0..md).map(|k| if k == i { b.one() } else { b.zero() }).collect()
}

/// Type constant with the default seed 0.
pub fn type_constant(
    model: &HomogeneousModel,
    conn: &ConnectionMap,
    tol: &Tolerance,
) -> Result<Scalar, HomogError> {
    type_constant_with_seed(model, conn, tol, 0)
}

/// `α` with `‖(∇_X J)Y‖² = α(‖X‖²‖Y‖² − g(X,Y)² − g(JX,Y)²)`, checked on
/// all basis pairs and on seeded random integer combinations.
pub fn type_constant_with_seed(
    model: &HomogeneousModel,
    conn: &ConnectionMap,
    tol: &Tolerance,
    seed: u64,
) -> Result<Scalar, HomogError> {
    let j = require_acs(model)?;
    let md = model.m_dim();
    let thr = tol.verdict_threshold(model.input_scale());
    let nj = nabla_j(conn, j);
    let t = nabla_omega(&nj, model.metric());
    let strict = !all_negligible(t.entries(), thr)
        && (0..md).all(|a| {
            (0..md).all(|b| (0..md).all(|c| negligible(&(t.get(a, b, c) + t.get(b, a, c)), thr)))
        });
    if !strict {
        return Err(HomogError::NotStrictNK);
    }
    let b = model.backend();
    let g = model.metric();
    let mut pairs: Vec<(Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    for a in 0..md {
        for c in 0..md {
            pairs.push((unit(md, a, model), unit(md, c, model)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let mut draw = || -> Vec<Scalar> { (0..md).map(|_| b.from_i64(rng.gen_range(-3..=3))).collect() };
        pairs.push((draw(), draw()));
    }
    let mut alpha: Option<Scalar> = None;
    for (x, y) in &pairs {
        let mut nxy = vec![b.zero(); md];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (c, yc) in y.iter().enumerate() {
                if yc.is_zero() {
                    continue;
                }
                let w = xa * yc;
                for (k, v) in nxy.iter_mut().enumerate() {
                    *v += &(&w * &nj.fiber(a, c)[k]);
                }
            }
        }
        let lhs = g.inner(&nxy, &nxy);
        let gxy = g.inner(x, y);
        let gjxy = g.inner(&j.apply(x), y);
        let rhs = &(&(&g.inner(x, x) * &g.inner(y, y)) - &(&gxy * &gxy)) - &(&gjxy * &gjxy);
        let label = || format!("{x:?}, {y:?}");
        if negligible(&rhs, thr) {
            if !negligible(&lhs, thr) {
                return Err(HomogError::NotConstant(label()));
            }
            continue;
        }
        let ratio = &lhs / &rhs;
        match &alpha {
            None => alpha = Some(ratio),
            Some(a0) => {
                let same = if b.is_exact() {
                    &ratio == a0
                } else {
                    (ratio.to_f64() - a0.to_f64()).abs() <= tol.rel * a0.abs_f64().max(1.0)
                };
                if !same {
                    return Err(HomogError::NotConstant(label()));
                }
            }
        }
    }
    alpha.ok_or(HomogError::NotStrictNK)
}
