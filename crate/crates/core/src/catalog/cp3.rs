//! `ℂP³ = Sp(2)/(U(1)×Sp(1))` with the one-parameter family `g_t`:
//! `Re(ab*)` on `m` and `t/2·Re(ab*)` on `n`.
//!
//! `J` on `m` is left multiplication by `i` on the quaternion `a`, which
//! commutes with the right `Sp(1)` action; on `n` it is a rotation whose
//! sign `en` is the free choice: `en = +1` is integrable, `en = −1` is
//! the sign carrying the nearly-Kähler point.

use num_rational::BigRational;

use crate::config::Tolerance;
use crate::exactnum::{Backend, Matrix, Scalar};
use crate::homog::{
    classify, koszul_connection, nabla_j, nabla_omega, nijenhuis, ClassificationReport, HomogeneousModel,
    InvariantAcs, InvariantMetric, LieAlgebraData, ReductiveSplit, Tensor3, Verdict,
};

use super::poly::Poly;
use super::tables::SP2_TABLE;
use super::CatalogError;

pub const BLOCKS: [&str; 2] = ["m", "n"];

#[derive(Clone, Debug, PartialEq)]
pub struct CP3MetricParam {
    pub t: Scalar,
}

impl CP3MetricParam {
    pub fn new(t: Scalar) -> Result<CP3MetricParam, CatalogError> {
        if !t.is_positive() {
            return Err(CatalogError::InvalidParams(format!("t must be positive, got {t}")));
        }
        Ok(CP3MetricParam { t })
    }
}

/// sp(2) in the basis of the frozen table: `h` = 0..4, `m` = 4..8, `n` = 8..10.
pub fn sp2(backend: Backend) -> LieAlgebraData {
    let entries: Vec<_> = SP2_TABLE
        .iter()
        .map(|&(i, j, k, c)| (i, j, k, backend.from_i64(c)))
        .collect();
    LieAlgebraData::from_entries(10, backend, &entries).expect("frozen sp(2) table")
}

fn cp3_j(en: i8, b: Backend) -> Matrix {
    let mut j = Matrix::zeros(6, 6, b);
    // i·1 = i, i·i = −1, i·j = k, i·k = −j
    for (from, to, s) in [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)] {
        j[(to, from)] = b.from_i64(s);
    }
    j[(5, 4)] = b.from_i64(en as i64);
    j[(4, 5)] = b.from_i64(-(en as i64));
    j
}

pub fn build_cp3(param: &CP3MetricParam, en: i8) -> Result<HomogeneousModel, CatalogError> {
    if en.abs() != 1 {
        return Err(CatalogError::InvalidParams(format!("en must be ±1, got {en}")));
    }
    let b = param.t.backend();
    let lie = sp2(b);
    let split = ReductiveSplit::new(
        &lie,
        vec![0, 1, 2, 3],
        (4..10).collect(),
        vec![("m".into(), vec![0, 1, 2, 3]), ("n".into(), vec![4, 5])],
    )?;
    let half_t = &param.t * &b.from_ratio(1, 2);
    let one = b.one();
    let metric = InvariantMetric::diagonal(&[
        one.clone(),
        one.clone(),
        one.clone(),
        one,
        half_t.clone(),
        half_t,
    ])?;
    let acs = InvariantAcs::new(cp3_j(en, b), &metric)?.with_signs(vec![en]);
    Ok(HomogeneousModel::new("cp3", lie, split, metric, Some(acs))?)
}

fn nabla_omega_at(t: i64, en: i8) -> Result<Tensor3, CatalogError> {
    let model = build_cp3(&CP3MetricParam::new(Scalar::int(t))?, en)?;
    let conn = koszul_connection(&model)?;
    let nj = nabla_j(&conn, model.acs().expect("cp3 carries J"));
    Ok(nabla_omega(&nj, model.metric()))
}

/// Per-sign result of [`cp3_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cp3Case {
    pub en: i8,
    /// Positive `t` where `∇ω` is totally antisymmetric.
    pub nk_values: Vec<Scalar>,
    /// Positive `t` where `∇ω = 0`.
    pub kahler_values: Vec<Scalar>,
    /// Nijenhuis tensor vanishes (independent of `t`).
    pub integrable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cp3Locus {
    pub cases: Vec<Cp3Case>,
    /// Highest degree seen among the interpolated residuals.
    pub degree: usize,
}

impl Cp3Locus {
    pub fn predict(&self, t: f64, en: i8, tol: f64) -> Verdict {
        let Some(case) = self.cases.iter().find(|c| c.en == en) else {
            return Verdict::Neither;
        };
        let hit = |v: &[Scalar]| v.iter().any(|x| (x.to_f64() - t).abs() <= tol * t.max(1.0));
        if hit(&case.kahler_values) {
            Verdict::Kahler
        } else if hit(&case.nk_values) {
            Verdict::StrictNK
        } else if case.integrable {
            Verdict::HermitianOther
        } else {
            Verdict::Neither
        }
    }

    /// All `t` of NK class (strict or Kähler), over both signs.
    pub fn nk_class_values(&self) -> Vec<(i8, Scalar)> {
        let mut out = Vec::new();
        for c in &self.cases {
            for v in c.nk_values.iter().chain(&c.kahler_values) {
                if !out.iter().any(|(e, x)| *e == c.en && x == v) {
                    out.push((c.en, v.clone()));
                }
            }
        }
        out
    }

    pub fn describe(&self) -> Vec<String> {
        self.cases
            .iter()
            .map(|c| {
                let list = |v: &[Scalar]| {
                    if v.is_empty() {
                        "none".to_string()
                    } else {
                        v.iter().map(|x| format!("t={x}")).collect::<Vec<_>>().join(", ")
                    }
                };
                let strict: Vec<Scalar> =
                    c.nk_values.iter().filter(|x| !c.kahler_values.contains(x)).cloned().collect();
                format!(
                    "en={}: StrictNK at {}; Kahler at {}",
                    if c.en > 0 { '+' } else { '-' },
                    list(&strict),
                    list(&c.kahler_values)
                )
            })
            .collect()
    }
}

const SAMPLES: std::ops::RangeInclusive<i64> = 1..=4;
const CHECKS: std::ops::RangeInclusive<i64> = 5..=7;

/// Positive rational common roots of a family of residuals that are
/// polynomials of degree at most 3 in `t` after multiplying by `t`.
fn common_roots(
    residual: impl Fn(i64) -> Result<Vec<Scalar>, CatalogError>,
) -> Result<(Vec<Scalar>, usize), CatalogError> {
    let xs: Vec<BigRational> = SAMPLES.map(|t| BigRational::from_integer(t.into())).collect();
    let values: Vec<Vec<Scalar>> = SAMPLES
        .map(|t| {
            residual(t).map(|v| v.iter().map(|x| x * &Scalar::int(t)).collect())
        })
        .collect::<Result<_, _>>()?;
    let checks: Vec<(i64, Vec<Scalar>)> = CHECKS
        .map(|t| residual(t).map(|v| (t, v.iter().map(|x| x * &Scalar::int(t)).collect())))
        .collect::<Result<_, _>>()?;
    let rational = |x: &Scalar| {
        x.as_rational().cloned().ok_or_else(|| {
            CatalogError::Solve("cp3 residual left the rationals".into())
        })
    };
    let mut g = Poly::zero();
    let mut degree = 0;
    for i in 0..values[0].len() {
        let ys: Vec<BigRational> = values.iter().map(|v| rational(&v[i])).collect::<Result<_, _>>()?;
        let p = Poly::interpolate(&xs, &ys);
        for (t, v) in &checks {
            if p.eval(&BigRational::from_integer((*t).into())) != rational(&v[i])? {
                return Err(CatalogError::Solve(format!(
                    "residual component {i} is not a cubic in t"
                )));
            }
        }
        degree = degree.max(p.degree().unwrap_or(0));
        g = g.gcd(&p);
    }
    let roots = if g.is_zero() {
        return Err(CatalogError::Solve("residual vanishes for every t".into()));
    } else {
        g.rational_roots()
    };
    Ok((
        roots
            .into_iter()
            .filter(|r| r > &BigRational::from_integer(0.into()))
            .map(Scalar::from)
            .collect(),
        degree,
    ))
}

/// Derive, for each sign on `n`, the `t` where the structure is NK or Kähler.
pub fn cp3_solve() -> Result<Cp3Locus, CatalogError> {
    let mut cases = Vec::new();
    let mut degree = 0;
    for en in [1i8, -1] {
        let (nk_values, d1) = common_roots(|t| {
            let w = nabla_omega_at(t, en)?;
            let n = w.dim();
            let mut out = Vec::with_capacity(n * n * n);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        out.push(w.get(a, b, c) + w.get(b, a, c));
                    }
                }
            }
            Ok(out)
        })?;
        let (kahler_values, d2) = common_roots(|t| Ok(nabla_omega_at(t, en)?.entries().to_vec()))?;
        degree = degree.max(d1).max(d2);
        let unit = build_cp3(&CP3MetricParam::new(Scalar::int(1))?, en)?;
        cases.push(Cp3Case {
            en,
            nk_values,
            kahler_values,
            integrable: nijenhuis(&unit)?.is_zero(),
        });
    }
    Ok(Cp3Locus { cases, degree })
}

pub fn cp3_verdict(
    param: &CP3MetricParam,
    en: i8,
    tol: &Tolerance,
) -> Result<ClassificationReport, CatalogError> {
    let model = build_cp3(param, en)?;
    let cf = model.coframe()?;
    Ok(classify(&model, &cf, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homog::{canonical_3symmetric_check, naturally_reductive_test};

    fn verdict(t: Scalar, en: i8) -> Verdict {
        cp3_verdict(&CP3MetricParam::new(t).unwrap(), en, &Tolerance::default())
            .unwrap()
            .verdict
    }

    #[test]
    fn reference_points() {
        assert_eq!(verdict(Scalar::int(1), -1), Verdict::StrictNK);
        assert_eq!(verdict(Scalar::int(2), 1), Verdict::Kahler);
        assert_eq!(verdict(Scalar::int(3), -1), Verdict::Neither);
        assert_eq!(verdict(Scalar::int(3), 1), Verdict::HermitianOther);
        assert_eq!(verdict(Scalar::ratio(1, 2), -1), Verdict::Neither);
    }

    #[test]
    fn solve_finds_two_values() {
        let sol = cp3_solve().unwrap();
        assert!(sol.degree <= 3);
        let plus = &sol.cases[0];
        assert_eq!(plus.kahler_values, vec![Scalar::int(2)]);
        assert!(plus.integrable);
        let minus = &sol.cases[1];
        assert_eq!(minus.nk_values, vec![Scalar::int(1)]);
        assert!(minus.kahler_values.is_empty());
        assert!(!minus.integrable);
        assert_eq!(sol.nk_class_values().len(), 2);
    }

    #[test]
    fn nk_point_is_three_symmetric() {
        let tol = Tolerance::default();
        let m = build_cp3(&CP3MetricParam::new(Scalar::int(1)).unwrap(), -1).unwrap();
        assert!(canonical_3symmetric_check(&m, &tol).unwrap());
        assert!(naturally_reductive_test(&m, &tol));
    }

    #[test]
    fn j_commutes_with_isotropy() {
        let m = build_cp3(&CP3MetricParam::new(Scalar::int(3)).unwrap(), -1).unwrap();
        let j = m.acs().unwrap().matrix();
        for h in 0..4 {
            let ad = Matrix::from_fn(6, 6, |c, b| m.lie().c(h, 4 + b, 4 + c).clone());
            assert_eq!(&ad * j, j * &ad, "h{h}");
        }
    }

    #[test]
    fn invalid() {
        assert!(CP3MetricParam::new(Scalar::int(0)).is_err());
        assert!(build_cp3(&CP3MetricParam::new(Scalar::int(1)).unwrap(), 2).is_err());
    }
}
