//! The flag manifold `F(1,2) = SU(3)/T²` with `m = l ⊕ m ⊕ n`, metric
//! `r·l + s·m + t·n` and `J⟨a,b,c⟩ = ⟨ε₁a, −ε₂b, ε₃c⟩`.
//!
//! The Levi-Civita connection has the block form `Λ(X)U = α[X,U]`,
//! `Λ(U)A = β[U,A]`, `Λ(A)X = γ[A,X]` (`X ∈ l`, `U ∈ m`, `A ∈ n`), with the
//! reversed pairs fixed by torsion-freeness. [`flag_solve`] derives the
//! antisymmetry and Kähler conditions on `(α, β, γ)` by evaluating `∇J` on
//! that block form, then pulls them back to `(r, s, t)`.

use crate::config::Tolerance;
use crate::exactnum::{Backend, Matrix, Scalar};
use crate::homog::{
    HomogeneousModel, InvariantAcs, InvariantMetric, LieAlgebraData, ReductiveSplit, Verdict,
};

use super::tables::SU3_TABLE;
use super::CatalogError;

/// Block labels in the order they appear in `m`.
pub const BLOCKS: [&str; 3] = ["l", "m", "n"];

#[derive(Clone, Debug, PartialEq)]
pub struct FlagMetricParams {
    pub r: Scalar,
    pub s: Scalar,
    pub t: Scalar,
}

impl FlagMetricParams {
    pub fn new(r: Scalar, s: Scalar, t: Scalar) -> Result<FlagMetricParams, CatalogError> {
        for (name, v) in [("r", &r), ("s", &s), ("t", &t)] {
            if !v.is_positive() {
                return Err(CatalogError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        let b = r.backend().join(s.backend())?.join(t.backend())?;
        Ok(FlagMetricParams {
            r: r.to_backend(b)?,
            s: s.to_backend(b)?,
            t: t.to_backend(b)?,
        })
    }

    pub fn backend(&self) -> Backend {
        self.r.backend()
    }

    pub fn as_array(&self) -> [Scalar; 3] {
        [self.r.clone(), self.s.clone(), self.t.clone()]
    }
}

/// su(3) in the basis `h1, h2, l₀, l₁, m₀, m₁, n₀, n₁`.
pub fn su3(backend: Backend) -> LieAlgebraData {
    let entries: Vec<_> = SU3_TABLE
        .iter()
        .map(|&(i, j, k, c)| (i, j, k, backend.from_i64(c)))
        .collect();
    LieAlgebraData::from_entries(8, backend, &entries).expect("frozen su(3) table")
}

fn check_signs(signs: [i8; 3]) -> Result<(), CatalogError> {
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(CatalogError::InvalidParams(format!("signs must be ±1, got {signs:?}")));
    }
    Ok(())
}

/// `J` on `m` for a sign triple: rotation by `e_b = (ε₁, −ε₂, ε₃)_b` on
/// block `b`, `J X_{2b} = e_b X_{2b+1}`.
pub fn flag_j(signs: [i8; 3], backend: Backend) -> Matrix {
    let e = [signs[0], -signs[1], signs[2]];
    let mut j = Matrix::zeros(6, 6, backend);
    for (b, &eb) in e.iter().enumerate() {
        j[(2 * b + 1, 2 * b)] = backend.from_i64(eb as i64);
        j[(2 * b, 2 * b + 1)] = backend.from_i64(-(eb as i64));
    }
    j
}

/// The flag manifold with metric `(r, s, t)` and `J` from `signs`.
pub fn build_flag(
    params: &FlagMetricParams,
    signs: [i8; 3],
) -> Result<HomogeneousModel, CatalogError> {
    check_signs(signs)?;
    let b = params.backend();
    let lie = su3(b);
    let split = ReductiveSplit::new(
        &lie,
        vec![0, 1],
        (2..8).collect(),
        BLOCKS
            .iter()
            .enumerate()
            .map(|(i, l)| (l.to_string(), vec![2 * i, 2 * i + 1]))
            .collect(),
    )?;
    let p = params.as_array();
    let metric = InvariantMetric::diagonal(&[0, 0, 1, 1, 2, 2].map(|i| p[i].clone()))?;
    let acs = InvariantAcs::new(flag_j(signs, b), &metric)?.with_signs(signs.to_vec());
    Ok(HomogeneousModel::new("flag", lie, split, metric, Some(acs))?)
}

/// `(α, β, γ)` from `αt + γs = s`, `αt + βr = t`, `βr + γs = r`.
pub fn flag_connection_coeffs(params: &FlagMetricParams) -> Result<[Scalar; 3], CatalogError> {
    let b = params.backend();
    let (r, s, t) = (&params.r, &params.s, &params.t);
    let z = b.zero();
    let a = Matrix::new(
        3,
        3,
        vec![
            t.clone(), z.clone(), s.clone(),
            t.clone(), r.clone(), z.clone(),
            z, r.clone(), s.clone(),
        ],
    )?;
    let x = a.solve(&[s.clone(), t.clone(), r.clone()])?;
    Ok([x[0].clone(), x[1].clone(), x[2].clone()])
}

/// Which block pair a connection coefficient belongs to:
/// `(l,m) → α`, `(m,n) → β`, `(n,l) → γ`, reversed pairs get `1 − ·`.
fn block_coefficient(from: usize, to: usize, abc: &[Scalar; 3]) -> Option<Scalar> {
    let one = abc[0].one_like();
    match (from, to) {
        (0, 1) => Some(abc[0].clone()),
        (1, 0) => Some(&one - &abc[0]),
        (1, 2) => Some(abc[1].clone()),
        (2, 1) => Some(&one - &abc[1]),
        (2, 0) => Some(abc[2].clone()),
        (0, 2) => Some(&one - &abc[2]),
        _ => None,
    }
}

/// `(∇_a J) b` for the block-form connection with coefficients `abc`,
/// as a flat vector over `(a, b, component)`.
fn nabla_j_block_form(model: &HomogeneousModel, abc: &[Scalar; 3]) -> Vec<Scalar> {
    let b = abc[0].backend();
    let br = model.m_brackets();
    let j = model.acs().expect("flag model carries J").matrix().to_backend(b).expect("exact");
    let lambda: Vec<Matrix> = (0..6)
        .map(|x| {
            Matrix::from_fn(6, 6, |c, y| match block_coefficient(x / 2, y / 2, abc) {
                Some(k) => &k * &br.get(x, y, c).to_backend(b).expect("exact"),
                None => b.zero(),
            })
        })
        .collect();
    let mut out = Vec::with_capacity(216);
    for l in &lambda {
        let comm = (l * &j).sub(&(&j * l));
        for y in 0..6 {
            out.extend(comm.col(y));
        }
    }
    out
}

/// Solution set of an affine system `M x = v` in `(α, β, γ)` as reduced rows.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSet {
    /// Rows `[c_α, c_β, c_γ, rhs]` of the reduced echelon form, zero rows
    /// dropped. Empty when the system imposes nothing.
    pub rows: Vec<[Scalar; 4]>,
    pub consistent: bool,
}

impl AffineSet {
    fn from_rows(rows: &[[Scalar; 4]]) -> AffineSet {
        if rows.is_empty() {
            return AffineSet {
                rows: Vec::new(),
                consistent: true,
            };
        }
        let m = Matrix::from_fn(rows.len(), 4, |i, j| rows[i][j].clone());
        let (red, pivots) = m.rref();
        let consistent = !pivots.contains(&3);
        let kept = (0..pivots.len())
            .map(|i| [0, 1, 2, 3].map(|j| red[(i, j)].clone()))
            .collect();
        AffineSet {
            rows: kept,
            consistent,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.consistent
    }

    pub fn render(&self) -> String {
        if !self.consistent {
            return "empty".into();
        }
        if self.rows.is_empty() {
            return "all (α, β, γ)".into();
        }
        let names = ["α", "β", "γ"];
        self.rows
            .iter()
            .map(|row| {
                let lhs: Vec<String> = (0..3)
                    .filter(|&k| !row[k].is_zero())
                    .map(|k| {
                        if row[k].is_one() {
                            names[k].to_string()
                        } else {
                            format!("{}·{}", row[k], names[k])
                        }
                    })
                    .collect();
                format!("{} = {}", lhs.join(" + "), row[3])
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Affine conditions `c₀ + c_α α + c_β β + c_γ γ = 0` from a family of
/// tensors affine in `(α, β, γ)`, by evaluating at the origin and unit
/// vectors.
fn affine_conditions(eval: impl Fn(&[Scalar; 3]) -> Vec<Scalar>) -> AffineSet {
    let r = Backend::Rational;
    let base = eval(&[r.zero(), r.zero(), r.zero()]);
    let dirs: Vec<Vec<Scalar>> = (0..3)
        .map(|k| {
            let mut p = [r.zero(), r.zero(), r.zero()];
            p[k] = r.one();
            eval(&p).iter().zip(&base).map(|(a, b)| a - b).collect()
        })
        .collect();
    let rows: Vec<[Scalar; 4]> = (0..base.len())
        .map(|i| [dirs[0][i].clone(), dirs[1][i].clone(), dirs[2][i].clone(), -&base[i]])
        .filter(|row| !row.iter().all(Scalar::is_zero))
        .collect();
    AffineSet::from_rows(&rows)
}

/// The closed-form sign system: two fixed lines, and a third line either
/// `γ(ε₁+ε₂) = (1−α)(ε₂+ε₃)` or the same with `(1−γ)`.
pub fn sign_system(signs: [i8; 3], third_line_uses_gamma: bool) -> AffineSet {
    let [e1, e2, e3] = signs.map(|x| x as i64);
    let q = Scalar::int;
    // α(ε₂+ε₃) = (1−α)(ε₁+ε₃)  ⇔  α(ε₁+ε₂+2ε₃) = ε₁+ε₃
    let mut rows = vec![
        [q(e1 + e2 + 2 * e3), q(0), q(0), q(e1 + e3)],
        // β(ε₁+ε₃) = (1−β)(ε₁+ε₂)  ⇔  β(2ε₁+ε₂+ε₃) = ε₁+ε₂
        [q(0), q(2 * e1 + e2 + e3), q(0), q(e1 + e2)],
    ];
    if third_line_uses_gamma {
        rows.push([q(0), q(0), q(e1 + 2 * e2 + e3), q(e2 + e3)]);
    } else {
        // γ(ε₁+ε₂) + α(ε₂+ε₃) = ε₂+ε₃
        rows.push([q(e2 + e3), q(0), q(e1 + e2), q(e2 + e3)]);
    }
    let rows: Vec<_> = rows.into_iter().filter(|r| !r.iter().all(Scalar::is_zero)).collect();
    AffineSet::from_rows(&rows)
}

/// A locus in `(r, s, t)` cut out by homogeneous linear equations.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricLocus {
    /// Rows `[c_r, c_s, c_t]` with `c_r r + c_s s + c_t t = 0`, reduced.
    pub equations: Vec<[Scalar; 3]>,
    /// Contains a point with `r, s, t > 0`.
    pub has_positive_point: bool,
}

impl MetricLocus {
    pub fn contains(&self, p: &FlagMetricParams, tol: f64) -> bool {
        let x = p.as_array();
        let scale = x.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
        self.equations.iter().all(|row| {
            let v = (0..3).fold(x[0].zero_like(), |acc, k| {
                acc + &row[k].to_backend(x[0].backend()).expect("rational coefficient") * &x[k]
            });
            if v.is_exact() {
                v.is_zero()
            } else {
                v.abs_f64() <= tol * scale
            }
        })
    }

    pub fn render(&self) -> String {
        let names = ["r", "s", "t"];
        match self.equations.len() {
            0 => "all (r, s, t)".into(),
            1 => match self.sum_family() {
                Some(k) => {
                    let others: Vec<&str> = (0..3).filter(|&i| i != k).map(|i| names[i]).collect();
                    format!("{} = {} + {}", names[k], others[0], others[1])
                }
                None => render_linear(&self.equations[0]),
            },
            2 if self.equations.iter().all(|row| row.iter().filter(|c| !c.is_zero()).count() == 2) => {
                let v = self.direction();
                if v.iter().all(|x| x == &v[0]) {
                    "r = s = t".into()
                } else {
                    self.equations.iter().map(render_linear).collect::<Vec<_>>().join(", ")
                }
            }
            _ => self.equations.iter().map(render_linear).collect::<Vec<_>>().join(", "),
        }
    }

    fn direction(&self) -> Vec<Scalar> {
        let m = Matrix::from_fn(self.equations.len(), 3, |i, j| self.equations[i][j].clone());
        let ns = m.nullspace();
        ns.first().cloned().unwrap_or_default()
    }

    /// Index of the parameter equal to the sum of the other two, if the
    /// locus is exactly such a plane.
    pub fn sum_family(&self) -> Option<usize> {
        let [row] = self.equations.as_slice() else {
            return None;
        };
        (0..3).find(|&k| {
            let target: Vec<Scalar> = (0..3).map(|i| Scalar::int(if i == k { 1 } else { -1 })).collect();
            let neg: Vec<Scalar> = target.iter().map(|x| -x).collect();
            row.as_slice() == target.as_slice() || row.as_slice() == neg.as_slice()
        })
    }

    pub fn is_equal_parameters(&self) -> bool {
        self.equations.len() == 2 && {
            let v = self.direction();
            !v.is_empty() && v.iter().all(|x| x == &v[0])
        }
    }
}

fn render_linear(row: &[Scalar; 3]) -> String {
    let names = ["r", "s", "t"];
    let parts: Vec<String> = (0..3)
        .filter(|&k| !row[k].is_zero())
        .map(|k| format!("{}·{}", row[k], names[k]))
        .collect();
    format!("{} = 0", parts.join(" + "))
}

/// Pull an `(α, β, γ)` condition set back to `(r, s, t)` through
/// `α = (s+t−r)/(2t)`, `β = (t+r−s)/(2r)`, `γ = (r+s−t)/(2s)`.
///
/// Only rows fixing a single coefficient are linear in `(r, s, t)`; mixed
/// rows are reported as an error.
fn pull_back(set: &AffineSet) -> Result<Option<MetricLocus>, CatalogError> {
    if !set.consistent {
        return Ok(None);
    }
    let r = Backend::Rational;
    let mut eqs: Vec<Scalar> = Vec::new();
    let mut nrows = 0;
    for row in &set.rows {
        let nz: Vec<usize> = (0..3).filter(|&k| !row[k].is_zero()).collect();
        if nz.len() != 1 {
            return Err(CatalogError::Solve(format!(
                "condition couples several connection coefficients: {}",
                set.render()
            )));
        }
        let k = nz[0];
        let v = &row[3] / &row[k];
        let two_v = &v * &r.from_i64(2);
        // numerator − 2v·denominator = 0, coefficients over (r, s, t)
        let (num, den) = match k {
            0 => ([-1i64, 1, 1], 2usize),
            1 => ([1, -1, 1], 0),
            _ => ([1, 1, -1], 1),
        };
        for (i, &c) in num.iter().enumerate() {
            let mut x = r.from_i64(c);
            if i == den {
                x = &x - &two_v;
            }
            eqs.push(x);
        }
        nrows += 1;
    }
    let equations = if nrows == 0 {
        Vec::new()
    } else {
        let (red, pivots) = Matrix::new(nrows, 3, eqs)?.rref();
        (0..pivots.len()).map(|i| [0, 1, 2].map(|j| red[(i, j)].clone())).collect()
    };
    let m = Matrix::from_fn(equations.len().max(1), 3, |i, j| {
        equations.get(i).map(|row: &[Scalar; 3]| row[j].clone()).unwrap_or_else(|| r.zero())
    });
    let basis = m.nullspace();
    let has_positive_point = positive_combination(&basis);
    Ok(Some(MetricLocus {
        equations,
        has_positive_point,
    }))
}

fn positive_combination(basis: &[Vec<Scalar>]) -> bool {
    let r = Backend::Rational;
    let range: Vec<i64> = (-3..=3).collect();
    match basis.len() {
        0 => false,
        1 => {
            let s: Vec<i8> = basis[0].iter().map(Scalar::signum).collect();
            s.iter().all(|&x| x == 1) || s.iter().all(|&x| x == -1)
        }
        2 => range.iter().any(|&a| {
            range.iter().any(|&c| {
                (0..3).all(|k| {
                    (&(&basis[0][k] * &r.from_i64(a)) + &(&basis[1][k] * &r.from_i64(c))).is_positive()
                })
            })
        }),
        _ => true,
    }
}

/// Derived conditions for one sign triple.
#[derive(Clone, Debug, PartialEq)]
pub struct SignCase {
    pub signs: [i8; 3],
    /// `(∇_X J)Y + (∇_Y J)X = 0` as conditions on `(α, β, γ)`.
    pub nk_conditions: AffineSet,
    /// `∇J = 0` as conditions on `(α, β, γ)`.
    pub kahler_conditions: AffineSet,
    pub nk_locus: Option<MetricLocus>,
    pub kahler_locus: Option<MetricLocus>,
    /// The sign system with `(1−α)` in the third line has the same solution
    /// set as the derived antisymmetry conditions.
    pub alpha_variant_matches: bool,
    /// Same with `(1−γ)` in the third line.
    pub gamma_variant_matches: bool,
    /// Nijenhuis tensor vanishes (independent of the metric).
    pub integrable: bool,
}

/// Derived strict-NK and Kähler loci of the flag family.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagLocus {
    pub cases: Vec<SignCase>,
}

impl FlagLocus {
    /// Verdict predicted by the loci.
    pub fn predict(&self, p: &FlagMetricParams, signs: [i8; 3], tol: f64) -> Verdict {
        let Some(case) = self.cases.iter().find(|c| c.signs == signs) else {
            return Verdict::Neither;
        };
        let on = |l: &Option<MetricLocus>| l.as_ref().is_some_and(|l| l.contains(p, tol));
        if on(&case.kahler_locus) {
            Verdict::Kahler
        } else if on(&case.nk_locus) {
            Verdict::StrictNK
        } else if case.integrable {
            Verdict::HermitianOther
        } else {
            Verdict::Neither
        }
    }

    /// Human-readable summary, one line per sign triple with a nonempty locus.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.cases {
            let s: String = c.signs.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
            match (&c.kahler_locus, &c.nk_locus) {
                (Some(k), _) if k.has_positive_point => {
                    out.push(format!("eps={s}: Kahler on {}", k.render()))
                }
                (_, Some(n)) if n.has_positive_point => {
                    out.push(format!("eps={s}: StrictNK on {}", n.render()))
                }
                _ => out.push(format!("eps={s}: none")),
            }
        }
        out
    }
}

/// Derive the loci for all eight sign triples.
pub fn flag_solve() -> Result<FlagLocus, CatalogError> {
    let r = Backend::Rational;
    let unit = FlagMetricParams::new(r.one(), r.one(), r.one())?;
    let mut cases = Vec::new();
    for mask in 0..8u8 {
        let signs: [i8; 3] = [0, 1, 2].map(|i| if mask >> i & 1 == 0 { 1 } else { -1 });
        let model = build_flag(&unit, signs)?;
        let nk_conditions = affine_conditions(|abc| {
            let t = nabla_j_block_form(&model, abc);
            let mut out = Vec::with_capacity(216);
            for a in 0..6 {
                for b in 0..6 {
                    for c in 0..6 {
                        out.push(&t[(a * 6 + b) * 6 + c] + &t[(b * 6 + a) * 6 + c]);
                    }
                }
            }
            out
        });
        let kahler_conditions = affine_conditions(|abc| nabla_j_block_form(&model, abc));
        let alpha_variant_matches = sign_system(signs, false) == nk_conditions;
        let gamma_variant_matches = sign_system(signs, true) == nk_conditions;
        cases.push(SignCase {
            signs,
            nk_locus: pull_back(&nk_conditions)?,
            kahler_locus: pull_back(&kahler_conditions)?,
            nk_conditions,
            kahler_conditions,
            alpha_variant_matches,
            gamma_variant_matches,
            integrable: crate::homog::nijenhuis(&model)?.is_zero(),
        });
    }
    Ok(FlagLocus { cases })
}

/// Convenience for sweeps: the classify verdict of one flag point.
pub fn flag_verdict(
    params: &FlagMetricParams,
    signs: [i8; 3],
    tol: &Tolerance,
) -> Result<crate::homog::ClassificationReport, CatalogError> {
    let model = build_flag(params, signs)?;
    let cf = model.coframe()?;
    Ok(crate::homog::classify(&model, &cf, tol)?)
}
