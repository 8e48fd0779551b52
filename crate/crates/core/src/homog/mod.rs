//! Reductive homogeneous models `g = h ⊕ m` with an invariant metric and
//! almost complex structure, the Levi-Civita connection in Wang form and the
//! almost-Hermitian predicates built on it.
//!
//! All tensors live on `m`, re-indexed `0..dim m` in the order of the
//! split's m-indices. Matrices act on column vectors: `J X_a = Σ_c J[c][a] X_c`.

mod classify;
mod connection;
mod model_file;

pub use classify::{
    canonical_3symmetric_check, classify, dw34_diagnostic, naturally_reductive_test, nijenhuis,
    type_constant, type_constant_with_seed, type_split_3form, ClassificationReport, Norms,
    Verdict,
};
pub use connection::{koszul_connection, nabla_j, nabla_omega, ConnectionMap};
pub use model_file::{parse_model_file, render_model_file, ModelFile};

use thiserror::Error;

use crate::exactnum::{Backend, Matrix, NumError, Scalar};
use crate::forms::{CoframeDifferential, FormError, KForm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomogError {
    #[error("structure constants not antisymmetric at ({0},{1},{2})")]
    NotAntisymmetric(usize, usize, usize),
    #[error("Jacobi identity fails on basis triple ({0},{1},{2})")]
    JacobiViolation(usize, usize, usize),
    #[error("invalid reductive split: {0}")]
    InvalidSplit(String),
    #[error("metric is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("metric Gram matrix is singular")]
    SingularMetric,
    #[error("J² ≠ −Id")]
    NotComplexStructure,
    #[error("J is not orthogonal for the metric")]
    NotCompatible,
    #[error("not invariant under the isotropy algebra: {0}")]
    NotInvariant(String),
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("structure is not strictly nearly Kähler")]
    NotStrictNK,
    #[error("type constant is not constant (pair {0:?})")]
    NotConstant(String),
    #[error("connection is not block-scalar on blocks {0} -> {1}")]
    NotBlockScalar(String, String),
    #[error("model file line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Dense rank-3 array `t[a][b][c]` over an `n`-dimensional index set.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Tensor3 {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Tensor3 { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.data[(a * self.n + b) * self.n + c]
    }

    /// The vector `t[a][b][·]`.
    pub fn fiber(&self, a: usize, b: usize) -> &[Scalar] {
        let start = (a * self.n + b) * self.n;
        &self.data[start..start + self.n]
    }

    pub fn max_abs(&self) -> f64 {
        Scalar::max_abs(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }
}

/// Structure constants `[bᵢ, bⱼ] = Σₖ c[i][j][k] bₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    c: Tensor3,
}

impl LieAlgebraData {
    /// From sparse entries `(i, j, k, value)` with `i < j` or `i > j`; the
    /// antisymmetric partner is filled in. Checks antisymmetry of repeated
    /// entries and the Jacobi identity exhaustively.
    pub fn from_entries(
        dim: usize,
        backend: Backend,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<LieAlgebraData, HomogError> {
        let mut dense = vec![backend.zero(); dim * dim * dim];
        let mut set = vec![false; dim * dim * dim];
        let at = |i: usize, j: usize, k: usize| (i * dim + j) * dim + k;
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(HomogError::InvalidSplit(format!(
                    "structure constant index ({i},{j},{k}) out of range"
                )));
            }
            let v = v.to_backend(backend.join(v.backend())?)?;
            if i == j && !v.is_zero() {
                return Err(HomogError::NotAntisymmetric(i, j, k));
            }
            for (p, val) in [(at(i, j, k), v.clone()), (at(j, i, k), -&v)] {
                if set[p] && dense[p] != val {
                    return Err(HomogError::NotAntisymmetric(i, j, k));
                }
                dense[p] = val;
                set[p] = true;
            }
        }
        LieAlgebraData::from_dense(dim, dense)
    }

    /// From the full array in `[i][j][k]` order.
    pub fn from_dense(dim: usize, data: Vec<Scalar>) -> Result<LieAlgebraData, HomogError> {
        if data.len() != dim * dim * dim {
            return Err(HomogError::InconsistentInputs(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                data.len()
            )));
        }
        let m = Matrix::new(1, data.len(), data)?;
        let lie = LieAlgebraData {
            c: Tensor3 {
                n: dim,
                data: m.entries().to_vec(),
            },
        };
        lie.check()?;
        Ok(lie)
    }

    fn check(&self) -> Result<(), HomogError> {
        let n = self.dim();
        let exact = self.backend().is_exact();
        let scale = self.c.max_abs().max(1.0);
        let small = |x: &Scalar| {
            if exact {
                x.is_zero()
            } else {
                x.abs_f64() <= 1e-10 * scale * scale
            }
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !small(&(self.c(i, j, k) + self.c(j, i, k))) {
                        return Err(HomogError::NotAntisymmetric(i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    // [[i,j],k] + [[j,k],i] + [[k,i],j]
                    for l in 0..n {
                        let mut acc = self.backend().zero();
                        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                            for m in 0..n {
                                let x = self.c(a, b, m);
                                if !x.is_zero() {
                                    acc += &(x * self.c(m, c, l));
                                }
                            }
                        }
                        if !small(&acc) {
                            return Err(HomogError::JacobiViolation(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.c.n
    }

    pub fn backend(&self) -> Backend {
        self.c.data[0].backend()
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.c.get(i, j, k)
    }

    pub fn constants(&self) -> &Tensor3 {
        &self.c
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![self.backend().join(x[0].backend()).unwrap_or(Backend::Float).zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    pub fn to_backend(&self, backend: Backend) -> Result<LieAlgebraData, HomogError> {
        let data = self
            .c
            .data
            .iter()
            .map(|x| x.to_backend(backend))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LieAlgebraData {
            c: Tensor3 { n: self.c.n, data },
        })
    }

    /// Nonzero entries with `i < j`.
    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let v = self.c(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }
}

/// `g = h ⊕ m` by basis indices, with `m` optionally cut into labeled blocks
/// (block members are positions inside `m`).
#[derive(Clone, Debug, PartialEq)]
pub struct ReductiveSplit {
    h: Vec<usize>,
    m: Vec<usize>,
    blocks: Vec<(String, Vec<usize>)>,
}

impl ReductiveSplit {
    pub fn new(
        lie: &LieAlgebraData,
        h: Vec<usize>,
        m: Vec<usize>,
        blocks: Vec<(String, Vec<usize>)>,
    ) -> Result<ReductiveSplit, HomogError> {
        let n = lie.dim();
        let mut seen = vec![false; n];
        for &i in h.iter().chain(m.iter()) {
            if i >= n || seen[i] {
                return Err(HomogError::InvalidSplit(format!("index {i} repeated or out of range")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(HomogError::InvalidSplit("h and m do not cover the basis".into()));
        }
        if m.is_empty() {
            return Err(HomogError::InvalidSplit("m is empty".into()));
        }
        let mut covered = vec![false; m.len()];
        for (label, members) in &blocks {
            for &p in members {
                if p >= m.len() || covered[p] {
                    return Err(HomogError::InvalidSplit(format!(
                        "block {label}: position {p} invalid or repeated"
                    )));
                }
                covered[p] = true;
            }
        }
        if !blocks.is_empty() && covered.iter().any(|c| !c) {
            return Err(HomogError::InvalidSplit("blocks do not cover m".into()));
        }
        for &a in &h {
            for &b in &h {
                if m.iter().any(|&k| !lie.c(a, b, k).is_zero()) {
                    return Err(HomogError::InvalidSplit(format!("[h,h] ⊄ h at ({a},{b})")));
                }
            }
            for &b in &m {
                if h.iter().any(|&k| !lie.c(a, b, k).is_zero()) {
                    return Err(HomogError::InvalidSplit(format!("[h,m] ⊄ m at ({a},{b})")));
                }
            }
        }
        Ok(ReductiveSplit { h, m, blocks })
    }

    /// `h = 0`, `m = g`.
    pub fn trivial(lie: &LieAlgebraData) -> ReductiveSplit {
        ReductiveSplit::new(lie, Vec::new(), (0..lie.dim()).collect(), Vec::new())
            .expect("trivial split is reductive")
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn m_dim(&self) -> usize {
        self.m.len()
    }

    pub fn blocks(&self) -> &[(String, Vec<usize>)] {
        &self.blocks
    }

    pub fn block(&self, label: &str) -> Option<&[usize]> {
        self.blocks
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, members)| members.as_slice())
    }
}

/// Symmetric positive-definite Gram matrix on `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantMetric {
    g: Matrix,
}

impl InvariantMetric {
    pub fn new(g: Matrix) -> Result<InvariantMetric, HomogError> {
        if !g.is_symmetric() {
            return Err(HomogError::NotPositiveDefinite);
        }
        let minors = g.leading_minors();
        let ok = if g.backend().is_exact() {
            minors.iter().all(Scalar::is_positive)
        } else {
            let scale = g.max_abs();
            minors
                .iter()
                .enumerate()
                .all(|(k, m)| m.to_f64() > 1e-12 * scale.powi(k as i32 + 1))
        };
        if !ok {
            return Err(HomogError::NotPositiveDefinite);
        }
        Ok(InvariantMetric { g })
    }

    pub fn diagonal(values: &[Scalar]) -> Result<InvariantMetric, HomogError> {
        InvariantMetric::new(Matrix::diag(values))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn inner(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let gy = self.g.mul_vec(y);
        x.iter().zip(&gy).fold(self.g.backend().zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scaled(&self, c: &Scalar) -> Result<InvariantMetric, HomogError> {
        InvariantMetric::new(self.g.scale(c))
    }

    pub fn to_backend(&self, backend: Backend) -> Result<InvariantMetric, HomogError> {
        Ok(InvariantMetric {
            g: self.g.to_backend(backend)?,
        })
    }
}

/// Almost complex structure `J` on `m`, `J² = −Id`, orthogonal for the
/// metric it was validated against.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantAcs {
    j: Matrix,
    signs: Option<Vec<i8>>,
}

impl InvariantAcs {
    pub fn new(j: Matrix, metric: &InvariantMetric) -> Result<InvariantAcs, HomogError> {
        let n = metric.dim();
        if j.rows() != n || j.cols() != n {
            return Err(HomogError::InconsistentInputs(format!(
                "J is {}x{}, metric is {n}x{n}",
                j.rows(),
                j.cols()
            )));
        }
        let tol = 1e-10 * j.max_abs().max(1.0).powi(2) * metric.matrix().max_abs().max(1.0);
        let small = |m: &Matrix| {
            if m.backend().is_exact() {
                m.is_zero()
            } else {
                m.max_abs() <= tol
            }
        };
        let id = Matrix::identity(n, j.backend());
        if !small(&(&j * &j).add(&id)) {
            return Err(HomogError::NotComplexStructure);
        }
        let g = metric.matrix();
        if !small(&(&(&j.transpose() * g) * &j).sub(g)) {
            return Err(HomogError::NotCompatible);
        }
        Ok(InvariantAcs { j, signs: None })
    }

    /// Attach the sign pattern a family builder used to produce `J`.
    pub fn with_signs(mut self, signs: Vec<i8>) -> InvariantAcs {
        self.signs = Some(signs);
        self
    }

    pub fn matrix(&self) -> &Matrix {
        &self.j
    }

    pub fn signs(&self) -> Option<&[i8]> {
        self.signs.as_deref()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.j.mul_vec(v)
    }

    pub fn neg(&self) -> InvariantAcs {
        InvariantAcs {
            j: self.j.neg(),
            signs: self.signs.as_ref().map(|s| s.iter().map(|x| -x).collect()),
        }
    }

    pub fn to_backend(&self, backend: Backend) -> Result<InvariantAcs, HomogError> {
        Ok(InvariantAcs {
            j: self.j.to_backend(backend)?,
            signs: self.signs.clone(),
        })
    }
}

/// Lie algebra, reductive split, metric on `m` and optional `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousModel {
    name: String,
    lie: LieAlgebraData,
    split: ReductiveSplit,
    metric: InvariantMetric,
    acs: Option<InvariantAcs>,
    brackets: Tensor3,
}

impl HomogeneousModel {
    /// Assemble and validate: metric and `J` must be `ad(h)`-invariant.
    pub fn new(
        name: impl Into<String>,
        lie: LieAlgebraData,
        split: ReductiveSplit,
        metric: InvariantMetric,
        acs: Option<InvariantAcs>,
    ) -> Result<HomogeneousModel, HomogError> {
        let md = split.m_dim();
        if metric.dim() != md {
            return Err(HomogError::InconsistentInputs(format!(
                "metric is {}-dimensional, m is {md}-dimensional",
                metric.dim()
            )));
        }
        if let Some(j) = &acs {
            if j.matrix().rows() != md {
                return Err(HomogError::InconsistentInputs("J does not act on m".into()));
            }
        }
        let brackets = Tensor3::from_fn(md, |a, b, c| {
            lie.c(split.m()[a], split.m()[b], split.m()[c]).clone()
        });
        let model = HomogeneousModel {
            name: name.into(),
            lie,
            split,
            metric,
            acs,
            brackets,
        };
        model.check_isotropy_invariance()?;
        Ok(model)
    }

    fn check_isotropy_invariance(&self) -> Result<(), HomogError> {
        let md = self.split.m_dim();
        let exact = self.backend().is_exact();
        let g = self.metric.matrix();
        for &hi in self.split.h() {
            // ad(h) restricted to m, column convention
            let ad = Matrix::from_fn(md, md, |c, b| {
                self.lie.c(hi, self.split.m()[b], self.split.m()[c]).clone()
            });
            let tol = 1e-10 * ad.max_abs().max(1.0) * g.max_abs().max(1.0);
            let small = |m: &Matrix| if exact { m.is_zero() } else { m.max_abs() <= tol };
            let skew = (&ad.transpose() * g).add(&(g * &ad));
            if !small(&skew) {
                return Err(HomogError::NotInvariant(format!(
                    "metric under ad of basis element {hi}"
                )));
            }
            if let Some(j) = &self.acs {
                let comm = (&ad * j.matrix()).sub(&(j.matrix() * &ad));
                if !small(&comm) {
                    return Err(HomogError::NotInvariant(format!("J under ad of basis element {hi}")));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    pub fn split(&self) -> &ReductiveSplit {
        &self.split
    }

    pub fn metric(&self) -> &InvariantMetric {
        &self.metric
    }

    pub fn acs(&self) -> Option<&InvariantAcs> {
        self.acs.as_ref()
    }

    pub fn m_dim(&self) -> usize {
        self.split.m_dim()
    }

    pub fn backend(&self) -> Backend {
        let mut b = self.lie.backend();
        b = b.join(self.metric.matrix().backend()).expect("validated");
        if let Some(j) = &self.acs {
            b = b.join(j.matrix().backend()).expect("validated");
        }
        b
    }

    /// `[X_a, X_b]_m` coordinates, `t[a][b][c]`.
    pub fn m_brackets(&self) -> &Tensor3 {
        &self.brackets
    }

    pub fn m_bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let md = self.m_dim();
        let b = x[0].backend().join(y[0].backend()).expect("compatible vectors");
        let mut out = vec![b.zero(); md];
        for a in 0..md {
            if x[a].is_zero() {
                continue;
            }
            for c in 0..md {
                if y[c].is_zero() {
                    continue;
                }
                let xy = &x[a] * &y[c];
                for (k, o) in out.iter_mut().enumerate() {
                    let s = self.brackets.get(a, c, k);
                    if !s.is_zero() {
                        *o += &(&xy * s);
                    }
                }
            }
        }
        out
    }

    /// Largest input coefficient (structure constants, metric, `J`).
    pub fn input_scale(&self) -> f64 {
        let mut s = self.lie.constants().max_abs().max(self.metric.matrix().max_abs());
        if let Some(j) = &self.acs {
            s = s.max(j.matrix().max_abs());
        }
        s
    }

    pub fn with_metric(&self, metric: InvariantMetric) -> Result<HomogeneousModel, HomogError> {
        let acs = match &self.acs {
            Some(j) => Some(InvariantAcs::new(j.matrix().clone(), &metric)?.with_signs_opt(j.signs())),
            None => None,
        };
        HomogeneousModel::new(self.name.clone(), self.lie.clone(), self.split.clone(), metric, acs)
    }

    pub fn with_acs(&self, acs: Option<InvariantAcs>) -> Result<HomogeneousModel, HomogError> {
        HomogeneousModel::new(
            self.name.clone(),
            self.lie.clone(),
            self.split.clone(),
            self.metric.clone(),
            acs,
        )
    }

    pub fn to_backend(&self, backend: Backend) -> Result<HomogeneousModel, HomogError> {
        let acs = self.acs.as_ref().map(|j| j.to_backend(backend)).transpose()?;
        HomogeneousModel::new(
            self.name.clone(),
            self.lie.to_backend(backend)?,
            self.split.clone(),
            self.metric.to_backend(backend)?,
            acs,
        )
    }

    /// Coframe table on `m`: `dθ^k = −Σ_{a<b} [X_a,X_b]_m^k θ^a∧θ^b`.
    ///
    /// The isotropy part of the brackets is dropped, so the induced `d` is
    /// only meaningful on invariant forms.
    pub fn coframe(&self) -> Result<CoframeDifferential, HomogError> {
        let md = self.m_dim();
        let b = self.lie.backend();
        let mut table = Vec::with_capacity(md);
        for k in 0..md {
            let mut terms = Vec::new();
            for a in 0..md {
                for c in a + 1..md {
                    let v = self.brackets.get(a, c, k);
                    if !v.is_zero() {
                        terms.push((vec![a, c], -v));
                    }
                }
            }
            table.push(KForm::from_terms(md, 2, b, terms)?);
        }
        Ok(CoframeDifferential::new_unchecked(table)?)
    }

    /// `ω(X, Y) = g(JX, Y)`.
    pub fn kahler_form(&self) -> Result<KForm, HomogError> {
        let j = self
            .acs
            .as_ref()
            .ok_or_else(|| HomogError::InconsistentInputs("model has no J".into()))?;
        let om = &j.matrix().transpose() * self.metric.matrix();
        Ok(KForm::from_skew_matrix(&om))
    }
}

impl InvariantAcs {
    fn with_signs_opt(self, signs: Option<&[i8]>) -> InvariantAcs {
        match signs {
            Some(s) => self.with_signs(s.to_vec()),
            None => self,
        }
    }
}
