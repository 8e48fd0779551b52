//! Alternating forms with constant coefficients on a based vector space.
//!
//! A form of degree `k` is stored as `Σ c_I θ^I` over strictly increasing
//! index tuples `I`. Evaluation follows the determinant convention
//! `(θ^{i₁}∧…∧θ^{i_k})(v₁,…,v_k) = det(θ^{i_a}(v_b))`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactnum::{Backend, Matrix, NumError, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("interior product of a 0-form")]
    DegreeZero,
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("d² ≠ 0 on coframe element {0}")]
    NotClosed(usize),
    #[error("cannot parse form: {0}")]
    Parse(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Sort `idx` in place by adjacent transpositions; returns the parity sign,
/// or `None` when an index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    let n = idx.len();
    for i in 0..n {
        for j in 0..n - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            } else if idx[j] == idx[j + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    backend: Backend,
    coeffs: BTreeMap<Vec<usize>, Scalar>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize, backend: Backend) -> KForm {
        KForm {
            dim,
            degree,
            backend,
            coeffs: BTreeMap::new(),
        }
    }

    /// Constant function `c` as a 0-form.
    pub fn constant(dim: usize, c: Scalar) -> KForm {
        let mut f = KForm::zero(dim, 0, c.backend());
        if !c.is_zero() {
            f.coeffs.insert(Vec::new(), c);
        }
        f
    }

    /// `c · θ^{i₁}∧…∧θ^{i_k}` for indices in any order (zero if one repeats).
    pub fn monomial(dim: usize, indices: &[usize], c: Scalar) -> Result<KForm, FormError> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(FormError::IndexOutOfRange(bad, dim));
        }
        let mut f = KForm::zero(dim, indices.len(), c.backend());
        let mut key = indices.to_vec();
        if let Some(sign) = sort_with_sign(&mut key) {
            let c = if sign < 0 { -c } else { c };
            if !c.is_zero() {
                f.coeffs.insert(key, c);
            }
        }
        Ok(f)
    }

    /// `θ^{i₁}∧…∧θ^{i_k}` with unit coefficient.
    pub fn basis(dim: usize, indices: &[usize], backend: Backend) -> KForm {
        KForm::monomial(dim, indices, backend.one()).expect("basis indices in range")
    }

    /// `θ⁰∧…∧θ^{n−1}`.
    pub fn volume(dim: usize, backend: Backend) -> KForm {
        KForm::basis(dim, &(0..dim).collect::<Vec<_>>(), backend)
    }

    /// 1-form `Σ vᵢ θⁱ`.
    pub fn one_form(v: &[Scalar]) -> KForm {
        let mut f = KForm::zero(v.len(), 1, v[0].backend());
        for (i, c) in v.iter().enumerate() {
            f.insert(vec![i], c.clone());
        }
        f
    }

    /// 2-form `Σ_{i<j} A[i][j] θ^i∧θ^j` from a (skew) matrix.
    pub fn from_skew_matrix(a: &Matrix) -> KForm {
        let n = a.rows();
        let mut f = KForm::zero(n, 2, a.backend());
        for i in 0..n {
            for j in i + 1..n {
                f.insert(vec![i, j], a[(i, j)].clone());
            }
        }
        f
    }

    /// Build from `(indices, coefficient)` pairs, summing repeated keys.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        backend: Backend,
        terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
    ) -> Result<KForm, FormError> {
        let mut f = KForm::zero(dim, degree, backend);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(FormError::WrongDegree {
                    expected: degree,
                    got: idx.len(),
                });
            }
            let m = KForm::monomial(dim, &idx, c.to_backend(backend)?)?;
            f = f.try_add(&m)?;
        }
        Ok(f)
    }

    fn insert(&mut self, key: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&key) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.coeffs.remove(&key);
                }
            }
            None => {
                self.coeffs.insert(key, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.coeffs.iter()
    }

    /// Coefficient on `θ^I` for indices in any order (alternating sign applied).
    pub fn coeff(&self, indices: &[usize]) -> Scalar {
        let mut key = indices.to_vec();
        match sort_with_sign(&mut key) {
            None => self.backend.zero(),
            Some(sign) => {
                let c = self.coeffs.get(&key).cloned().unwrap_or_else(|| self.backend.zero());
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        Scalar::max_abs(self.coeffs.values())
    }

    pub fn to_backend(&self, backend: Backend) -> Result<KForm, FormError> {
        let mut f = KForm::zero(self.dim, self.degree, backend);
        for (k, c) in &self.coeffs {
            f.insert(k.clone(), c.to_backend(backend)?);
        }
        Ok(f)
    }

    /// Drop float coefficients with `|c| ≤ eps` (no-op for exact forms).
    pub fn chop(&self, eps: f64) -> KForm {
        let mut f = self.clone();
        f.coeffs.retain(|_, c| c.is_exact() || c.abs_f64() > eps);
        f
    }

    fn compatible(&self, other: &KForm) -> Result<Backend, FormError> {
        if self.dim != other.dim {
            return Err(FormError::DimMismatch(self.dim, other.dim));
        }
        Ok(self.backend.join(other.backend)?)
    }

    pub fn try_add(&self, other: &KForm) -> Result<KForm, FormError> {
        let backend = self.compatible(other)?;
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch(self.degree, other.degree));
        }
        let mut f = self.to_backend(backend)?;
        for (k, c) in &other.coeffs {
            f.insert(k.clone(), c.to_backend(backend)?);
        }
        Ok(f)
    }

    pub fn try_sub(&self, other: &KForm) -> Result<KForm, FormError> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> KForm {
        let backend = self.backend.join(c.backend()).expect("compatible scalar");
        let mut f = KForm::zero(self.dim, self.degree, backend);
        for (k, v) in &self.coeffs {
            f.insert(k.clone(), v * c);
        }
        f
    }

    pub fn neg(&self) -> KForm {
        let mut f = self.clone();
        for c in f.coeffs.values_mut() {
            *c = -&*c;
        }
        f
    }

    /// Exterior product; the zero form of degree `deg a + deg b` when that
    /// exceeds the dimension.
    pub fn wedge(&self, other: &KForm) -> Result<KForm, FormError> {
        let backend = self.compatible(other)?;
        let degree = self.degree + other.degree;
        let mut f = KForm::zero(self.dim, degree, backend);
        if degree > self.dim {
            return Ok(f);
        }
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let mut key: Vec<usize> = ka.iter().chain(kb.iter()).copied().collect();
                if let Some(sign) = sort_with_sign(&mut key) {
                    let c = ca * cb;
                    f.insert(key, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(f)
    }

    /// Interior product `ι(v)` with a coefficient vector `v`.
    pub fn interior(&self, v: &[Scalar]) -> Result<KForm, FormError> {
        if self.degree == 0 {
            return Err(FormError::DegreeZero);
        }
        if v.len() != self.dim {
            return Err(FormError::DimMismatch(self.dim, v.len()));
        }
        let mut backend = self.backend;
        for x in v {
            backend = backend.join(x.backend())?;
        }
        let mut f = KForm::zero(self.dim, self.degree - 1, backend);
        for (k, c) in &self.coeffs {
            for (p, &i) in k.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let mut rest = k.clone();
                rest.remove(p);
                let t = c * &v[i];
                f.insert(rest, if p % 2 == 1 { -t } else { t });
            }
        }
        Ok(f)
    }

    /// Interior product with the `i`-th basis vector.
    pub fn interior_basis(&self, i: usize) -> Result<KForm, FormError> {
        if i >= self.dim {
            return Err(FormError::IndexOutOfRange(i, self.dim));
        }
        let mut v = vec![self.backend.zero(); self.dim];
        v[i] = self.backend.one();
        self.interior(&v)
    }

    /// Value on `k` vectors (determinant convention).
    pub fn eval(&self, vectors: &[Vec<Scalar>]) -> Result<Scalar, FormError> {
        if vectors.len() != self.degree {
            return Err(FormError::WrongDegree {
                expected: self.degree,
                got: vectors.len(),
            });
        }
        let mut f = self.clone();
        for v in vectors {
            f = f.interior(v)?;
        }
        Ok(f.coeffs.get(&Vec::new()).cloned().unwrap_or_else(|| f.backend.zero()))
    }

    /// Substitute `θ^i = Σ_j A[i][j] θ'^j` and express in the primed coframe.
    pub fn substitute(&self, a: &Matrix) -> Result<KForm, FormError> {
        if a.rows() != self.dim {
            return Err(FormError::DimMismatch(self.dim, a.rows()));
        }
        let n = a.cols();
        let backend = self.backend.join(a.backend())?;
        let rows: Vec<KForm> = (0..self.dim).map(|i| KForm::one_form(&a.row(i))).collect();
        let mut out = KForm::zero(n, self.degree, backend);
        for (k, c) in &self.coeffs {
            let mut term = KForm::constant(n, c.to_backend(backend)?);
            for &i in k {
                term = term.wedge(&rows[i])?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Skew matrix `A[i][j] = ω(eᵢ, eⱼ)` of a 2-form.
    pub fn to_skew_matrix(&self) -> Result<Matrix, FormError> {
        if self.degree != 2 {
            return Err(FormError::WrongDegree {
                expected: 2,
                got: self.degree,
            });
        }
        Ok(Matrix::from_fn(self.dim, self.dim, |i, j| self.coeff(&[i, j])))
    }

    /// Exterior derivative of an invariant (constant-coefficient) form.
    pub fn d(&self, cd: &CoframeDifferential) -> Result<KForm, FormError> {
        invariant_d(self, cd)
    }

    /// Text rendering as signed monomials, e.g. `+3/2 e1^f1 -1 e2^e3`.
    pub fn render(&self, labels: &[&str]) -> String {
        assert_eq!(labels.len(), self.dim, "one label per coframe index");
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in &self.coeffs {
            let mono = if k.is_empty() {
                "1".to_string()
            } else {
                k.iter().map(|&i| labels[i]).collect::<Vec<_>>().join("^")
            };
            let (sign, mag) = if c.is_negative() { ('-', -c) } else { ('+', c.clone()) };
            let text = mag.to_string();
            let text = if text.contains(['+', '-']) {
                format!("({text})")
            } else {
                text
            };
            parts.push(format!("{sign}{text} {mono}"));
        }
        parts.join(" ")
    }

    /// Inverse of [`KForm::render`].
    pub fn parse(
        text: &str,
        labels: &[&str],
        degree: usize,
        backend: Backend,
    ) -> Result<KForm, FormError> {
        let dim = labels.len();
        let err = || FormError::Parse(text.to_string());
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["0"] {
            return Ok(KForm::zero(dim, degree, backend));
        }
        if tokens.len() % 2 != 0 {
            return Err(err());
        }
        let mut f = KForm::zero(dim, degree, backend);
        for pair in tokens.chunks(2) {
            let (coef, mono) = (pair[0], pair[1]);
            let (neg, body) = match coef.as_bytes().first() {
                Some(b'+') => (false, &coef[1..]),
                Some(b'-') => (true, &coef[1..]),
                _ => return Err(err()),
            };
            let c = Scalar::parse(body, backend)?;
            let c = if neg { -c } else { c };
            let idx: Vec<usize> = if mono == "1" {
                Vec::new()
            } else {
                mono.split('^')
                    .map(|l| labels.iter().position(|x| *x == l).ok_or_else(err))
                    .collect::<Result<_, _>>()?
            };
            if idx.len() != degree {
                return Err(err());
            }
            f = f.try_add(&KForm::monomial(dim, &idx, c)?)?;
        }
        Ok(f)
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        write!(f, "{}", self.render(&refs))
    }
}

/// Table of `dθⁱ` for a left-invariant coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct CoframeDifferential {
    table: Vec<KForm>,
}

impl CoframeDifferential {
    /// Validated table: every entry is a 2-form on `table.len()` indices and
    /// `d(dθⁱ) = 0` for every `i`.
    pub fn new(table: Vec<KForm>) -> Result<CoframeDifferential, FormError> {
        let cd = CoframeDifferential::new_unchecked(table)?;
        cd.jacobi_check()?;
        Ok(cd)
    }

    /// Shape-checked table without the `d² = 0` test on the coframe itself.
    ///
    /// Used for reductive quotients, where the table only drops the
    /// isotropy part of the brackets: the induced `d` is then correct on
    /// invariant forms but not on arbitrary coframe monomials.
    pub fn new_unchecked(table: Vec<KForm>) -> Result<CoframeDifferential, FormError> {
        let n = table.len();
        for t in &table {
            if t.dim() != n {
                return Err(FormError::DimMismatch(n, t.dim()));
            }
            if t.degree() != 2 {
                return Err(FormError::WrongDegree {
                    expected: 2,
                    got: t.degree(),
                });
            }
        }
        Ok(CoframeDifferential { table })
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn of(&self, i: usize) -> &KForm {
        &self.table[i]
    }

    /// `d(dθⁱ) = 0` for every coframe element.
    pub fn jacobi_check(&self) -> Result<(), FormError> {
        for (i, t) in self.table.iter().enumerate() {
            if !invariant_d(t, self)?.is_zero() {
                return Err(FormError::NotClosed(i));
            }
        }
        Ok(())
    }

    /// The table for the primed coframe `θ' = B θ`, `B` invertible.
    pub fn change_coframe(&self, b: &Matrix) -> Result<CoframeDifferential, FormError> {
        // θ = B⁻¹θ',  dθ'^i = Σ_j B[i][j] dθ^j rewritten in θ'
        let binv = b.inverse()?;
        let n = self.dim();
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = KForm::zero(n, 2, self.table[0].backend().join(b.backend())?);
            for j in 0..n {
                if !b[(i, j)].is_zero() {
                    acc = acc.try_add(&self.table[j].scale(&b[(i, j)]))?;
                }
            }
            table.push(acc.substitute(&binv)?);
        }
        CoframeDifferential::new_unchecked(table)
    }
}

/// `d` on a constant-coefficient form, by the Leibniz rule from `dθⁱ`.
pub fn invariant_d(a: &KForm, cd: &CoframeDifferential) -> Result<KForm, FormError> {
    if a.dim() != cd.dim() {
        return Err(FormError::DimMismatch(a.dim(), cd.dim()));
    }
    let n = a.dim();
    let backend = a.backend();
    let mut out = KForm::zero(n, a.degree() + 1, backend);
    if a.degree() + 1 > n {
        return Ok(out);
    }
    for (key, c) in a.terms() {
        for (p, &i) in key.iter().enumerate() {
            let head = KForm::monomial(n, &key[..p], c.clone())?;
            let tail = KForm::basis(n, &key[p + 1..], backend);
            let term = head.wedge(cd.of(i))?.wedge(&tail)?;
            out = if p % 2 == 1 { out.try_sub(&term)? } else { out.try_add(&term)? };
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: Backend = Backend::Rational;

    #[test]
    fn alternation() {
        let e1 = KForm::basis(6, &[0], R);
        assert!(e1.wedge(&e1).unwrap().is_zero());
        let a = KForm::basis(6, &[0, 3], R);
        let b = KForm::basis(6, &[1, 4], R);
        let ab = a.wedge(&b).unwrap();
        assert_eq!(ab.coeff(&[0, 3, 1, 4]), Scalar::int(1));
        assert_eq!(ab.coeff(&[0, 1, 3, 4]), Scalar::int(-1));
        assert_eq!(ab, b.wedge(&a).unwrap());
    }

    #[test]
    fn eval_is_determinant() {
        let f = KForm::basis(3, &[0, 1], R);
        let x = vec![Scalar::int(1), Scalar::int(2), Scalar::int(0)];
        let y = vec![Scalar::int(3), Scalar::int(4), Scalar::int(5)];
        assert_eq!(f.eval(&[x.clone(), y.clone()]).unwrap(), Scalar::int(-2));
        assert_eq!(f.eval(&[y, x]).unwrap(), Scalar::int(2));
        let vol = KForm::volume(3, R);
        let id: Vec<Vec<Scalar>> = (0..3)
            .map(|i| (0..3).map(|j| Scalar::int((i == j) as i64)).collect())
            .collect();
        assert_eq!(vol.eval(&id).unwrap(), Scalar::int(1));
    }

    #[test]
    fn render_round_trip() {
        let labels = ["e1", "e2", "e3", "f1", "f2", "f3"];
        let f = KForm::from_terms(
            6,
            2,
            Backend::QuadExt(3),
            vec![
                (vec![0, 3], Scalar::ratio(3, 2)),
                (vec![2, 1], Scalar::quad((1, 1), (-1, 2), 3)),
            ],
        )
        .unwrap();
        let text = f.render(&labels);
        assert_eq!(text, "+3/2 e1^f1 -(1-1/2*sqrt(3)) e2^e3");
        assert_eq!(KForm::parse(&text, &labels, 2, Backend::QuadExt(3)).unwrap(), f);
    }

    #[test]
    fn interior_twice_vanishes() {
        let f = KForm::from_terms(
            4,
            3,
            R,
            vec![(vec![0, 1, 2], Scalar::int(2)), (vec![1, 2, 3], Scalar::int(-5))],
        )
        .unwrap();
        let v = vec![Scalar::int(1), Scalar::int(-1), Scalar::int(3), Scalar::ratio(1, 2)];
        assert!(f.interior(&v).unwrap().interior(&v).unwrap().is_zero());
        assert_eq!(KForm::constant(4, Scalar::int(1)).interior(&v), Err(FormError::DegreeZero));
    }

    #[test]
    fn d_of_constant_is_zero() {
        let table = (0..3).map(|i| KForm::basis(3, &[(i + 1) % 3, (i + 2) % 3], R)).collect();
        let cd = CoframeDifferential::new(table).unwrap();
        assert!(KForm::constant(3, Scalar::int(5)).d(&cd).unwrap().is_zero());
        assert_eq!(KForm::basis(3, &[0], R).d(&cd).unwrap(), KForm::basis(3, &[1, 2], R));
    }
}
