use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumError;

/// Arithmetic backend carried by every [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Rational,
    /// `Q(√d)` for a fixed square-free `d > 1`.
    QuadExt(u64),
    Float,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Float)
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        self.from_ratio(n, 1)
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        match self {
            Backend::Rational => Scalar::Rational(r),
            Backend::QuadExt(d) => Scalar::Quad(QuadExt::new(r, BigRational::zero(), d)),
            Backend::Float => Scalar::Float(num as f64 / den as f64),
        }
    }

    /// Explicit conversion of a float into this backend. Exact backends get the
    /// exact binary value of `x`.
    pub fn from_f64(self, x: f64) -> Scalar {
        match self {
            Backend::Float => Scalar::Float(x),
            exact => {
                let r = BigRational::from_float(x).expect("finite float");
                Scalar::Rational(r).to_backend(exact).expect("rational lifts to any exact backend")
            }
        }
    }

    /// Least common backend of two values, or an error when they cannot meet.
    pub fn join(self, other: Backend) -> Result<Backend, NumError> {
        use Backend::*;
        match (self, other) {
            (Rational, Rational) => Ok(Rational),
            (Rational, QuadExt(d)) | (QuadExt(d), Rational) => Ok(QuadExt(d)),
            (QuadExt(a), QuadExt(b)) if a == b => Ok(QuadExt(a)),
            (QuadExt(a), QuadExt(b)) => Err(NumError::ExtensionMismatch(a, b)),
            (Float, Float) => Ok(Float),
            _ => Err(NumError::MixedBackend),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => write!(f, "rational"),
            Backend::QuadExt(d) => write!(f, "quadext({d})"),
            Backend::Float => write!(f, "float"),
        }
    }
}

/// `a + b√d` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        assert!(d > 1, "quadratic extension needs d > 1");
        QuadExt { a, b, d }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }

    fn signum(&self) -> i8 {
        let sa = rsign(&self.a);
        let sb = rsign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with d b²
        match self.norm().cmp(&BigRational::zero()) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    fn to_f64(&self) -> f64 {
        rat_f64(&self.a) + rat_f64(&self.b) * (self.d as f64).sqrt()
    }
}

fn rsign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back for huge num/den
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// The single numeric currency: exact rational, exact element of `Q(√d)`, or
/// `f64`.
///
/// Arithmetic between a rational and a `Q(√d)` value promotes losslessly.
/// Combining two different extensions, or a float with an exact value, panics
/// through the operator traits; use the `try_*` methods to get an error
/// instead.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Quad(QuadExt),
    Float(f64),
}

macro_rules! binop_body {
    ($self:ident, $rhs:ident, $rat:expr, $quad:expr, $flt:expr) => {{
        match ($self, $rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational($rat(a, b)?)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float($flt(*a, *b))),
            (Scalar::Rational(a), Scalar::Quad(q)) => {
                let p = QuadExt::new(a.clone(), BigRational::zero(), q.d);
                Ok(Scalar::Quad($quad(&p, q)?))
            }
            (Scalar::Quad(p), Scalar::Rational(b)) => {
                let q = QuadExt::new(b.clone(), BigRational::zero(), p.d);
                Ok(Scalar::Quad($quad(p, &q)?))
            }
            (Scalar::Quad(p), Scalar::Quad(q)) => {
                if p.d != q.d {
                    Err(NumError::ExtensionMismatch(p.d, q.d))
                } else {
                    Ok(Scalar::Quad($quad(p, q)?))
                }
            }
            _ => Err(NumError::MixedBackend),
        }
    }};
}

fn quad_add(p: &QuadExt, q: &QuadExt) -> Result<QuadExt, NumError> {
    Ok(QuadExt::new(&p.a + &q.a, &p.b + &q.b, p.d))
}

fn quad_sub(p: &QuadExt, q: &QuadExt) -> Result<QuadExt, NumError> {
    Ok(QuadExt::new(&p.a - &q.a, &p.b - &q.b, p.d))
}

fn quad_mul(p: &QuadExt, q: &QuadExt) -> Result<QuadExt, NumError> {
    let d = BigRational::from_integer(BigInt::from(p.d));
    Ok(QuadExt::new(
        &p.a * &q.a + d * &p.b * &q.b,
        &p.a * &q.b + &p.b * &q.a,
        p.d,
    ))
}

fn quad_recip(q: &QuadExt) -> Result<QuadExt, NumError> {
    let n = q.norm();
    if n.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    Ok(QuadExt::new(&q.a / &n, -&q.b / &n, q.d))
}

fn quad_div(p: &QuadExt, q: &QuadExt) -> Result<QuadExt, NumError> {
    quad_mul(p, &quad_recip(q)?)
}

impl Scalar {
    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        Backend::Rational.from_ratio(num, den)
    }

    pub fn float(x: f64) -> Scalar {
        Scalar::Float(x)
    }

    /// `a + b√d` from small integer ratios.
    pub fn quad(a: (i64, i64), b: (i64, i64), d: u64) -> Scalar {
        Scalar::Quad(QuadExt::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
            d,
        ))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Quad(q) => Backend::QuadExt(q.d),
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.backend().is_exact()
    }

    pub fn zero_like(&self) -> Scalar {
        self.backend().zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.backend().one()
    }

    /// Literal zero test (no tolerance, also for floats).
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(q) => q.a.is_zero() && q.b.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Quad(q) => q.a.is_one() && q.b.is_zero(),
            Scalar::Float(x) => *x == 1.0,
        }
    }

    /// Exact sign for exact backends, IEEE sign (with 0 for ±0) for floats.
    pub fn signum(&self) -> i8 {
        match self {
            Scalar::Rational(r) => rsign(r),
            Scalar::Quad(q) => q.signum(),
            Scalar::Float(x) => {
                if *x > 0.0 {
                    1
                } else if *x < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => rat_f64(r),
            Scalar::Quad(q) => q.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Quad(q) if q.b.is_zero() => Some(&q.a),
            _ => None,
        }
    }

    /// Explicit backend conversion. Exact → float is always allowed; float →
    /// exact takes the exact binary value; `Q(√d)` → rational only when the
    /// surd part vanishes.
    pub fn to_backend(&self, target: Backend) -> Result<Scalar, NumError> {
        match (self, target) {
            (s, t) if s.backend() == t => Ok(s.clone()),
            (s, Backend::Float) => Ok(Scalar::Float(s.to_f64())),
            (Scalar::Float(x), exact) => Ok(exact.from_f64(*x)),
            (Scalar::Rational(r), Backend::QuadExt(d)) => Ok(Scalar::Quad(QuadExt::new(
                r.clone(),
                BigRational::zero(),
                d,
            ))),
            (Scalar::Quad(q), Backend::Rational) if q.b.is_zero() => {
                Ok(Scalar::Rational(q.a.clone()))
            }
            (Scalar::Quad(q), Backend::QuadExt(d)) if q.b.is_zero() => Ok(Scalar::Quad(
                QuadExt::new(q.a.clone(), BigRational::zero(), d),
            )),
            (Scalar::Quad(q), Backend::QuadExt(d)) => Err(NumError::ExtensionMismatch(q.d, d)),
            (Scalar::Quad(q), Backend::Rational) => Err(NumError::NotRepresentable(format!(
                "{} is irrational",
                Scalar::Quad(q.clone())
            ))),
            _ => unreachable!(),
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        binop_body!(
            self,
            rhs,
            |a: &BigRational, b: &BigRational| Ok::<_, NumError>(a + b),
            quad_add,
            |a: f64, b: f64| a + b
        )
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        binop_body!(
            self,
            rhs,
            |a: &BigRational, b: &BigRational| Ok::<_, NumError>(a - b),
            quad_sub,
            |a: f64, b: f64| a - b
        )
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        binop_body!(
            self,
            rhs,
            |a: &BigRational, b: &BigRational| Ok::<_, NumError>(a * b),
            quad_mul,
            |a: f64, b: f64| a * b
        )
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        if rhs.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        binop_body!(
            self,
            rhs,
            |a: &BigRational, b: &BigRational| Ok::<_, NumError>(a / b),
            quad_div,
            |a: f64, b: f64| a / b
        )
    }

    pub fn recip(&self) -> Result<Scalar, NumError> {
        self.one_like().try_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Square root, staying exact when possible.
    ///
    /// A rational `r ≥ 0` maps to a rational or to `s√f` in `Q(√f)` with `f`
    /// the square-free part of `r`. An element of `Q(√d)` must have a square
    /// root inside the same field.
    pub fn sqrt(&self) -> Result<Scalar, NumError> {
        if self.is_negative() {
            return Err(NumError::NegativeSqrt);
        }
        match self {
            Scalar::Float(x) => Ok(Scalar::Float(x.sqrt())),
            Scalar::Rational(r) => Ok(rational_sqrt(r)),
            Scalar::Quad(q) => quad_sqrt(q),
        }
    }

    /// Parse a scalar literal into `backend`.
    ///
    /// Accepts integers, `p/q`, decimals with optional exponent and `sqrt(..)`
    /// combined with `+ - * /` and parentheses, e.g. `3/2`, `-0.25`,
    /// `sqrt(3)/2`, `1/2-3/4*sqrt(3)`.
    pub fn parse(text: &str, backend: Backend) -> Result<Scalar, NumError> {
        super::parse::parse_scalar(text, backend)
    }

    /// Parse an exact literal into the smallest backend that holds it
    /// (rational, or `Q(√d)` when a surd survives).
    pub fn parse_exact(text: &str) -> Result<Scalar, NumError> {
        super::parse::parse_natural(text)
    }

    pub(crate) fn from_rational(r: BigRational) -> Scalar {
        Scalar::Rational(r)
    }


    /// Largest absolute value, as `f64`, over an iterator of scalars.
    pub fn max_abs<'a, I: IntoIterator<Item = &'a Scalar>>(it: I) -> f64 {
        it.into_iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }
}

/// `n = s² f` with `f` square-free (best effort for huge cofactors).
pub(crate) fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.sign() == Sign::Plus);
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            square *= &p;
        }
        if count % 2 == 1 {
            free *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
        } else {
            free *= rest;
        }
    }
    (square, free)
}

fn rational_sqrt(r: &BigRational) -> Scalar {
    if r.is_zero() {
        return Scalar::Rational(BigRational::zero());
    }
    // √(p/q) = √(pq)/q
    let pq = r.numer() * r.denom();
    let (s, f) = squarefree_split(&pq);
    let coeff = BigRational::new(s, r.denom().clone());
    if f.is_one() {
        Scalar::Rational(coeff)
    } else {
        let d = f.to_u64().expect("radicand fits in u64");
        Scalar::Quad(QuadExt::new(BigRational::zero(), coeff, d))
    }
}

fn exact_rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    match rational_sqrt(r) {
        Scalar::Rational(x) => Some(x),
        _ => None,
    }
}

fn quad_sqrt(q: &QuadExt) -> Result<Scalar, NumError> {
    if q.b.is_zero() {
        return match rational_sqrt(&q.a) {
            Scalar::Rational(x) => Ok(Scalar::Quad(QuadExt::new(x, BigRational::zero(), q.d))),
            Scalar::Quad(root) if root.d == q.d => Ok(Scalar::Quad(root)),
            Scalar::Quad(root) => Err(NumError::ExtensionMismatch(q.d, root.d)),
            Scalar::Float(_) => unreachable!(),
        };
    }
    // (x + y√d)² = a + b√d  ⇔  x² + d y² = a, 2xy = b
    let not_rep = || NumError::NotRepresentable(format!("sqrt of {}", Scalar::Quad(q.clone())));
    let delta = exact_rational_sqrt(&q.norm()).ok_or_else(not_rep)?;
    let two = BigRational::from_integer(BigInt::from(2));
    for cand in [(&q.a + &delta) / &two, (&q.a - &delta) / &two] {
        if cand.is_zero() {
            continue;
        }
        if let Some(x) = exact_rational_sqrt(&cand) {
            let y = &q.b / (&two * &x);
            let root = QuadExt::new(x, y, q.d);
            let root = if root.signum() < 0 {
                QuadExt::new(-root.a, -root.b, root.d)
            } else {
                root
            };
            return Ok(Scalar::Quad(root));
        }
    }
    Err(not_rep())
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => false,
            _ => match self.try_sub(other) {
                Ok(diff) => diff.is_zero(),
                Err(_) => false,
            },
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        let diff = self.try_sub(other).ok()?;
        if let Scalar::Float(x) = diff {
            return x.partial_cmp(&0.0);
        }
        Some(diff.signum().cmp(&0))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
            Scalar::Quad(q) => {
                if q.b.is_zero() {
                    return write!(f, "{}", q.a);
                }
                let surd = if q.b.is_one() {
                    format!("sqrt({})", q.d)
                } else if (-&q.b).is_one() {
                    format!("-sqrt({})", q.d)
                } else {
                    format!("{}*sqrt({})", q.b, q.d)
                };
                if q.a.is_zero() {
                    write!(f, "{surd}")
                } else if surd.starts_with('-') {
                    write!(f, "{}{}", q.a, surd)
                } else {
                    write!(f, "{}+{}", q.a, surd)
                }
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Scalar {
        Scalar::Rational(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Scalar {
        Scalar::Float(x)
    }
}

impl Zero for Scalar {
    fn zero() -> Scalar {
        Scalar::int(0)
    }

    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

macro_rules! impl_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($method)),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl_op!(Add, add, try_add);
impl_op!(Sub, sub, try_sub);
impl_op!(Mul, mul, try_mul);
impl_op!(Div, div, try_div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quad(q) => Scalar::Quad(QuadExt::new(-&q.a, -&q.b, q.d)),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::int(0), |acc, x| acc + x)
    }
}
