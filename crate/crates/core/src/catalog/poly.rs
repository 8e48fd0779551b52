//! Univariate polynomials over ℚ, just enough to find where a family of
//! polynomial residuals vanishes simultaneously.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in increasing degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn monic(&self) -> Poly {
        match self.0.last() {
            None => Poly::zero(),
            Some(lead) => Poly(self.0.iter().map(|c| c / lead).collect()),
        }
    }

    fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.0.last().unwrap().clone();
        let mut r = self.0.clone();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let q = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[i + k] = &r[i + k] - &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Monic gcd; the zero polynomial when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Poly {
        let n = xs.len();
        let mut acc = vec![BigRational::zero(); n];
        for i in 0..n {
            // basis polynomial ∏_{j≠i} (x − x_j)/(x_i − x_j)
            let mut basis = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for j in (0..n).filter(|&j| j != i) {
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (k, c) in basis.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * &xs[j];
                }
                basis = next;
                denom *= &xs[i] - &xs[j];
            }
            let scale = &ys[i] / denom;
            for (k, c) in basis.iter().enumerate() {
                acc[k] += c * &scale;
            }
        }
        Poly::new(acc)
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() {
            return Vec::new();
        }
        // integer coefficients, then strip the root at 0
        let lcm = self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.0.iter().map(|c| (c * &lcm).to_integer()).collect();
        let mut roots = Vec::new();
        if ints[0].is_zero() {
            roots.push(BigRational::zero());
            while ints.first().is_some_and(Zero::is_zero) {
                ints.remove(0);
            }
        }
        if ints.len() > 1 {
            let ps = divisors(&ints[0]);
            let qs = divisors(ints.last().unwrap());
            let reduced = Poly::new(ints.iter().map(|c| BigRational::from_integer(c.clone())).collect());
            for p in &ps {
                for q in &qs {
                    for sign in [1, -1] {
                        let x = BigRational::new(p * BigInt::from(sign), q.clone());
                        if reduced.eval(&x).is_zero() && !roots.contains(&x) {
                            roots.push(x);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}
