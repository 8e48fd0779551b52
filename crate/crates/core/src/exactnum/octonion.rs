use std::ops::{Add, Mul, Sub};

use super::{Backend, Quaternion, Scalar};

/// Octonion `Σ cᵢ eᵢ`, stored as a pair of quaternions `(a, b) = a + b ℓ`
/// with `e₀..e₃ = 1, i, j, k` and `e₄..e₇ = ℓ, iℓ, jℓ, kℓ`.
///
/// Product (Cayley–Dickson): `(a, b)(c, d) = (ac − d* b, da + b c*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Octonion {
    a: Quaternion,
    b: Quaternion,
}

impl Octonion {
    pub fn new(c: [Scalar; 8]) -> Octonion {
        let [c0, c1, c2, c3, c4, c5, c6, c7] = c;
        Octonion {
            a: Quaternion::new(c0, c1, c2, c3),
            b: Quaternion::new(c4, c5, c6, c7),
        }
    }

    pub fn from_slice(c: &[Scalar]) -> Octonion {
        assert_eq!(c.len(), 8, "octonion needs 8 coefficients");
        Octonion::new(std::array::from_fn(|i| c[i].clone()))
    }

    /// Pure imaginary octonion from 7 coefficients on `e₁..e₇`.
    pub fn imaginary(v: &[Scalar]) -> Octonion {
        assert_eq!(v.len(), 7, "imaginary octonion needs 7 coefficients");
        let zero = v[0].zero_like();
        Octonion::new(std::array::from_fn(|i| if i == 0 { zero.clone() } else { v[i - 1].clone() }))
    }

    pub fn unit(idx: usize, backend: Backend) -> Octonion {
        Octonion::new(std::array::from_fn(|i| {
            if i == idx {
                backend.one()
            } else {
                backend.zero()
            }
        }))
    }

    pub fn coeffs(&self) -> [Scalar; 8] {
        let [c0, c1, c2, c3] = self.a.to_array();
        let [c4, c5, c6, c7] = self.b.to_array();
        [c0, c1, c2, c3, c4, c5, c6, c7]
    }

    pub fn real(&self) -> Scalar {
        self.a.w.clone()
    }

    /// Coefficients on `e₁..e₇`.
    pub fn imag(&self) -> Vec<Scalar> {
        self.coeffs()[1..].to_vec()
    }

    pub fn conj(&self) -> Octonion {
        Octonion {
            a: self.a.conj(),
            b: -&self.b,
        }
    }

    pub fn norm2(&self) -> Scalar {
        &self.a.norm2() + &self.b.norm2()
    }

    pub fn dot(&self, other: &Octonion) -> Scalar {
        &self.a.dot(&other.a) + &self.b.dot(&other.b)
    }

    pub fn scale(&self, c: &Scalar) -> Octonion {
        Octonion {
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }
}

impl Mul for &Octonion {
    type Output = Octonion;
    fn mul(self, q: &Octonion) -> Octonion {
        let (a, b) = (&self.a, &self.b);
        let (c, d) = (&q.a, &q.b);
        Octonion {
            a: &(a * c) - &(&d.conj() * b),
            b: &(d * a) + &(b * &c.conj()),
        }
    }
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, q: &Octonion) -> Octonion {
        Octonion {
            a: &self.a + &q.a,
            b: &self.b + &q.b,
        }
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, q: &Octonion) -> Octonion {
        Octonion {
            a: &self.a - &q.a,
            b: &self.b - &q.b,
        }
    }
}

/// Cross product on `ℝ⁷ = Im 𝕆`: `u × v = Im(uv)`.
pub fn cross7(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    (&Octonion::imaginary(u) * &Octonion::imaginary(v)).imag()
}

/// Nonzero coefficients of the G₂ 3-form `φ(x, y, z) = ⟨x, yz⟩` on `Im 𝕆`,
/// keyed by increasing triples of 0-based indices of `e₁..e₇`.
pub fn g2_phi_coefficients(backend: Backend) -> Vec<([usize; 3], Scalar)> {
    let mut out = Vec::new();
    for i in 0..7 {
        for j in i + 1..7 {
            for k in j + 1..7 {
                let prod = &Octonion::unit(j + 1, backend) * &Octonion::unit(k + 1, backend);
                let c = prod.coeffs()[i + 1].clone();
                if !c.is_zero() {
                    out.push(([i, j, k], c));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Octonion {
        Octonion::unit(i, Backend::Rational)
    }

    #[test]
    fn table_entries() {
        assert_eq!(&e(1) * &e(2), e(3));
        assert_eq!(&e(1) * &e(4), e(5));
        for i in 0..8 {
            assert_eq!(&e(0) * &e(i), e(i));
            assert_eq!(&e(i) * &e(0), e(i));
        }
        for i in 1..8 {
            assert_eq!(&e(i) * &e(i), e(0).scale(&Scalar::int(-1)));
            for j in 1..8 {
                if i != j {
                    assert_eq!(&e(i) * &e(j), (&e(j) * &e(i)).scale(&Scalar::int(-1)));
                }
            }
        }
    }

    #[test]
    fn basis_moufang() {
        // (xy)(zx) = x((yz)x) on all basis triples
        for x in 0..8 {
            for y in 0..8 {
                for z in 0..8 {
                    let lhs = &(&e(x) * &e(y)) * &(&e(z) * &e(x));
                    let rhs = &e(x) * &(&(&e(y) * &e(z)) * &e(x));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn phi_has_seven_lines() {
        let phi = g2_phi_coefficients(Backend::Rational);
        assert_eq!(phi.len(), 7);
        assert!(phi.contains(&([0, 1, 2], Scalar::int(1))));
        assert!(phi.contains(&([0, 5, 6], Scalar::int(-1))));
    }
}
