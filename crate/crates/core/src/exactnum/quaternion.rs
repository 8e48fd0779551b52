use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Backend, Scalar};

/// `w + x i + y j + z k` with `i² = j² = k² = ijk = −1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion {
    pub w: Scalar,
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl Quaternion {
    pub fn new(w: Scalar, x: Scalar, y: Scalar, z: Scalar) -> Quaternion {
        Quaternion { w, x, y, z }
    }

    pub fn from_array(c: [Scalar; 4]) -> Quaternion {
        let [w, x, y, z] = c;
        Quaternion { w, x, y, z }
    }

    pub fn to_array(&self) -> [Scalar; 4] {
        [self.w.clone(), self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn zero(b: Backend) -> Quaternion {
        Quaternion::new(b.zero(), b.zero(), b.zero(), b.zero())
    }

    /// Basis unit `1, i, j, k` for `idx = 0..4`.
    pub fn unit(idx: usize, b: Backend) -> Quaternion {
        let mut c = [b.zero(), b.zero(), b.zero(), b.zero()];
        c[idx] = b.one();
        Quaternion::from_array(c)
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    /// `|q|² = q q*`.
    pub fn norm2(&self) -> Scalar {
        &self.w * &self.w + &self.x * &self.x + &self.y * &self.y + &self.z * &self.z
    }

    /// Euclidean pairing `Re(p q*)`.
    pub fn dot(&self, other: &Quaternion) -> Scalar {
        &self.w * &other.w + &self.x * &other.x + &self.y * &other.y + &self.z * &other.z
    }

    pub fn scale(&self, c: &Scalar) -> Quaternion {
        Quaternion::new(&self.w * c, &self.x * c, &self.y * c, &self.z * c)
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, q: &Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            &p.w * &q.w - &p.x * &q.x - &p.y * &q.y - &p.z * &q.z,
            &p.w * &q.x + &p.x * &q.w + &p.y * &q.z - &p.z * &q.y,
            &p.w * &q.y - &p.x * &q.z + &p.y * &q.w + &p.z * &q.x,
            &p.w * &q.z + &p.x * &q.y - &p.y * &q.x + &p.z * &q.w,
        )
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, q: &Quaternion) -> Quaternion {
        Quaternion::new(&self.w + &q.w, &self.x + &q.x, &self.y + &q.y, &self.z + &q.z)
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, q: &Quaternion) -> Quaternion {
        Quaternion::new(&self.w - &q.w, &self.x - &q.x, &self.y - &q.y, &self.z - &q.z)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})k", self.w, self.x, self.y, self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let b = Backend::Rational;
        let (one, i, j, k) = (
            Quaternion::unit(0, b),
            Quaternion::unit(1, b),
            Quaternion::unit(2, b),
            Quaternion::unit(3, b),
        );
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&(&i * &j) * &k, -&one);
        assert_eq!(&i * &i, -&one);
    }

    #[test]
    fn norm_is_multiplicative() {
        let b = Backend::Rational;
        let p = Quaternion::new(b.from_i64(1), b.from_ratio(-2, 3), b.from_i64(5), b.from_i64(0));
        let q = Quaternion::new(b.from_i64(-4), b.from_i64(1), b.from_ratio(1, 2), b.from_i64(7));
        assert_eq!((&p * &q).norm2(), &p.norm2() * &q.norm2());
        assert_eq!(&p * &p.conj(), Quaternion::unit(0, b).scale(&p.norm2()));
    }
}
