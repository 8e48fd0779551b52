//! Real structure constants of su(3) and sp(2) computed from their matrix
//! models. The catalog uses frozen copies of these tables; the tests below
//! regenerate them and compare.

use crate::exactnum::{Backend, Quaternion, Scalar};

/// Gaussian integer `re + i·im`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Gauss {
    re: i64,
    im: i64,
}

impl Gauss {
    const ZERO: Gauss = Gauss { re: 0, im: 0 };

    fn mul(self, o: Gauss) -> Gauss {
        Gauss {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn add(self, o: Gauss) -> Gauss {
        Gauss {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    fn sub(self, o: Gauss) -> Gauss {
        Gauss {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }

    fn conj(self) -> Gauss {
        Gauss {
            re: self.re,
            im: -self.im,
        }
    }
}

type M3 = [[Gauss; 3]; 3];

fn m3_commutator(a: &M3, b: &M3) -> M3 {
    let mut out = [[Gauss::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, o) in row.iter_mut().enumerate() {
            for k in 0..3 {
                *o = o.add(a[i][k].mul(b[k][j])).sub(b[i][k].mul(a[k][j]));
            }
        }
    }
    out
}

/// `⟨a,b,c⟩`: strictly upper part `(a, b, c)` at `(0,1), (0,2), (1,2)`
/// minus its conjugate transpose.
fn flag_offdiag(slot: usize, z: Gauss) -> M3 {
    let (i, j) = [(0, 1), (0, 2), (1, 2)][slot];
    let mut m = [[Gauss::ZERO; 3]; 3];
    m[i][j] = z;
    m[j][i] = Gauss::ZERO.sub(z.conj());
    m
}

fn su3_basis() -> Vec<M3> {
    let i = Gauss { re: 0, im: 1 };
    let one = Gauss { re: 1, im: 0 };
    let mut h1 = [[Gauss::ZERO; 3]; 3];
    h1[0][0] = i;
    h1[1][1] = Gauss::ZERO.sub(i);
    let mut h2 = [[Gauss::ZERO; 3]; 3];
    h2[1][1] = i;
    h2[2][2] = Gauss::ZERO.sub(i);
    let mut out = vec![h1, h2];
    for slot in 0..3 {
        out.push(flag_offdiag(slot, one));
        out.push(flag_offdiag(slot, i));
    }
    out
}

/// Coordinates of a traceless anti-Hermitian matrix in [`su3_basis`].
fn su3_coords(m: &M3) -> Vec<i64> {
    // diag(i a1, i a2, i a3) = a1 h1 − a3 h2
    let mut c = vec![m[0][0].im, -m[2][2].im];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        c.push(m[i][j].re);
        c.push(m[i][j].im);
    }
    c
}

/// Nonzero `c[i][j][k]` with `i < j` for su(3) in the basis
/// `h1, h2, ⟨1,0,0⟩, ⟨i,0,0⟩, ⟨0,1,0⟩, ⟨0,i,0⟩, ⟨0,0,1⟩, ⟨0,0,i⟩`.
pub fn generate_su3() -> Vec<(usize, usize, usize, i64)> {
    let basis = su3_basis();
    let mut out = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            let br = m3_commutator(&basis[a], &basis[b]);
            let coords = su3_coords(&br);
            // the coordinates must reproduce the bracket
            let mut back = [[Gauss::ZERO; 3]; 3];
            for (k, &c) in coords.iter().enumerate() {
                for r in 0..3 {
                    for s in 0..3 {
                        back[r][s] = back[r][s].add(basis[k][r][s].mul(Gauss { re: c, im: 0 }));
                    }
                }
            }
            assert_eq!(back, br, "bracket left su(3)");
            for (k, c) in coords.into_iter().enumerate() {
                if c != 0 {
                    out.push((a, b, k, c));
                }
            }
        }
    }
    out
}

type HMat = [[Quaternion; 2]; 2];

fn hmat_commutator(a: &HMat, b: &HMat) -> HMat {
    let z = Quaternion::zero(Backend::Rational);
    let mut out = [[z.clone(), z.clone()], [z.clone(), z]];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, o) in row.iter_mut().enumerate() {
            for k in 0..2 {
                *o = &(&*o + &(&a[i][k] * &b[k][j])) - &(&b[i][k] * &a[k][j]);
            }
        }
    }
    out
}

fn sp2_basis() -> Vec<HMat> {
    let r = Backend::Rational;
    let z = || Quaternion::zero(r);
    let u = |i| Quaternion::unit(i, r);
    let mut out = Vec::new();
    // h: diag(i,0), diag(0,i), diag(0,j), diag(0,k)
    out.push([[u(1), z()], [z(), z()]]);
    for i in 1..4 {
        out.push([[z(), z()], [z(), u(i)]]);
    }
    // m: [[0,a],[−a*,0]] for a = 1, i, j, k
    for i in 0..4 {
        out.push([[z(), u(i)], [-&u(i).conj(), z()]]);
    }
    // n: diag(j,0), diag(k,0)
    out.push([[u(2), z()], [z(), z()]]);
    out.push([[u(3), z()], [z(), z()]]);
    out
}

fn sp2_coords(m: &HMat) -> Vec<Scalar> {
    let p = m[0][0].to_array();
    let q = m[1][1].to_array();
    let a = m[0][1].to_array();
    vec![
        p[1].clone(),
        q[1].clone(),
        q[2].clone(),
        q[3].clone(),
        a[0].clone(),
        a[1].clone(),
        a[2].clone(),
        a[3].clone(),
        p[2].clone(),
        p[3].clone(),
    ]
}

fn as_i64(x: &Scalar) -> i64 {
    let r = x.as_rational().expect("rational entry");
    assert!(r.is_integer(), "non-integer structure constant");
    r.to_integer().try_into().expect("small structure constant")
}

/// Nonzero `c[i][j][k]` with `i < j` for sp(2) in the basis
/// `h = (diag(i,0), diag(0,i), diag(0,j), diag(0,k))`,
/// `m = ([[0,a],[−a*,0]], a = 1,i,j,k)`, `n = (diag(j,0), diag(k,0))`.
pub fn generate_sp2() -> Vec<(usize, usize, usize, i64)> {
    let basis = sp2_basis();
    let mut out = Vec::new();
    for a in 0..10 {
        for b in a + 1..10 {
            let br = hmat_commutator(&basis[a], &basis[b]);
            let coords = sp2_coords(&br);
            let r = Backend::Rational;
            let z = Quaternion::zero(r);
            let mut back = [[z.clone(), z.clone()], [z.clone(), z]];
            for (k, c) in coords.iter().enumerate() {
                for s in 0..2 {
                    for t in 0..2 {
                        back[s][t] = &back[s][t] + &basis[k][s][t].scale(c);
                    }
                }
            }
            assert_eq!(back, br, "bracket left sp(2)");
            for (k, c) in coords.iter().enumerate() {
                let c = as_i64(c);
                if c != 0 {
                    out.push((a, b, k, c));
                }
            }
        }
    }
    out
}
