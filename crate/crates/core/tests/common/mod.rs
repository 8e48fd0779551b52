#![allow(dead_code)]

use nkh_core::{Backend, KForm, Matrix, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn small_rational() -> impl Strategy<Value = Scalar> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Scalar::ratio(n, d))
}

pub fn positive_rational() -> impl Strategy<Value = Scalar> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| Scalar::ratio(n, d))
}

pub fn rational_vec(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(small_rational(), n)
}

/// Increasing index tuples of length `k` from `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A random `k`-form on `ℝⁿ` with small integer coefficients, sparse.
pub fn kform(n: usize, k: usize) -> impl Strategy<Value = KForm> {
    let keys = combinations(n, k);
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], keys.len()).prop_map(
        move |c| {
            let terms = keys
                .iter()
                .zip(c)
                .filter(|(_, c)| *c != 0)
                .map(|(key, c)| (key.clone(), Scalar::int(c)));
            KForm::from_terms(n, k, Backend::Rational, terms).unwrap()
        },
    )
}

/// Rational rotation `(I − S)(I + S)⁻¹` from a skew matrix with entries `a, b, c`.
pub fn cayley(a: &Scalar, b: &Scalar, c: &Scalar) -> Matrix {
    let z = Scalar::int(0);
    let s = Matrix::new(
        3,
        3,
        vec![
            z.clone(), -a, -b,
            a.clone(), z.clone(), -c,
            b.clone(), c.clone(), z,
        ],
    )
    .unwrap();
    let id = Matrix::identity(3, Backend::Rational);
    &id.sub(&s) * &id.add(&s).inverse().unwrap()
}

pub fn rotation() -> impl Strategy<Value = Matrix> {
    (small_rational(), small_rational(), small_rational()).prop_map(|(a, b, c)| cayley(&a, &b, &c))
}
