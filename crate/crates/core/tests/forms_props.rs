mod common;

use common::{config, kform, rational_vec, small_rational};
use nkh_core::catalog::s3s3::{circular_coframe, S3S3TwoForm};
use nkh_core::catalog::{cp3, flag, ledger_obata_model};
use nkh_core::{
    Backend, CoframeDifferential, HomogeneousModel, InvariantMetric, KForm, LieAlgebraData,
    Matrix, ReductiveSplit, Scalar,
};
use proptest::prelude::*;

fn sign(p: usize) -> Scalar {
    Scalar::int(if p % 2 == 0 { 1 } else { -1 })
}

fn group_coframe(lie: LieAlgebraData) -> CoframeDifferential {
    let n = lie.dim();
    let split = ReductiveSplit::trivial(&lie);
    let metric = InvariantMetric::diagonal(&vec![Scalar::int(1); n]).unwrap();
    HomogeneousModel::new("group", lie, split, metric, None).unwrap().coframe().unwrap()
}

fn coframes() -> Vec<CoframeDifferential> {
    let r = Backend::Rational;
    let lo = ledger_obata_model().unwrap().lie().clone();
    vec![
        circular_coframe(r),
        group_coframe(flag::su3(r)),
        group_coframe(lo),
        group_coframe(cp3::sp2(r)),
    ]
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn wedge_associative_and_graded(a in kform(6, 1), b in kform(6, 2), c in kform(6, 2)) {
        let ab_c = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let a_bc = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        // α∧β = (−1)^{pq} β∧α
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn interior_is_antiderivation(a in kform(6, 2), b in kform(6, 3), v in rational_vec(6)) {
        let lhs = a.wedge(&b).unwrap().interior(&v).unwrap();
        let rhs = a
            .interior(&v)
            .unwrap()
            .wedge(&b)
            .unwrap()
            .try_add(&a.wedge(&b.interior(&v).unwrap()).unwrap().scale(&sign(2)))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(b.interior(&v).unwrap().interior(&v).unwrap().is_zero());
    }

    #[test]
    fn wedge_of_one_forms_evaluates_to_determinant(v in rational_vec(9), w in rational_vec(9)) {
        let rows: Vec<Vec<Scalar>> = v.chunks(3).map(<[Scalar]>::to_vec).collect();
        let cols: Vec<Vec<Scalar>> = w.chunks(3).map(<[Scalar]>::to_vec).collect();
        let f = rows
            .iter()
            .map(|r| KForm::one_form(r))
            .reduce(|acc, x| acc.wedge(&x).unwrap())
            .unwrap();
        let m = Matrix::from_fn(3, 3, |i, j| {
            rows[i].iter().zip(&cols[j]).fold(Scalar::int(0), |acc, (a, b)| acc + &(a * b))
        });
        prop_assert_eq!(f.eval(&cols).unwrap(), m.det());
    }

    #[test]
    fn exterior_derivative_squares_to_zero(
        which in 0usize..4,
        deg in 1usize..=3,
        seed in prop::collection::vec(-3i64..=3, 120),
    ) {
        let cf = &coframes()[which];
        let n = cf.dim();
        let keys = common::combinations(n, deg);
        let terms = keys.iter().zip(seed.iter().cycle()).filter(|(_, c)| **c != 0)
            .map(|(k, c)| (k.clone(), Scalar::int(*c)));
        let a = KForm::from_terms(n, deg, Backend::Rational, terms).unwrap();
        prop_assert!(a.d(cf).unwrap().d(cf).unwrap().is_zero());
    }

    #[test]
    fn exterior_derivative_is_antiderivation(a in kform(6, 1), b in kform(6, 2)) {
        let cf = circular_coframe(Backend::Rational);
        let lhs = a.wedge(&b).unwrap().d(&cf).unwrap();
        let rhs = a
            .d(&cf)
            .unwrap()
            .wedge(&b)
            .unwrap()
            .try_add(&a.wedge(&b.d(&cf).unwrap()).unwrap().neg())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn diagonal_forms_are_semi_kahler(l in prop::collection::vec(small_rational(), 3)) {
        let l = [l[0].clone(), l[1].clone(), l[2].clone()];
        prop_assume!(l.iter().all(|x| !x.is_zero()));
        let w = S3S3TwoForm::diagonal(&l).unwrap().to_kform();
        let cf = circular_coframe(Backend::Rational);
        prop_assert!(w.wedge(&w.d(&cf).unwrap()).unwrap().is_zero());
    }
}
