mod common;

use common::{config, positive_rational, rational_vec, rotation};
use nkh_core::catalog::s3s3::{circular_coframe, coframe_rotation, s3s3_analyze, su2_pair, volume, S3S3TwoForm};
use nkh_core::catalog::{
    build_cp3, build_flag, cp3, flag, ledger_obata_model, random_so7, random_unit_point,
    s6_orbit_check, CP3MetricParam, FlagMetricParams,
};
use nkh_core::homog::{classify, koszul_connection, nabla_j};
use nkh_core::stable::{g2_bilinear, g2_generic, hat, j_from_rho, k_map, octonion_phi};
use nkh_core::{Backend, HomogeneousModel, LieAlgebraData, Matrix, Scalar, Tolerance, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebras() -> Vec<LieAlgebraData> {
    let r = Backend::Rational;
    vec![
        su2_pair(r),
        flag::su3(r),
        cp3::sp2(r),
        ledger_obata_model().unwrap().lie().clone(),
    ]
}

fn signs() -> impl Strategy<Value = [i8; 3]> {
    prop::array::uniform3(prop::bool::ANY).prop_map(|b| b.map(|x| if x { 1 } else { -1 }))
}

fn flag_model() -> impl Strategy<Value = HomogeneousModel> {
    (positive_rational(), positive_rational(), positive_rational(), signs()).prop_map(
        |(r, s, t, e)| build_flag(&FlagMetricParams::new(r, s, t).unwrap(), e).unwrap(),
    )
}

fn cp3_model() -> impl Strategy<Value = HomogeneousModel> {
    (positive_rational(), prop::bool::ANY).prop_map(|(t, e)| {
        build_cp3(&CP3MetricParam::new(t).unwrap(), if e { 1 } else { -1 }).unwrap()
    })
}

fn any_model() -> impl Strategy<Value = HomogeneousModel> {
    prop_oneof![flag_model(), cp3_model()]
}

fn unimodular() -> impl Strategy<Value = Matrix> {
    prop::collection::vec((0usize..7, 0usize..7, -2i64..=2), 1..6).prop_map(|shears| {
        let mut a = Matrix::identity(7, Backend::Rational);
        for (i, j, k) in shears {
            if i == j {
                continue;
            }
            let mut e = Matrix::identity(7, Backend::Rational);
            e[(i, j)] = Scalar::int(k);
            a = &a * &e;
        }
        a
    })
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn jacobi_on_shipped_algebras(which in 0usize..4, x in rational_vec(10), y in rational_vec(10), z in rational_vec(10)) {
        let lie = &algebras()[which];
        let n = lie.dim();
        let (x, y, z) = (&x[..n], &y[..n], &z[..n]);
        let t1 = lie.bracket(x, &lie.bracket(y, z));
        let t2 = lie.bracket(y, &lie.bracket(z, x));
        let t3 = lie.bracket(z, &lie.bracket(x, y));
        for i in 0..n {
            prop_assert!((&(&t1[i] + &t2[i]) + &t3[i]).is_zero());
        }
    }

    #[test]
    fn connection_identities(model in any_model()) {
        let conn = koszul_connection(&model).unwrap();
        let (skew, torsion) = conn.identity_residuals(&model);
        prop_assert!(skew.is_zero());
        prop_assert!(torsion.is_zero());
        prop_assert!(conn.u_symmetry_residual().is_zero());
    }

    #[test]
    fn almost_complex_structure(model in any_model()) {
        let j = model.acs().unwrap();
        let jm = j.matrix();
        let n = jm.rows();
        prop_assert_eq!(&(jm * jm), &Matrix::identity(n, jm.backend()).neg());
        let g = model.metric().matrix();
        prop_assert_eq!(&(&jm.transpose() * g) * jm, g.clone());
        // each ∇_X J anticommutes with J
        let nj = nabla_j(&koszul_connection(&model).unwrap(), j);
        for a in 0..n {
            let da = Matrix::from_fn(n, n, |c, b| nj.get(a, b, c).clone());
            prop_assert!((&da * jm).add(&(jm * &da)).is_zero());
        }
    }

    #[test]
    fn verdict_invariant_under_metric_scale(model in any_model(), big in prop::bool::ANY) {
        let tol = Tolerance::default();
        let c = if big { Scalar::int(2) } else { Scalar::ratio(1, 3) };
        let before = classify(&model, &model.coframe().unwrap(), &tol).unwrap();
        let scaled = model.with_metric(model.metric().scaled(&c).unwrap()).unwrap();
        let after = classify(&scaled, &scaled.coframe().unwrap(), &tol).unwrap();
        prop_assert_eq!(before.verdict, after.verdict);
        prop_assert_eq!(before.naturally_reductive, after.naturally_reductive);
    }

    #[test]
    fn s3s3_verdict_invariant_under_rotation(
        m in rotation(),
        n in rotation(),
        l in prop::collection::vec(1i64..=3, 3),
        canonical in prop::bool::ANY,
    ) {
        let tol = Tolerance::default();
        let w = if canonical {
            S3S3TwoForm::canonical()
        } else {
            S3S3TwoForm::diagonal(&[Scalar::int(l[0]), Scalar::int(l[1]), Scalar::int(l[2])]).unwrap()
        };
        let w = w.to_kform();
        let rotated = w.substitute(&coframe_rotation(&m, &n)).unwrap();
        let before = s3s3_analyze(&w, &tol).unwrap();
        let after = s3s3_analyze(&rotated, &tol).unwrap();
        prop_assert_eq!(before.verdict, after.verdict);
        prop_assert_eq!(before.metric_sign, after.metric_sign);
        if canonical {
            prop_assert_eq!(after.verdict, Verdict::StrictNK);
        }
    }

    #[test]
    fn hat_involution_and_k_scaling(v in prop::collection::vec(-2i64..=2, 36)) {
        let cf = circular_coframe(Backend::QuadExt(3));
        let rho = S3S3TwoForm::canonical().to_kform().d(&cf).unwrap();
        let a = Matrix::identity(6, Backend::Rational).add(&Matrix::from_i64(6, 6, &v, Backend::Rational).scale(&Scalar::ratio(1, 7)));
        prop_assume!(!a.det().is_zero());
        let rho = rho.substitute(&a).unwrap();
        let vol = volume(Backend::QuadExt(3));
        let st = j_from_rho(&rho, &vol).unwrap();
        let jm = &st.j;
        prop_assert_eq!(&(jm * jm), &Matrix::identity(6, jm.backend()).neg());
        let rho_hat = hat(&rho, jm, 0.0).unwrap();
        let back = hat(&rho_hat, jm, 0.0).unwrap();
        prop_assert_eq!(back, rho.neg());
        let k1 = k_map(&rho, &vol).unwrap();
        let k2 = k_map(&rho.scale(&Scalar::int(2)), &vol).unwrap();
        prop_assert_eq!(k2.matrix().clone(), k1.matrix().scale(&Scalar::int(4)));
    }

    #[test]
    fn g2_form_invariant_under_unimodular_maps(a in unimodular()) {
        let phi = octonion_phi(Backend::Rational);
        let moved = phi.substitute(&a).unwrap();
        let g = g2_generic(&moved).unwrap();
        prop_assert!(g.generic);
        prop_assert_eq!(g.sign, g2_generic(&phi).unwrap().sign);
        let b = g2_bilinear(&phi).unwrap();
        prop_assert_eq!(g2_bilinear(&moved).unwrap(), &(&a.transpose() * &b) * &a);
    }

    #[test]
    fn s6_orbit_property(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_unit_point(&mut rng);
        let g = random_so7(&mut rng);
        let r = s6_orbit_check(&g, &x, 1e-9).unwrap();
        prop_assert!(r.passes, "{:?}", r);
    }
}
