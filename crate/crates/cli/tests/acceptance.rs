//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the console:
//! `cargo test -p nkh-cli --test acceptance`.

use std::time::{Duration, Instant};

use nkh_cli::commands::{self, RunOptions};
use nkh_cli::ReportDocument;
use nkh_core::catalog::s3s3::{circular_coframe, coframe_rotation, s3s3_analyze, su2_pair, volume};
use nkh_core::catalog::{
    build_cp3, build_flag, canonical_omega, cp3, flag, ledger_obata_model, s6_random_samples,
    solve_li2, CP3MetricParam, FlagMetricParams, S3S3TwoForm,
};
use nkh_core::catalog::s3s3::de_block_matrix;
use nkh_core::homog::{
    canonical_3symmetric_check, koszul_connection, nabla_j, naturally_reductive_test,
    type_constant_with_seed,
};
use nkh_core::stable::{
    check_reyes_carrion, cone_3form, g2_generic, hat, j_from_rho, octonion_phi,
};
use nkh_core::{
    classify, Backend, HomogeneousModel, KForm, LieAlgebraData, Matrix, ReductiveSplit,
    ReyesCarrionProblem, Scalar, Tolerance, Verdict,
};
use nkh_core::InvariantMetric;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn exact() -> RunOptions {
    RunOptions::default()
}

fn float() -> RunOptions {
    RunOptions {
        exact: false,
        ..RunOptions::default()
    }
}

fn args(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn q(text: &str) -> Scalar {
    Scalar::parse_exact(text).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

// 1. only the equal-modulus family on S³×S³
fn s3s3_uniqueness() -> Check {
    let (res, elapsed) = timed(|| -> Result<(ReportDocument, ReportDocument), String> {
        let solved = commands::solve("s3s3", &exact()).map_err(err)?;
        let swept = commands::sweep(
            "s3s3",
            &args(&["l1=0.5,1,1.5,2", "l2=0.5,1,1.5,2", "l3=0.5,1,1.5,2"]),
            &exact(),
        )
        .map_err(err)?;
        Ok((solved, swept))
    });
    let (solved, swept) = res?;
    let sol = solve_li2().map_err(err)?;
    ensure(solved.disagreements.is_empty(), format!("solve disagreements {:?}", solved.disagreements))?;
    let positive: Vec<_> = sol.branches.iter().filter(|b| b.positive).collect();
    ensure(
        positive.len() == 1 && positive[0].equal == [true; 3],
        format!("positive branches {positive:?}"),
    )?;
    ensure(solved.loci[0].starts_with("|λ1| = |λ2| = |λ3|"), "family description")?;
    ensure(swept.rows.len() == 64, "64 grid points")?;
    for r in &swept.rows {
        let l: Vec<Scalar> = ["l1", "l2", "l3"].iter().map(|k| q(&r.point[*k])).collect();
        let equal = l[0] == l[1] && l[1] == l[2];
        let nk = r.verdict == "StrictNK";
        ensure(nk == equal, format!("row {:?} verdict {}", r.point, r.verdict))?;
        if nk {
            ensure(r.sym_residual == 0.0, format!("nonzero residual at {:?}", r.point))?;
        }
    }
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("family |λ1|=|λ2|=|λ3|, 4/64 StrictNK with zero residual, {elapsed:.1?}"))
}

// 2. the canonical form solves the Reyes Carrión system in ℚ(√3)
fn canonical_structure() -> Check {
    let omega = canonical_omega();
    let b = omega.backend();
    ensure(b == Backend::QuadExt(3), format!("backend {b:?}"))?;
    let cf = circular_coframe(b);
    let mut outcome = None;
    for lambda in [q("1/3"), q("-1/3")] {
        let p = ReyesCarrionProblem::new(omega.clone(), lambda.clone(), cf.clone()).map_err(err)?;
        let o = check_reyes_carrion(&p, 0.0).map_err(err)?;
        if o.holds {
            outcome = Some((lambda, o));
            break;
        }
    }
    let (lambda, o) = outcome.ok_or("no λ = ±1/3 solves the system")?;
    ensure(o.residual.is_zero(), format!("residual {}", o.residual))?;
    let st = j_from_rho(&omega.d(&cf).map_err(err)?, &volume(b)).map_err(err)?;
    let mu = Scalar::quad((0, 1), (1, 2), 3);
    let p = de_block_matrix(&[mu.clone(), mu.clone(), mu], &st.c).map_err(err)?;
    ensure(st.j == p.transpose(), "J differs from the [[D,E],[-E,-D]] block matrix")?;
    ensure(o.structure.j == st.j, "J(ρ) depends on the normalization of ρ")?;
    Ok(format!("λ = {lambda}, residual 0 in Q(√3), J matches block matrix entrywise"))
}

// 3. flag manifold loci over 6³ points and 8 sign patterns
fn flag_loci() -> Check {
    let (doc, elapsed) = timed(|| {
        commands::sweep(
            "flag",
            &args(&["r=0.5:3:6", "s=0.5:3:6", "t=0.5:3:6", "eps=all"]),
            &exact(),
        )
    });
    let doc = doc.map_err(err)?;
    ensure(doc.rows.len() == 6 * 6 * 6 * 8, format!("{} rows", doc.rows.len()))?;
    ensure(doc.disagreements.is_empty(), format!("{:?}", &doc.disagreements[..doc.disagreements.len().min(3)]))?;
    let (mut nk, mut kahler) = (0, 0);
    let mut sum_points = std::collections::BTreeSet::new();
    let mut kahler_points = std::collections::BTreeSet::new();
    for row in &doc.rows {
        let (r, s, t) = (q(&row.point["r"]), q(&row.point["s"]), q(&row.point["t"]));
        let eps = row.point["eps"].as_str();
        let equal = r == s && s == t;
        let uniform = eps == "+++" || eps == "---";
        let sum = r == &s + &t || s == &r + &t || t == &r + &s;
        let key = (row.point["r"].clone(), row.point["s"].clone(), row.point["t"].clone());
        if sum {
            sum_points.insert(key.clone());
        }
        match row.verdict.as_str() {
            "StrictNK" => {
                nk += 1;
                ensure(equal && uniform, format!("StrictNK off locus at {:?}", row.point))?;
            }
            "Kahler" => {
                kahler += 1;
                ensure(sum, format!("Kahler off the sum families at {:?}", row.point))?;
                kahler_points.insert(key);
            }
            _ => ensure(!(equal && uniform), format!("missed StrictNK at {:?}", row.point))?,
        }
    }
    ensure(nk == 12, format!("{nk} StrictNK rows, expected 6 points x 2 signs"))?;
    ensure(kahler_points == sum_points, "some sum-family point has no Kahler sign pattern")?;
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    let pairing: Vec<&str> = doc.loci.iter().map(String::as_str).collect();
    Ok(format!(
        "{nk} StrictNK, {kahler} Kahler rows in {elapsed:.1?}; pairing: {}",
        pairing.join("; ")
    ))
}

// 4. CP³ along t = k/4
fn cp3_line() -> Check {
    let doc = commands::sweep("cp3", &args(&["t=0.25:4:16", "en=all"]), &float()).map_err(err)?;
    ensure(doc.rows.len() == 32, "32 rows")?;
    let mut hits = Vec::new();
    for row in &doc.rows {
        let t = Scalar::parse(&row.point["t"], Backend::Float).map_err(err)?.to_f64();
        let v = Verdict::parse(&row.verdict).ok_or("bad verdict")?;
        if v.is_nk_class() {
            hits.push((t, row.verdict.clone()));
            let residual = if v == Verdict::Kahler { row.nabla_omega } else { row.sym_residual };
            ensure(residual <= 1e-9, format!("residual {residual} at t={t}"))?;
        }
    }
    ensure(
        hits == vec![(1.0, "StrictNK".to_string()), (2.0, "Kahler".to_string())],
        format!("NK-class points {hits:?}"),
    )?;
    Ok("StrictNK at t=1, Kahler at t=2, nothing else on the grid".into())
}

fn lo() -> HomogeneousModel {
    ledger_obata_model().unwrap()
}

fn flag_at(r: i64, s: i64, t: i64, eps: [i8; 3]) -> HomogeneousModel {
    build_flag(&FlagMetricParams::new(Scalar::int(r), Scalar::int(s), Scalar::int(t)).unwrap(), eps).unwrap()
}

fn cp3_at(t: i64, en: i8) -> HomogeneousModel {
    build_cp3(&CP3MetricParam::new(Scalar::int(t)).unwrap(), en).unwrap()
}

// 5. naturally reductive ⟺ NK class, for canonical 3-symmetric J
fn gray_instance() -> Check {
    let tol = Tolerance::default();
    let models = [
        ("LO", lo()),
        ("flag(1,1,1,+++)", flag_at(1, 1, 1, [1, 1, 1])),
        ("flag(1,2,4,+++)", flag_at(1, 2, 4, [1, 1, 1])),
        ("flag(1,1,1,---)", flag_at(1, 1, 1, [-1, -1, -1])),
        ("cp3(t=1)", cp3_at(1, -1)),
        ("cp3(t=2)", cp3_at(2, -1)),
        ("cp3(t=3)", cp3_at(3, -1)),
    ];
    let mut nr_count = 0;
    for (name, m) in &models {
        ensure(canonical_3symmetric_check(m, &tol).map_err(err)?, format!("{name}: J not canonical"))?;
        let report = classify(m, &m.coframe().map_err(err)?, &tol).map_err(err)?;
        let nk = report.verdict.is_nk_class() && report.norms.sym_residual <= tol.abs;
        let nr = naturally_reductive_test(m, &tol);
        ensure(nr == nk, format!("{name}: naturally reductive {nr}, verdict {}", report.verdict.as_str()))?;
        nr_count += nr as usize;
    }
    Ok(format!("{} structures, {nr_count} naturally reductive and NK", models.len()))
}

fn strict_nk_models() -> Vec<(&'static str, HomogeneousModel)> {
    let s3s3 = s3s3_analyze(&canonical_omega(), &Tolerance::default()).unwrap();
    vec![
        ("s3s3", s3s3.model.expect("canonical form is classified")),
        ("LO", lo()),
        ("flag(1,1,1,+++)", flag_at(1, 1, 1, [1, 1, 1])),
        ("flag(1,1,1,---)", flag_at(1, 1, 1, [-1, -1, -1])),
        ("cp3(t=1)", cp3_at(1, -1)),
    ]
}

// 6. α = 1 after rescaling, exactly on basis pairs
fn type_constant_one() -> Check {
    let tol = Tolerance::default();
    let mut seen = Vec::new();
    for (name, m) in strict_nk_models() {
        let conn = koszul_connection(&m).map_err(err)?;
        let alpha = type_constant_with_seed(&m, &conn, &tol, 0).map_err(|e| format!("{name}: {e}"))?;
        // α scales like 1/c under g → c·g
        let scaled = m.with_metric(m.metric().scaled(&alpha).map_err(err)?).map_err(err)?;
        let conn = koszul_connection(&scaled).map_err(err)?;
        let one = type_constant_with_seed(&scaled, &conn, &tol, 0).map_err(|e| format!("{name}: {e}"))?;
        ensure(scaled.backend().is_exact() && one.is_one(), format!("{name}: rescaled α = {one}"))?;
        seen.push(format!("{name} α={alpha}"));
    }
    let samples = s6_random_samples(100, 0, 1e-9).map_err(err)?;
    let worst = samples
        .iter()
        .map(|s| (s.check.type_constant.to_f64() - 1.0).abs().max(s.check.type_constant_residual))
        .fold(0.0, f64::max);
    ensure(worst <= 1e-9, format!("S6 residual {worst:e}"))?;
    Ok(format!("{}; S6 100 points, max |α−1| {worst:.1e}", seen.join(", ")))
}

// 7. cones over NK structures are G₂-generic
fn g2_cone() -> Check {
    let mut names = Vec::new();
    for (name, m) in strict_nk_models() {
        let omega = m.kahler_form().map_err(err)?;
        let domega = omega.d(&m.coframe().map_err(err)?).map_err(err)?;
        let phi = cone_3form(&omega, &domega).map_err(err)?;
        ensure(g2_generic(&phi).map_err(err)?.generic, format!("{name}: cone not generic"))?;
        names.push(name);
    }
    ensure(g2_generic(&octonion_phi(Backend::Rational)).map_err(err)?.generic, "octonion φ")?;
    let decomposable = KForm::basis(7, &[0, 1, 2], Backend::Rational);
    ensure(!g2_generic(&decomposable).map_err(err)?.generic, "decomposable form passed")?;
    Ok(format!("cones over {} generic; octonion φ generic; e123 rejected", names.join(", ")))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(0),
        failure_persistence: None,
        ..Config::default()
    })
}

fn small() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn positive() -> impl Strategy<Value = Scalar> {
    (1i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn any_model() -> impl Strategy<Value = HomogeneousModel> {
    let sign = || prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 });
    prop_oneof![
        (positive(), positive(), positive(), sign(), sign(), sign()).prop_map(|(r, s, t, a, b, c)| {
            build_flag(&FlagMetricParams::new(r, s, t).unwrap(), [a, b, c]).unwrap()
        }),
        (positive(), sign()).prop_map(|(t, en)| build_cp3(&CP3MetricParam::new(t).unwrap(), en).unwrap()),
    ]
}

fn algebras() -> Vec<LieAlgebraData> {
    let r = Backend::Rational;
    vec![su2_pair(r), flag::su3(r), cp3::sp2(r), lo().lie().clone()]
}

fn group_coframe(lie: LieAlgebraData) -> nkh_core::CoframeDifferential {
    let n = lie.dim();
    let split = ReductiveSplit::trivial(&lie);
    let metric = InvariantMetric::diagonal(&vec![Scalar::int(1); n]).unwrap();
    HomogeneousModel::new("group", lie, split, metric, None).unwrap().coframe().unwrap()
}

fn cayley(a: &Scalar, b: &Scalar, c: &Scalar) -> Matrix {
    let z = Scalar::int(0);
    let s = Matrix::new(3, 3, vec![z.clone(), -a, -b, a.clone(), z.clone(), -c, b.clone(), c.clone(), z]).unwrap();
    let id = Matrix::identity(3, Backend::Rational);
    &id.sub(&s) * &id.add(&s).inverse().unwrap()
}

// 8. seeded randomized property suites
fn property_suites() -> Check {
    let tol = Tolerance::default();
    let mut done = Vec::new();

    let algs = algebras();
    let vecs = || prop::collection::vec(small(), 10);
    runner(24)
        .run(&(0usize..4, vecs(), vecs(), vecs()), |(w, x, y, z)| {
            let lie = &algs[w];
            let n = lie.dim();
            let (x, y, z) = (&x[..n], &y[..n], &z[..n]);
            let t1 = lie.bracket(x, &lie.bracket(y, z));
            let t2 = lie.bracket(y, &lie.bracket(z, x));
            let t3 = lie.bracket(z, &lie.bracket(x, y));
            for i in 0..n {
                prop_assert!((&(&t1[i] + &t2[i]) + &t3[i]).is_zero());
            }
            Ok(())
        })
        .map_err(|e| fail("Jacobi", e))?;
    done.push("Jacobi");

    let r = Backend::Rational;
    let coframes = vec![
        circular_coframe(r),
        group_coframe(flag::su3(r)),
        group_coframe(lo().lie().clone()),
        group_coframe(cp3::sp2(r)),
    ];
    runner(24)
        .run(&(0usize..4, 1usize..=3, prop::collection::vec(-3i64..=3, 60)), |(w, deg, seed)| {
            let cf = &coframes[w];
            let n = cf.dim();
            let mut terms = Vec::new();
            let mut next = seed.iter().cycle();
            for key in combinations(n, deg) {
                let c = *next.next().unwrap();
                if c != 0 {
                    terms.push((key, Scalar::int(c)));
                }
            }
            let a = KForm::from_terms(n, deg, r, terms).unwrap();
            prop_assert!(a.d(cf).unwrap().d(cf).unwrap().is_zero());
            Ok(())
        })
        .map_err(|e| fail("d²=0", e))?;
    done.push("d²=0");

    runner(12)
        .run(&any_model(), |m| {
            let conn = koszul_connection(&m).unwrap();
            let (skew, torsion) = conn.identity_residuals(&m);
            prop_assert!(skew.is_zero() && torsion.is_zero());
            let j = m.acs().unwrap().matrix();
            let n = j.rows();
            prop_assert_eq!(&(j * j), &Matrix::identity(n, j.backend()).neg());
            let nj = nabla_j(&conn, m.acs().unwrap());
            for a in 0..n {
                let da = Matrix::from_fn(n, n, |c, b| nj.get(a, b, c).clone());
                prop_assert!((&da * j).add(&(j * &da)).is_zero());
            }
            Ok(())
        })
        .map_err(|e| fail("connection identities / J²", e))?;
    done.push("connection identities");
    done.push("J²=−Id");

    let q3 = Backend::QuadExt(3);
    let rho0 = S3S3TwoForm::canonical().to_kform().d(&circular_coframe(q3)).unwrap();
    runner(12)
        .run(&prop::collection::vec(-2i64..=2, 36), |v| {
            let a = Matrix::identity(6, r).add(&Matrix::from_i64(6, 6, &v, r).scale(&Scalar::ratio(1, 7)));
            prop_assume!(!a.det().is_zero());
            let rho = rho0.substitute(&a).unwrap();
            let st = j_from_rho(&rho, &volume(q3)).unwrap();
            let back = hat(&hat(&rho, &st.j, 0.0).unwrap(), &st.j, 0.0).unwrap();
            prop_assert_eq!(back, rho.neg());
            Ok(())
        })
        .map_err(|e| fail("hat involution", e))?;
    done.push("hat involution");

    let w0 = canonical_omega();
    runner(8)
        .run(&(small(), small(), small(), small(), small(), small()), |(a, b, c, d, e, f)| {
            let rot = coframe_rotation(&cayley(&a, &b, &c), &cayley(&d, &e, &f));
            let after = s3s3_analyze(&w0.substitute(&rot).unwrap(), &tol).unwrap();
            prop_assert_eq!(after.verdict, Verdict::StrictNK);
            Ok(())
        })
        .map_err(|e| fail("SO(3)xSO(3) invariance", e))?;
    done.push("SO(3)×SO(3) invariance");

    let samples = s6_random_samples(32, 7, 1e-9).map_err(err)?;
    ensure(samples.iter().all(|s| s.orbit.passes), "S6 orbit property")?;
    done.push("SO(7) orbit on S6");

    Ok(done.join(", "))
}

fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e}")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in combinations(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
    }
    out
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("S3xS3 uniqueness", s3s3_uniqueness),
        ("canonical structure", canonical_structure),
        ("flag manifold", flag_loci),
        ("CP3 family", cp3_line),
        ("naturally reductive iff NK", gray_instance),
        ("type constant", type_constant_one),
        ("G2 cone", g2_cone),
        ("property suites", property_suites),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria {failed:?}");
        std::process::exit(1);
    }
}
