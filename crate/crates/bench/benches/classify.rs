use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nkh_core::catalog::{
    build_cp3, build_flag, canonical_omega, s3s3_analyze, CP3MetricParam, FlagMetricParams,
};
use nkh_core::{classify, Backend, HomogeneousModel, Tolerance};

fn flag(b: Backend) -> HomogeneousModel {
    let p = FlagMetricParams::new(b.from_i64(1), b.from_i64(2), b.from_i64(3)).unwrap();
    build_flag(&p, [1, -1, 1]).unwrap()
}

fn cp3(b: Backend) -> HomogeneousModel {
    build_cp3(&CP3MetricParam::new(b.from_ratio(3, 2)).unwrap(), -1).unwrap()
}

fn bench_classify(c: &mut Criterion) {
    let tol = Tolerance::default();
    for (name, backend) in [("exact", Backend::Rational), ("float", Backend::Float)] {
        for (model_name, model) in [("flag", flag(backend)), ("cp3", cp3(backend))] {
            let cf = model.coframe().unwrap();
            c.bench_function(&format!("classify/{model_name}/{name}"), |bench| {
                bench.iter(|| classify(black_box(&model), &cf, &tol).unwrap())
            });
        }
    }
    let omega = canonical_omega();
    c.bench_function("s3s3_analyze/canonical", |bench| {
        bench.iter(|| s3s3_analyze(black_box(&omega), &tol).unwrap())
    });
}

criterion_group!(benches, bench_classify);
criterion_main!(benches);
