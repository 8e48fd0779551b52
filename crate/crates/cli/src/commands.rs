//! `verify`, `solve` and `sweep`, each producing a [`ReportDocument`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use nkh_core::catalog::flag::flag_verdict;
use nkh_core::catalog::s3s3::{li2_predicts_nk, s3s3_analyze, s3s3_reduce, S3S3TwoForm};
use nkh_core::catalog::cp3::cp3_verdict;
use nkh_core::catalog::{
    cp3_solve, flag_connection_coeffs, flag_solve, s6_check, s6_random_samples, solve_li2,
    CP3MetricParam, CatalogError, Cp3Locus, FlagLocus, FlagMetricParams, SpherePointFrame,
    MODEL_NAMES,
};
use nkh_core::homog::{parse_model_file, ClassificationReport, Norms};
use nkh_core::stable::reyes_carrion_lambda_squared;
use nkh_core::{Backend, HomogeneousModel, Matrix, Scalar, Tolerance, Verdict};
use rayon::prelude::*;
use serde_json::json;

use crate::grid::{self, Axis};
use crate::report::{ReportDocument, SweepRow};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub exact: bool,
    pub tol: Tolerance,
    pub seed: u64,
    pub max_points: usize,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            exact: true,
            tol: Tolerance::default(),
            seed: 0,
            max_points: 1_000_000,
            timing: false,
        }
    }
}

impl RunOptions {
    fn backend_name(&self) -> &'static str {
        if self.exact {
            "exact"
        } else {
            "float"
        }
    }

    fn scalar(&self, text: &str) -> Result<Scalar> {
        let s = if self.exact {
            Scalar::parse_exact(text)
        } else {
            Scalar::parse(text, Backend::Float)
        };
        s.with_context(|| format!("bad number {text:?}"))
    }

    fn document(&self, command: &str, model: &str) -> ReportDocument {
        let mut doc = ReportDocument::new(command, model);
        doc.backend = self.backend_name().into();
        doc.tolerance = self.tol.rel;
        doc.seed = self.seed;
        doc
    }

    fn finish(&self, mut doc: ReportDocument, start: Instant) -> ReportDocument {
        if self.timing {
            doc.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        doc
    }
}

/// `key=value` arguments; every key must be consumed.
struct Params {
    map: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl Params {
    fn parse(items: &[String]) -> Result<Params> {
        let mut map = BTreeMap::new();
        for item in items {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("bad parameter {item:?}, expected key=value"))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                bail!("parameter {k:?} given twice");
            }
        }
        Ok(Params {
            map,
            used: BTreeSet::new(),
        })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.used.insert(key.into());
        self.map.get(key).cloned()
    }

    fn get_or(&mut self, key: &str, default: &str) -> String {
        self.take(key).unwrap_or_else(|| default.to_string())
    }

    fn finish(&self, model: &str) -> Result<BTreeMap<String, String>> {
        let unknown: Vec<&String> = self.map.keys().filter(|k| !self.used.contains(*k)).collect();
        if !unknown.is_empty() {
            bail!("unknown parameter(s) for {model}: {unknown:?}");
        }
        Ok(self.map.clone())
    }
}

pub fn parse_signs(text: &str) -> Result<[i8; 3]> {
    let v: Vec<i8> = if text.contains(',') {
        text.split(',')
            .map(|x| match x.trim() {
                "1" | "+1" | "+" => Ok(1),
                "-1" | "-" => Ok(-1),
                other => Err(anyhow!("bad sign {other:?}")),
            })
            .collect::<Result<_>>()?
    } else {
        text.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(anyhow!("bad sign {other:?} in {text:?}")),
            })
            .collect::<Result<_>>()?
    };
    v.try_into().map_err(|_| anyhow!("need three signs, got {text:?}"))
}

pub fn signs_str(s: [i8; 3]) -> String {
    s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect()
}

fn parse_en(text: &str) -> Result<i8> {
    match text {
        "+" | "1" | "+1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => bail!("en must be + or -, got {text:?}"),
    }
}

fn all_signs() -> Vec<[i8; 3]> {
    (0..8u8)
        .map(|m| [0, 1, 2].map(|i| if m >> i & 1 == 0 { 1 } else { -1 }))
        .collect()
}

fn flag_locus() -> Result<&'static FlagLocus> {
    static CELL: OnceLock<FlagLocus> = OnceLock::new();
    if let Some(l) = CELL.get() {
        return Ok(l);
    }
    let l = flag_solve()?;
    Ok(CELL.get_or_init(|| l))
}

fn cp3_locus() -> Result<&'static Cp3Locus> {
    static CELL: OnceLock<Cp3Locus> = OnceLock::new();
    if let Some(l) = CELL.get() {
        return Ok(l);
    }
    let l = cp3_solve()?;
    Ok(CELL.get_or_init(|| l))
}

pub fn norms_map(n: &Norms) -> BTreeMap<String, f64> {
    [
        ("nabla_omega", n.nabla_omega),
        ("antisym_part", n.antisym_part),
        ("sym_residual", n.sym_residual),
        ("nijenhuis", n.nijenhuis),
        ("dw34", n.dw34),
        ("connection_skew", n.connection_skew),
        ("connection_torsion", n.connection_torsion),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn scalar_json(s: &Scalar) -> serde_json::Value {
    json!({ "value": s.to_string(), "approx": s.to_f64() })
}

/// Classification details shared by all homogeneous models.
fn homogeneous_details(
    doc: &mut ReportDocument,
    model: &HomogeneousModel,
    report: &ClassificationReport,
    opts: &RunOptions,
) -> Result<()> {
    doc.verdict = Some(report.verdict.as_str().into());
    doc.norms = norms_map(&report.norms);
    doc.detail("naturally_reductive", report.naturally_reductive);
    doc.detail("three_symmetric_canonical", report.three_symmetric_canonical);
    doc.detail("domega_type_30", report.domega_type_30);
    doc.detail("omega_wedge_domega_zero", report.omega_wedge_domega_zero);
    doc.detail("type_constant", report.type_constant.as_ref().map(scalar_json));
    if report.verdict == Verdict::StrictNK {
        let cf = model.coframe()?;
        let rc = reyes_carrion_lambda_squared(&model.kahler_form()?, &cf, opts.tol.abs)?;
        doc.detail("reyes_carrion_lambda_squared", rc.as_ref().map(scalar_json));
    }
    Ok(())
}

fn disagree(doc: &mut ReportDocument, what: String, predicted: &str, got: &str) {
    doc.disagreements
        .push(format!("{what}: analytic {predicted}, classify {got}"));
}

// ---------------------------------------------------------------- verify

pub fn verify(model: &str, params: &[String], opts: &RunOptions) -> Result<ReportDocument> {
    let start = Instant::now();
    let mut p = Params::parse(params)?;
    let mut doc = opts.document("verify", model);
    match model {
        "s3s3" => verify_s3s3(&mut doc, &mut p, opts)?,
        "flag" => verify_flag(&mut doc, &mut p, opts)?,
        "cp3" => verify_cp3(&mut doc, &mut p, opts)?,
        "s6" => verify_s6(&mut doc, &mut p, opts)?,
        other => bail!("unknown model {other:?}; known models: {}", MODEL_NAMES.join(", ")),
    }
    doc.parameters = p.finish(model)?;
    Ok(opts.finish(doc, start))
}

/// Classify a structure-constant file.
pub fn verify_model_file(path: &str, text: &str, opts: &RunOptions) -> Result<ReportDocument> {
    let start = Instant::now();
    let mut model = parse_model_file(text).with_context(|| format!("reading {path}"))?;
    if !opts.exact {
        model = model.to_backend(Backend::Float)?;
    }
    let mut doc = opts.document("verify", model.name());
    doc.parameters.insert("model_file".into(), path.into());
    let report = nkh_core::classify(&model, &model.coframe()?, &opts.tol)?;
    homogeneous_details(&mut doc, &model, &report, opts)?;
    Ok(opts.finish(doc, start))
}

fn scalar_list(opts: &RunOptions, text: &str, n: usize) -> Result<Vec<Scalar>> {
    let v: Vec<Scalar> = text.split(',').map(|x| opts.scalar(x.trim())).collect::<Result<_>>()?;
    if v.len() != n {
        bail!("expected {n} comma-separated values, got {}", v.len());
    }
    Ok(v)
}

fn s3s3_form(p: &mut Params, opts: &RunOptions) -> Result<S3S3TwoForm> {
    let zero3 = "0,0,0";
    if let Some(c) = p.take("c") {
        let c = scalar_list(opts, &c, 9)?;
        let a = scalar_list(opts, &p.get_or("a", zero3), 3)?;
        let b = scalar_list(opts, &p.get_or("b", zero3), 3)?;
        let arr = |v: Vec<Scalar>| -> [Scalar; 3] { [v[0].clone(), v[1].clone(), v[2].clone()] };
        return Ok(S3S3TwoForm::new(arr(a), arr(b), Matrix::new(3, 3, c)?)?);
    }
    let l: Vec<Scalar> = ["l1", "l2", "l3"]
        .iter()
        .map(|k| opts.scalar(&p.get_or(k, "sqrt(3)/2")))
        .collect::<Result<_>>()?;
    Ok(S3S3TwoForm::diagonal(&[l[0].clone(), l[1].clone(), l[2].clone()])?)
}

/// Analyze one S³×S³ form; returns (verdict, predicted NK, report norms).
fn s3s3_point(
    form: &S3S3TwoForm,
    opts: &RunOptions,
) -> Result<(nkh_core::catalog::S3S3Analysis, bool, Option<[Scalar; 3]>)> {
    let analysis = s3s3_analyze(&form.to_kform(), &opts.tol)?;
    let (predicted, lambdas) = match s3s3_reduce(form, &opts.tol) {
        Ok(red) => (li2_predicts_nk(&red.lambdas, opts.tol.rel), Some(red.lambdas)),
        Err(CatalogError::NotSemiKahler) => (false, None),
        Err(e) => return Err(e.into()),
    };
    Ok((analysis, predicted, lambdas))
}

fn verify_s3s3(doc: &mut ReportDocument, p: &mut Params, opts: &RunOptions) -> Result<()> {
    let form = s3s3_form(p, opts)?;
    let (a, predicted, lambdas) = s3s3_point(&form, opts)?;
    doc.verdict = Some(a.verdict.as_str().into());
    if let Some(r) = &a.report {
        doc.norms = norms_map(&r.norms);
        doc.detail("naturally_reductive", r.naturally_reductive);
        doc.detail("three_symmetric_canonical", r.three_symmetric_canonical);
        doc.detail("type_constant", r.type_constant.as_ref().map(scalar_json));
    }
    doc.detail("reason", &a.reason);
    doc.detail("metric_sign", a.metric_sign);
    doc.detail("reyes_carrion_lambda_squared", a.rc_lambda_squared.as_ref().map(scalar_json));
    if let Some(st) = &a.structure {
        doc.detail("lambda_rho", scalar_json(&st.lambda));
        doc.detail("c", scalar_json(&st.c));
    }
    doc.detail(
        "reduced_lambdas",
        lambdas.map(|l| l.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    );
    let pred = if predicted { "StrictNK" } else { "not NK" };
    doc.detail("predicted", pred);
    if predicted != (a.verdict == Verdict::StrictNK) {
        disagree(doc, "s3s3".into(), pred, a.verdict.as_str());
    }
    Ok(())
}

fn flag_params(p: &mut Params, opts: &RunOptions) -> Result<FlagMetricParams> {
    let r = opts.scalar(&p.get_or("r", "1"))?;
    let s = opts.scalar(&p.get_or("s", "1"))?;
    let t = opts.scalar(&p.get_or("t", "1"))?;
    Ok(FlagMetricParams::new(r, s, t)?)
}

fn verify_flag(doc: &mut ReportDocument, p: &mut Params, opts: &RunOptions) -> Result<()> {
    let params = flag_params(p, opts)?;
    let signs = parse_signs(&p.get_or("eps", "+++"))?;
    let model = nkh_core::catalog::build_flag(&params, signs)?;
    let report = nkh_core::classify(&model, &model.coframe()?, &opts.tol)?;
    homogeneous_details(doc, &model, &report, opts)?;
    let abc = flag_connection_coeffs(&params)?;
    doc.detail("connection_coefficients", abc.iter().map(scalar_json).collect::<Vec<_>>());
    let predicted = flag_locus()?.predict(&params, signs, opts.tol.rel);
    doc.detail("predicted", predicted.as_str());
    if predicted != report.verdict {
        disagree(doc, format!("flag eps={}", signs_str(signs)), predicted.as_str(), report.verdict.as_str());
    }
    Ok(())
}

fn verify_cp3(doc: &mut ReportDocument, p: &mut Params, opts: &RunOptions) -> Result<()> {
    let t = opts.scalar(&p.get_or("t", "1"))?;
    let param = CP3MetricParam::new(t.clone())?;
    let ens = match p.take("en") {
        Some(e) => vec![parse_en(&e)?],
        None => vec![1, -1],
    };
    let locus = cp3_locus()?;
    let mut candidates = Vec::new();
    let mut best: Option<(Verdict, ClassificationReport, i8)> = None;
    for &en in &ens {
        let report = cp3_verdict(&param, en, &opts.tol)?;
        let predicted = locus.predict(t.to_f64(), en, opts.tol.rel);
        if predicted != report.verdict {
            disagree(doc, format!("cp3 en={en}"), predicted.as_str(), report.verdict.as_str());
        }
        candidates.push(json!({
            "en": en,
            "verdict": report.verdict.as_str(),
            "predicted": predicted.as_str(),
            "norms": norms_map(&report.norms),
        }));
        let better = match &best {
            None => true,
            Some((v, _, _)) => !v.is_nk_class() && report.verdict.is_nk_class(),
        };
        if better {
            best = Some((report.verdict, report, en));
        }
    }
    let (verdict, report, en) = best.expect("at least one candidate");
    let model = nkh_core::catalog::build_cp3(&param, en)?;
    homogeneous_details(doc, &model, &report, opts)?;
    // with both candidates, "Neither" means no NK-class J at this t
    if ens.len() > 1 && !verdict.is_nk_class() {
        doc.verdict = Some(Verdict::Neither.as_str().into());
    }
    doc.detail("candidates", candidates);
    doc.detail("selected_en", en);
    Ok(())
}

fn verify_s6(doc: &mut ReportDocument, p: &mut Params, opts: &RunOptions) -> Result<()> {
    let tol = opts.tol.rel;
    if let Some(n) = p.take("points") {
        let n: usize = n.parse().context("points must be a count")?;
        let samples = s6_random_samples(n, opts.seed, tol)?;
        let max = |f: &dyn Fn(&nkh_core::catalog::S6Sample) -> f64| {
            samples.iter().map(f).fold(0.0, f64::max)
        };
        doc.residuals.insert("antisym".into(), max(&|s| s.check.antisym_residual));
        doc.residuals.insert("type_constant".into(), max(&|s| s.check.type_constant_residual));
        doc.residuals.insert("alpha_minus_one".into(), max(&|s| (s.check.type_constant.to_f64() - 1.0).abs()));
        doc.residuals.insert("finite_difference".into(), max(&|s| s.check.fd_residual));
        doc.residuals.insert("orbit_antisym".into(), max(&|s| s.orbit.antisym_residual));
        let passed = samples.iter().filter(|s| s.check.passes && s.orbit.passes).count();
        doc.detail("points", n);
        doc.detail("passed", passed);
        doc.verdict = Some(if passed == n { "StrictNK" } else { "Neither" }.into());
        return Ok(());
    }
    let x = match p.take("x") {
        Some(x) => SpherePointFrame::new(scalar_list(opts, &x, 7)?, tol)?,
        None if opts.exact => SpherePointFrame::basis(0),
        None => SpherePointFrame::new(scalar_list(opts, "1,0,0,0,0,0,0", 7)?, tol)?,
    };
    let r = s6_check(&x, tol)?;
    doc.residuals.insert("antisym".into(), r.antisym_residual);
    doc.residuals.insert("j_squared".into(), r.j_squared_residual);
    doc.residuals.insert("compatibility".into(), r.compatibility_residual);
    doc.residuals.insert("type_constant".into(), r.type_constant_residual);
    doc.residuals.insert("finite_difference".into(), r.fd_residual);
    doc.norms.insert("nabla_omega".into(), r.nabla_omega_norm);
    doc.detail("type_constant", scalar_json(&r.type_constant));
    doc.detail("exact", r.exact);
    doc.verdict = Some(if r.passes { "StrictNK" } else { "Neither" }.into());
    Ok(())
}

// ---------------------------------------------------------------- solve

pub fn solve(model: &str, opts: &RunOptions) -> Result<ReportDocument> {
    let start = Instant::now();
    let mut doc = opts.document("solve", model);
    match model {
        "s3s3" => solve_s3s3(&mut doc, opts)?,
        "flag" => solve_flag(&mut doc, opts)?,
        "cp3" => solve_cp3(&mut doc, opts)?,
        "s6" => solve_s6(&mut doc, opts)?,
        other => bail!("unknown model {other:?}; known models: {}", MODEL_NAMES.join(", ")),
    }
    Ok(opts.finish(doc, start))
}

fn solve_s3s3(doc: &mut ReportDocument, opts: &RunOptions) -> Result<()> {
    let sol = solve_li2()?;
    doc.loci.push(sol.description.clone());
    doc.detail("k_over_mu4", scalar_json(&sol.k_over_mu4));
    doc.detail("family", sol.family.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let branches: Vec<_> = sol
        .branches
        .iter()
        .map(|b| json!({ "equal": b.equal, "positive": b.positive, "dimension": b.nullspace.len() }))
        .collect();
    doc.detail("branches", branches);
    let mut patterns = Vec::new();
    for sp in &sol.sign_patterns {
        let predicted = if sp.det_c_sign > 0 { Verdict::StrictNK } else { Verdict::Neither };
        if predicted != sp.verdict {
            disagree(doc, format!("s3s3 signs={}", signs_str(sp.signs)), predicted.as_str(), sp.verdict.as_str());
        }
        patterns.push(json!({
            "signs": signs_str(sp.signs),
            "det_c_sign": sp.det_c_sign,
            "metric_sign": sp.metric_sign,
            "q_discriminant": sp.q_discriminant.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "verdict": sp.verdict.as_str(),
        }));
    }
    doc.detail("sign_patterns", patterns);
    // off-family points must not be nearly Kähler
    for l in [[1, 1, 2], [1, 2, 3], [2, 2, 3]] {
        let l = l.map(|x| Scalar::int(x).to_backend(backend(opts)).expect("int"));
        let form = S3S3TwoForm::diagonal(&l)?;
        let (a, predicted, _) = s3s3_point(&form, opts)?;
        if predicted || a.verdict == Verdict::StrictNK {
            let name = format!("s3s3 l={}", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            disagree(doc, name, if predicted { "StrictNK" } else { "not NK" }, a.verdict.as_str());
        }
    }
    Ok(())
}

fn backend(opts: &RunOptions) -> Backend {
    if opts.exact {
        Backend::Rational
    } else {
        Backend::Float
    }
}

fn solve_flag(doc: &mut ReportDocument, opts: &RunOptions) -> Result<()> {
    let locus = flag_locus()?;
    doc.loci = locus.describe();
    let mut cases = Vec::new();
    for c in &locus.cases {
        cases.push(json!({
            "eps": signs_str(c.signs),
            "nk_conditions": c.nk_conditions.render(),
            "kahler_conditions": c.kahler_conditions.render(),
            "nk_locus": c.nk_locus.as_ref().map(|l| l.render()),
            "kahler_locus": c.kahler_locus.as_ref().map(|l| l.render()),
            "alpha_third_line_matches": c.alpha_variant_matches,
            "gamma_third_line_matches": c.gamma_variant_matches,
            "integrable": c.integrable,
        }));
    }
    doc.detail("cases", cases);
    // cross-check the loci against direct classification
    let b = backend(opts);
    let int = |x: i64| Scalar::int(x).to_backend(b).expect("int");
    let mut points: Vec<([i64; 3], [i8; 3])> = Vec::new();
    for s in all_signs() {
        points.push(([1, 1, 1], s));
        points.push(([1, 2, 4], s));
        points.push(([2, 1, 1], s));
        points.push(([1, 2, 1], s));
        points.push(([1, 1, 2], s));
        points.push(([5, 2, 3], s));
    }
    let rows: Vec<(String, Verdict, Verdict)> = points
        .par_iter()
        .map(|&(rst, s)| -> Result<_> {
            let params = FlagMetricParams::new(int(rst[0]), int(rst[1]), int(rst[2]))?;
            let got = flag_verdict(&params, s, &opts.tol)?.verdict;
            let predicted = locus.predict(&params, s, opts.tol.rel);
            Ok((format!("flag r,s,t={rst:?} eps={}", signs_str(s)), predicted, got))
        })
        .collect::<Result<_>>()?;
    for (name, predicted, got) in rows {
        if predicted != got {
            disagree(doc, name, predicted.as_str(), got.as_str());
        }
    }
    doc.detail("cross_checked_points", points.len());
    Ok(())
}

fn solve_cp3(doc: &mut ReportDocument, opts: &RunOptions) -> Result<()> {
    let locus = cp3_locus()?;
    doc.loci = locus.describe();
    doc.detail("residual_degree", locus.degree);
    doc.detail(
        "nk_class_values",
        locus
            .nk_class_values()
            .iter()
            .map(|(en, t)| json!({ "en": en, "t": t.to_string() }))
            .collect::<Vec<_>>(),
    );
    let b = backend(opts);
    for t in ["1/2", "1", "3/2", "2", "3"] {
        for en in [1i8, -1] {
            let ts = Scalar::parse(t, b)?;
            let got = cp3_verdict(&CP3MetricParam::new(ts.clone())?, en, &opts.tol)?.verdict;
            let predicted = locus.predict(ts.to_f64(), en, opts.tol.rel);
            if predicted != got {
                disagree(doc, format!("cp3 t={t} en={en}"), predicted.as_str(), got.as_str());
            }
        }
    }
    Ok(())
}

fn solve_s6(doc: &mut ReportDocument, opts: &RunOptions) -> Result<()> {
    doc.loci.push("StrictNK at every point with type constant 1".into());
    for i in 0..7 {
        let r = s6_check(&SpherePointFrame::basis(i), 0.0)?;
        if !r.passes || !r.type_constant.is_one() {
            disagree(doc, format!("s6 e{}", i + 1), "StrictNK", "Neither");
        }
    }
    let samples = s6_random_samples(16, opts.seed, opts.tol.rel)?;
    for (i, s) in samples.iter().enumerate() {
        if !(s.check.passes && s.orbit.passes) {
            disagree(doc, format!("s6 random point {i}"), "StrictNK", "Neither");
        }
    }
    doc.detail("random_points", samples.len());
    Ok(())
}

// ---------------------------------------------------------------- sweep

fn axis_names(model: &str) -> Result<&'static [&'static str]> {
    Ok(match model {
        "s3s3" => &["l1", "l2", "l3"],
        "flag" => &["r", "s", "t", "eps"],
        "cp3" => &["t", "en"],
        "s6" => bail!("s6 has no parameters to sweep; use `verify s6 points=N`"),
        other => bail!("unknown model {other:?}; known models: {}", MODEL_NAMES.join(", ")),
    })
}

fn build_axes(model: &str, specs: &[String]) -> Result<Vec<Axis>> {
    let names = axis_names(model)?;
    let mut given: BTreeMap<String, Axis> = BTreeMap::new();
    for spec in specs {
        let mut axis = grid::parse_axis(spec)?;
        if !names.contains(&axis.name.as_str()) {
            bail!("unknown sweep parameter {:?} for {model}; expected {names:?}", axis.name);
        }
        if axis.values == ["all"] {
            axis.values = match axis.name.as_str() {
                "eps" => all_signs().into_iter().map(signs_str).collect(),
                "en" => vec!["+".into(), "-".into()],
                _ => bail!("`all` only applies to sign parameters"),
            };
        }
        given.insert(axis.name.clone(), axis);
    }
    names
        .iter()
        .map(|&n| {
            Ok(given.remove(n).unwrap_or_else(|| Axis {
                name: n.into(),
                values: match n {
                    "eps" => all_signs().into_iter().map(signs_str).collect(),
                    "en" => vec!["+".into(), "-".into()],
                    "l1" | "l2" | "l3" => vec!["sqrt(3)/2".into()],
                    _ => vec!["1".into()],
                },
            }))
        })
        .collect()
}

fn sweep_row(model: &str, point: &[(String, String)], opts: &RunOptions) -> Result<SweepRow> {
    let map: BTreeMap<String, String> = point.iter().cloned().collect();
    let get = |k: &str| map[k].as_str();
    let (verdict, predicted, agrees, norms) = match model {
        "s3s3" => {
            let l: Vec<Scalar> = ["l1", "l2", "l3"].iter().map(|k| opts.scalar(get(k))).collect::<Result<_>>()?;
            let form = S3S3TwoForm::diagonal(&[l[0].clone(), l[1].clone(), l[2].clone()])?;
            let (a, pred, _) = s3s3_point(&form, opts)?;
            let norms = a.report.as_ref().map(|r| r.norms.clone());
            let p = if pred { Verdict::StrictNK } else { Verdict::Neither };
            (a.verdict, p, pred == (a.verdict == Verdict::StrictNK), norms)
        }
        "flag" => {
            let params = FlagMetricParams::new(opts.scalar(get("r"))?, opts.scalar(get("s"))?, opts.scalar(get("t"))?)?;
            let signs = parse_signs(get("eps"))?;
            let report = flag_verdict(&params, signs, &opts.tol)?;
            let p = flag_locus()?.predict(&params, signs, opts.tol.rel);
            (report.verdict, p, p == report.verdict, Some(report.norms))
        }
        "cp3" => {
            let t = opts.scalar(get("t"))?;
            let en = parse_en(get("en"))?;
            let report = cp3_verdict(&CP3MetricParam::new(t.clone())?, en, &opts.tol)?;
            let p = cp3_locus()?.predict(t.to_f64(), en, opts.tol.rel);
            (report.verdict, p, p == report.verdict, Some(report.norms))
        }
        other => bail!("unknown model {other:?}"),
    };
    let n = norms.unwrap_or_default();
    Ok(SweepRow {
        point: map,
        verdict: verdict.as_str().into(),
        predicted: if model == "s3s3" && predicted == Verdict::Neither {
            "not NK".into()
        } else {
            predicted.as_str().into()
        },
        agrees,
        nabla_omega: n.nabla_omega,
        sym_residual: n.sym_residual,
        nijenhuis: n.nijenhuis,
    })
}

pub fn sweep(model: &str, specs: &[String], opts: &RunOptions) -> Result<ReportDocument> {
    let start = Instant::now();
    let axes = build_axes(model, specs)?;
    let points = grid::points(&axes, opts.max_points)?;
    // solve once up front so worker threads share the cached loci
    match model {
        "flag" => {
            flag_locus()?;
        }
        "cp3" => {
            cp3_locus()?;
        }
        _ => {}
    }
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|p| sweep_row(model, p, opts))
        .collect::<Result<_>>()?;
    let mut doc = opts.document("sweep", model);
    for a in &axes {
        doc.parameters.insert(a.name.clone(), a.values.join(","));
    }
    doc.loci = match model {
        "s3s3" => vec![solve_li2()?.description],
        "flag" => flag_locus()?.describe(),
        "cp3" => cp3_locus()?.describe(),
        _ => Vec::new(),
    };
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in &rows {
        *counts.entry(r.verdict.clone()).or_default() += 1;
        if !r.agrees {
            let at: Vec<String> = r.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
            doc.disagreements.push(format!(
                "{model} {}: analytic {}, classify {}",
                at.join(" "),
                r.predicted,
                r.verdict
            ));
        }
    }
    doc.detail("verdict_counts", counts);
    doc.detail("points", rows.len());
    doc.residuals.insert(
        "max_sym_residual_on_nk_rows".into(),
        rows.iter()
            .filter(|r| r.verdict == "StrictNK" || r.verdict == "Kahler")
            .map(|r| r.sym_residual)
            .fold(0.0, f64::max),
    );
    doc.rows = rows;
    Ok(opts.finish(doc, start))
}
