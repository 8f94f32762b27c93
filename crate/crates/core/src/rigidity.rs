//! Rigidity constants and falsification harnesses.
//!
//! The harnesses sample curvature tensors (random, model spaces and
//! perturbations of model spaces), classify them at the relevant constant
//! and look for tensors that contradict the expected rigidity statement.
//! A clean run is reported as `consistent`: no counterexample among the
//! samples, which is evidence and not a proof.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curvature::{
    kahler_space_form, kahler_tensor, product, random_curvature, random_kahler_curvature,
    space_form, ComplexStructure, CurvatureTensor,
};
use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::operator::{
    alpha_sum, classify_spectrum, nonneg_threshold, nonpos_threshold, operator_matrix, spectrum,
    weighted_partial_sum, Verdict,
};
use crate::sym2::{kahler_basis, product_adapted_basis, standard_basis, BasisLabel, Sym2Basis};

/// Relative tolerance of the constant-curvature and Einstein detectors.
pub const DETECTOR_REL_TOL: f64 = 1e-6;

/// `|g(A)|` bound for the model-space equality checks.
pub const MODEL_G_TOL: f64 = 1e-12;

/// `A_{n1,n2} = 1 + n1 n2 + (n1(n2−1) + n2(n1−1))/(n1+n2)`.
pub fn a_const(n1: usize, n2: usize) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    1.0 + a * b + (a * (b - 1.0) + b * (a - 1.0)) / (a + b)
}

/// `B_{m1,m2} = 4 m1 m2 + (3/2)(m1² + m2²) + m1 m2/(m1+m2)`.
pub fn b_const(m1: usize, m2: usize) -> f64 {
    let (a, b) = (m1 as f64, m2 as f64);
    4.0 * a * b + 1.5 * (a * a + b * b) + a * b / (a + b)
}

/// Fractional partial sum of the smallest values,
/// `f(A, x) = Σ_{i≤⌊x⌋} a_i + (x − ⌊x⌋) a_{⌊x⌋+1}` over the ascending
/// ordering of `values`, for `1 ≤ x ≤ |values|`.
pub fn f_lemma(values: &[f64], x: f64) -> Result<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    weighted_partial_sum(&sorted, x)
}

/// `x · mean(values) − f(values, x)`, nonnegative by the averaging lemma and
/// zero for `x < |values|` exactly when all values agree.
pub fn f_lemma_gap(values: &[f64], x: f64) -> Result<f64> {
    let f = f_lemma(values, x)?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(x * mean - f)
}

fn detector_tol(r: &CurvatureTensor) -> f64 {
    DETECTOR_REL_TOL * r.max_abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarnessVerdict {
    Consistent,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Passed,
    Failed,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    /// Sample seed; `None` for deterministic checks.
    pub seed: Option<u64>,
    pub diagnostics: String,
}

/// Observation that disagrees with a stated claim but is reported rather
/// than treated as a failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub description: String,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessReport {
    pub harness: String,
    pub parameters: Value,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub counterexamples: Vec<Counterexample>,
    pub findings: Vec<Finding>,
    pub measurements: BTreeMap<String, f64>,
    pub verdict: HarnessVerdict,
}

impl HarnessReport {
    fn new(harness: &str, parameters: Value) -> Self {
        HarnessReport {
            harness: harness.to_string(),
            parameters,
            samples: 0,
            checks: Vec::new(),
            counterexamples: Vec::new(),
            findings: Vec::new(),
            measurements: BTreeMap::new(),
            verdict: HarnessVerdict::Consistent,
        }
    }

    fn check(&mut self, name: &str, status: CheckStatus, detail: String) {
        if status == CheckStatus::Failed {
            self.counterexamples.push(Counterexample {
                check: name.to_string(),
                seed: None,
                diagnostics: detail.clone(),
            });
        }
        self.checks.push(CheckResult {
            name: name.to_string(),
            status,
            detail,
        });
    }

    fn finish(mut self) -> Self {
        self.verdict = if !self.counterexamples.is_empty() {
            HarnessVerdict::Violated
        } else if !self.checks.is_empty()
            && self
                .checks
                .iter()
                .all(|c| c.status == CheckStatus::NotApplicable)
        {
            HarnessVerdict::NotApplicable
        } else {
            HarnessVerdict::Consistent
        };
        self
    }
}

fn status(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Passed
    } else {
        CheckStatus::Failed
    }
}

fn factor_basis(n: usize) -> Result<Sym2Basis> {
    if n == 1 {
        Ok(Sym2Basis::empty(1))
    } else {
        standard_basis(n)
    }
}

fn factor_spectrum(r: &CurvatureTensor) -> Result<Vec<f64>> {
    if r.dim() == 1 {
        Ok(Vec::new())
    } else {
        Ok(spectrum(r)?.eigenvalues)
    }
}

fn block_max(m: &SymMatrix, rows: &[usize], cols: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for &a in rows {
        for &b in cols {
            worst = worst.max(m.get(a, b).abs());
        }
    }
    worst
}

/// Verifies the product structure of `R_1 ⊕ R_2` in the product-adapted
/// basis: mixed rows vanish for arbitrary factors; for Einstein factors the
/// matrix is block diagonal with the factor operators on the factor blocks,
/// the trace-difference entry equals `−(n2ρ1 + n1ρ2)/(n1+n2)` and the
/// spectrum is the union of the factor spectra, `n1·n2` zeros and that
/// entry.
pub fn verify_product_structure(
    r1: &CurvatureTensor,
    r2: &CurvatureTensor,
    tol: f64,
) -> Result<HarnessReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let (n1, n2) = (r1.dim(), r2.dim());
    let mut report = HarnessReport::new(
        "product-structure",
        json!({ "n1": n1, "n2": n2, "tol": tol }),
    );
    report.samples = 1;

    let b1 = factor_basis(n1)?;
    let b2 = factor_basis(n2)?;
    let basis = product_adapted_basis(n1, n2, &b1, &b2)?;
    let r = product(r1, r2);
    let m = operator_matrix(&r, &basis)?;
    let idx_f1 = basis.indices_of(BasisLabel::Factor1);
    let idx_f2 = basis.indices_of(BasisLabel::Factor2);
    let idx_mixed = basis.indices_of(BasisLabel::Mixed);
    let idx_trace = basis.indices_of(BasisLabel::Trace);

    let xi_row_norm = idx_mixed
        .iter()
        .map(|&a| m.row(a).iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    report
        .measurements
        .insert("xi_row_norm_max".into(), xi_row_norm);
    report.check(
        "mixed-kernel",
        status(xi_row_norm <= tol),
        format!("largest mixed-row norm {xi_row_norm:e}"),
    );

    let zeta = idx_trace[0];
    let zeta_entry = m.get(zeta, zeta);
    report.measurements.insert("zeta_entry".into(), zeta_entry);

    let rho1 = r1.einstein_constant(detector_tol(r1));
    let rho2 = r2.einstein_constant(detector_tol(r2));
    let (rho1, rho2) = match (rho1, rho2) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let why = format!("factor Einstein constants: {:?}, {:?}", rho1, rho2);
            report.check("block-diagonal", CheckStatus::NotApplicable, why.clone());
            report.check("trace-eigenvalue", CheckStatus::NotApplicable, why.clone());
            report.check("spectrum-union", CheckStatus::NotApplicable, why);
            return Ok(report.finish());
        }
    };
    report.measurements.insert("rho1".into(), rho1);
    report.measurements.insert("rho2".into(), rho2);

    let groups = [&idx_f1, &idx_f2, &idx_mixed, &idx_trace];
    let mut off_block: f64 = 0.0;
    for (g, rows) in groups.iter().enumerate() {
        for (h, cols) in groups.iter().enumerate() {
            if g != h {
                off_block = off_block.max(block_max(&m, rows, cols));
            }
        }
    }
    let mut factor_dev: f64 = 0.0;
    for (rows, factor, fb) in [(&idx_f1, r1, &b1), (&idx_f2, r2, &b2)] {
        if fb.is_empty() {
            continue;
        }
        let fm = operator_matrix(factor, fb)?;
        for (x, &a) in rows.iter().enumerate() {
            for (y, &b) in rows.iter().enumerate() {
                factor_dev = factor_dev.max((m.get(a, b) - fm.get(x, y)).abs());
            }
        }
    }
    report.check(
        "block-diagonal",
        status(off_block <= tol && factor_dev <= tol),
        format!("off-block max {off_block:e}; factor-block deviation {factor_dev:e}"),
    );

    let (f1, f2) = (n1 as f64, n2 as f64);
    let expected_zeta = -(f2 * rho1 + f1 * rho2) / (f1 + f2);
    report.check(
        "trace-eigenvalue",
        status((zeta_entry - expected_zeta).abs() <= tol),
        format!("zeta entry {zeta_entry} vs {expected_zeta}"),
    );

    let mut predicted = factor_spectrum(r1)?;
    predicted.extend(factor_spectrum(r2)?);
    predicted.extend(std::iter::repeat_n(0.0, n1 * n2));
    predicted.push(expected_zeta);
    predicted.sort_by(f64::total_cmp);
    let actual = spectrum(&r)?.eigenvalues;
    let dev = actual
        .iter()
        .zip(&predicted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    report.measurements.insert("spectrum_deviation".into(), dev);
    report.check(
        "spectrum-union",
        status(actual.len() == predicted.len() && dev <= tol),
        format!("max eigenvalue deviation {dev:e}"),
    );
    Ok(report.finish())
}

/// Harness selector for [`check_rigidity`].
#[derive(Debug, Clone, PartialEq)]
pub enum RigidityCase {
    /// `R_1 ⊕ 0` on `ℝ^{n−1} ⊕ ℝ` at `α = n + (n−2)/n`.
    Line { n: usize },
    /// `R_1 ⊕ R_2` at `α = A_{n1,n2}`.
    ProductSpheres { n1: usize, n2: usize },
    /// Kähler `R_1 ⊕ R_2` at `α = B_{m1,m2}`.
    ProductKahler { m1: usize, m2: usize },
    /// Sphere/hyperbolic products over a curvature grid at `A_{n1,n2}`.
    IffSpheres {
        n1: usize,
        n2: usize,
        kappas: Vec<f64>,
    },
    /// Complex projective/hyperbolic products over a grid at `B_{m1,m2}`.
    IffKahler {
        m1: usize,
        m2: usize,
        kappas: Vec<f64>,
    },
}

impl RigidityCase {
    pub fn name(&self) -> &'static str {
        match self {
            RigidityCase::Line { .. } => "line",
            RigidityCase::ProductSpheres { .. } => "product-spheres",
            RigidityCase::ProductKahler { .. } => "product-kahler",
            RigidityCase::IffSpheres { .. } => "iff-spheres",
            RigidityCase::IffKahler { .. } => "iff-kahler",
        }
    }

    /// Default curvature grid `{0.25, 0.5, …, 2}`.
    pub fn default_kappas() -> Vec<f64> {
        (1..=8).map(|k| 0.25 * k as f64).collect()
    }
}

/// Per-sample stream seed.
fn sample_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

fn signed_scale(rng: &mut ChaCha8Rng) -> f64 {
    let c = rng.gen_range(0.5..2.0);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

fn small_eps(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.gen_range(-3.0..-1.0))
}

#[derive(Default)]
struct SampleOutcome {
    counterexamples: Vec<Counterexample>,
    nonneg: bool,
    nonpos: bool,
}

/// Checks one product sample `r1 ⊕ r2` at `alpha`:
/// * nonnegative ⇒ both factors match the model detector with one common
///   constant `c ≥ 0` (nonpositive dually);
/// * non-flat ⇒ both thresholds are at least `alpha`.
#[allow(clippy::too_many_arguments)]
fn check_product_sample(
    r1: &CurvatureTensor,
    r2: &CurvatureTensor,
    alpha: f64,
    tol: f64,
    seed: u64,
    description: &str,
    detector: &dyn Fn(&CurvatureTensor, f64) -> Result<Option<f64>>,
    require_common_constant: bool,
) -> Result<SampleOutcome> {
    let r = product(r1, r2);
    let s = spectrum(&r)?;
    let verdict = classify_spectrum(&s, alpha)?;
    let mut out = SampleOutcome {
        nonneg: verdict.is_nonnegative(),
        nonpos: verdict.is_nonpositive(),
        ..Default::default()
    };
    let dt = detector_tol(&r);
    let mut fail = |check: &str, msg: String| {
        out.counterexamples.push(Counterexample {
            check: check.to_string(),
            seed: Some(seed),
            diagnostics: format!("{description}: {msg}"),
        });
    };

    for (flag, sign, name) in [
        (verdict.is_nonnegative(), 1.0, "nonnegative"),
        (verdict.is_nonpositive(), -1.0, "nonpositive"),
    ] {
        if !flag {
            continue;
        }
        let c1 = detector(r1, dt)?;
        let c2 = detector(r2, dt)?;
        match (c1, c2) {
            (Some(a), Some(b)) => {
                if sign * a < -dt || sign * b < -dt {
                    fail(
                        "rigidity",
                        format!("{name} at alpha={alpha} but factor constants {a}, {b} have the wrong sign"),
                    );
                } else if require_common_constant && (a - b).abs() > dt {
                    fail(
                        "rigidity",
                        format!(
                            "{name} at alpha={alpha} with distinct factor constants {a} and {b}"
                        ),
                    );
                }
            }
            _ => fail(
                "rigidity",
                format!("{name} at alpha={alpha} but factor constants are {c1:?}, {c2:?}"),
            ),
        }
    }

    if !r.is_flat(dt) {
        for (t, name) in [
            (nonneg_threshold(&s), "nonnegative"),
            (nonpos_threshold(&s), "nonpositive"),
        ] {
            if let Some(t) = t {
                if t < alpha - tol {
                    fail(
                        "flatness",
                        format!("non-flat tensor is {name} at alpha={t} < {alpha}"),
                    );
                }
            }
        }
    }
    Ok(out)
}

fn run_samples(
    report: &mut HarnessReport,
    samples: usize,
    seed: u64,
    eval: impl Fn(usize, u64) -> Result<SampleOutcome> + Sync,
) -> Result<()> {
    let outcomes: Vec<SampleOutcome> = (0..samples)
        .into_par_iter()
        .map(|i| eval(i, sample_seed(seed, i)))
        .collect::<Result<_>>()?;
    report.samples += samples;
    let nonneg = outcomes.iter().filter(|o| o.nonneg).count();
    let nonpos = outcomes.iter().filter(|o| o.nonpos).count();
    report
        .measurements
        .insert("samples_nonnegative".into(), nonneg as f64);
    report
        .measurements
        .insert("samples_nonpositive".into(), nonpos as f64);
    let bad: Vec<Counterexample> = outcomes
        .into_iter()
        .flat_map(|o| o.counterexamples)
        .collect();
    let failed = bad.len();
    report.counterexamples.extend(bad);
    report.checks.push(CheckResult {
        name: "samples".into(),
        status: status(failed == 0),
        detail: format!("{samples} samples, {failed} counterexamples"),
    });
    Ok(())
}

fn model_check(
    report: &mut HarnessReport,
    model: &CurvatureTensor,
    alpha: f64,
    tol: f64,
    expect_threshold_at_alpha: bool,
) -> Result<()> {
    let s = spectrum(model)?;
    let g = alpha_sum(&s, alpha)?;
    let t = nonneg_threshold(&s);
    report.measurements.insert("model_g_at_alpha".into(), g);
    if let Some(t) = t {
        report.measurements.insert("model_threshold".into(), t);
    }
    if expect_threshold_at_alpha {
        let ok = t.is_some_and(|t| (t - alpha).abs() <= tol) && g.abs() <= MODEL_G_TOL;
        report.check(
            "model-equality",
            status(ok),
            format!("model threshold {t:?} vs alpha {alpha}; g(alpha) = {g:e}"),
        );
    } else {
        report.check(
            "model-nonnegative",
            status(g >= -tol),
            format!("model threshold {t:?}; g(alpha={alpha}) = {g:e}"),
        );
    }
    Ok(())
}

fn sphere_grid_closed_form(n1: usize, n2: usize, k1: f64, k2: f64) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    let a1 = b * (a - 1.0) / (a + b);
    let a2 = a * (b - 1.0) / (a + b);
    (a1 + a2) * k1.min(k2) - a1 * k1 - a2 * k2
}

/// Runs one rigidity harness; see [`RigidityCase`].
pub fn check_rigidity(
    case: &RigidityCase,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<HarnessReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    match case {
        RigidityCase::Line { n } => {
            let n = *n;
            if n < 3 {
                return Err(Error::invalid(format!(
                    "line harness needs n >= 3 (a factor of dimension at least 2), got {n}"
                )));
            }
            let alpha = a_const(n - 1, 1);
            let mut report = HarnessReport::new(
                case.name(),
                json!({ "n": n, "alpha": alpha, "seed": seed, "samples": samples, "tol": tol }),
            );
            let line = CurvatureTensor::zero(1)?;
            model_check(
                &mut report,
                &product(&space_form(n - 1, 1.0)?, &line),
                alpha,
                tol,
                true,
            )?;
            let detector = |r: &CurvatureTensor, t: f64| Ok(r.constant_sectional(t));
            run_samples(&mut report, samples, seed, |i, s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let sub = rng.gen::<u64>();
                let (r1, what) = match i % 4 {
                    0 => (random_curvature(n - 1, sub, 1.0)?, "random"),
                    1 => {
                        let c = signed_scale(&mut rng);
                        let eps = small_eps(&mut rng);
                        let model = space_form(n - 1, c)?;
                        (
                            model.add_scaled(&random_curvature(n - 1, sub, 1.0)?, eps)?,
                            "perturbed model",
                        )
                    }
                    2 => (space_form(n - 1, signed_scale(&mut rng))?, "model"),
                    _ => {
                        let scale = 10f64.powf(rng.gen_range(-1.0..1.0));
                        (random_curvature(n - 1, sub, scale)?, "random (scaled)")
                    }
                };
                check_product_sample(&r1, &line, alpha, tol, s, what, &detector, false)
            })?;
            Ok(report.finish())
        }
        RigidityCase::ProductSpheres { n1, n2 } => {
            let (n1, n2) = (*n1, *n2);
            if n1 < 2 || n2 < 2 {
                return Err(Error::invalid("product-spheres needs n1, n2 >= 2"));
            }
            let alpha = a_const(n1, n2);
            let mut report = HarnessReport::new(
                case.name(),
                json!({ "n1": n1, "n2": n2, "alpha": alpha, "seed": seed, "samples": samples, "tol": tol }),
            );
            model_check(
                &mut report,
                &product(&space_form(n1, 1.0)?, &space_form(n2, 1.0)?),
                alpha,
                tol,
                true,
            )?;
            let detector = |r: &CurvatureTensor, t: f64| Ok(r.constant_sectional(t));
            run_samples(&mut report, samples, seed, |i, s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let (sa, sb) = (rng.gen::<u64>(), rng.gen::<u64>());
                let (r1, r2, what) = match i % 4 {
                    0 => (
                        random_curvature(n1, sa, 1.0)?,
                        random_curvature(n2, sb, 1.0)?,
                        "random pair",
                    ),
                    1 => {
                        let c = signed_scale(&mut rng);
                        let eps = small_eps(&mut rng);
                        (
                            space_form(n1, c)?.add_scaled(&random_curvature(n1, sa, 1.0)?, eps)?,
                            space_form(n2, c)?.add_scaled(&random_curvature(n2, sb, 1.0)?, eps)?,
                            "perturbed model",
                        )
                    }
                    2 => {
                        let c = signed_scale(&mut rng);
                        (space_form(n1, c)?, space_form(n2, c)?, "model")
                    }
                    _ => {
                        let c1 = signed_scale(&mut rng);
                        let c2 = c1.signum() * rng.gen_range(0.5..2.0);
                        (
                            space_form(n1, c1)?,
                            space_form(n2, c2)?,
                            "unequal space forms",
                        )
                    }
                };
                check_product_sample(&r1, &r2, alpha, tol, s, what, &detector, true)
            })?;
            Ok(report.finish())
        }
        RigidityCase::ProductKahler { m1, m2 } => {
            let (m1, m2) = (*m1, *m2);
            if m1 < 1 || m2 < 1 {
                return Err(Error::invalid("product-kahler needs m1, m2 >= 1"));
            }
            let alpha = b_const(m1, m2);
            let mut report = HarnessReport::new(
                case.name(),
                json!({ "m1": m1, "m2": m2, "alpha": alpha, "seed": seed, "samples": samples, "tol": tol }),
            );
            let j1 = ComplexStructure::standard(m1)?;
            let j2 = ComplexStructure::standard(m2)?;
            let model = product(&kahler_tensor(&j1, 1.0), &kahler_tensor(&j2, 1.0));
            model_check(&mut report, &model, alpha, tol, false)?;
            let detector = |r: &CurvatureTensor, t: f64| {
                let j = if r.dim() == j1.dim() { &j1 } else { &j2 };
                r.constant_holomorphic(j, t)
            };
            run_samples(&mut report, samples, seed, |i, s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let (sa, sb) = (rng.gen::<u64>(), rng.gen::<u64>());
                let (r1, r2, what) = match i % 4 {
                    0 => (
                        random_kahler_curvature(&j1, sa, 1.0)?,
                        random_kahler_curvature(&j2, sb, 1.0)?,
                        "random Kähler pair",
                    ),
                    1 => {
                        let c = signed_scale(&mut rng);
                        let eps = small_eps(&mut rng);
                        (
                            kahler_tensor(&j1, c)
                                .add_scaled(&random_kahler_curvature(&j1, sa, 1.0)?, eps)?,
                            kahler_tensor(&j2, c)
                                .add_scaled(&random_kahler_curvature(&j2, sb, 1.0)?, eps)?,
                            "perturbed model",
                        )
                    }
                    2 => {
                        let c = signed_scale(&mut rng);
                        (kahler_tensor(&j1, c), kahler_tensor(&j2, c), "model")
                    }
                    _ => {
                        let c1 = signed_scale(&mut rng);
                        let c2 = c1.signum() * rng.gen_range(0.5..2.0);
                        (
                            kahler_tensor(&j1, c1),
                            kahler_tensor(&j2, c2),
                            "unequal Kähler space forms",
                        )
                    }
                };
                check_product_sample(&r1, &r2, alpha, tol, s, what, &detector, true)
            })?;
            Ok(report.finish())
        }
        RigidityCase::IffSpheres { n1, n2, kappas } => {
            let (n1, n2) = (*n1, *n2);
            if n1 < 2 || n2 < 2 {
                return Err(Error::invalid("iff-spheres needs n1, n2 >= 2"));
            }
            if kappas.is_empty() || kappas.iter().any(|k| !k.is_finite() || *k <= 0.0) {
                return Err(Error::invalid(
                    "curvature grid must be nonempty and positive",
                ));
            }
            let alpha = a_const(n1, n2);
            let mut report = HarnessReport::new(
                case.name(),
                json!({ "n1": n1, "n2": n2, "alpha": alpha, "kappas": kappas, "tol": tol }),
            );
            let mut mismatches = 0;
            let mut worst_closed: f64 = 0.0;
            for &k1 in kappas {
                for &k2 in kappas {
                    let sph = spectrum(&product(&space_form(n1, k1)?, &space_form(n2, k2)?))?;
                    let hyp = sph.negated();
                    let g = alpha_sum(&sph, alpha)?;
                    let closed = sphere_grid_closed_form(n1, n2, k1, k2);
                    worst_closed = worst_closed.max((g - closed).abs());
                    if (g - closed).abs() > tol {
                        report.counterexamples.push(Counterexample {
                            check: "closed-form".into(),
                            seed: None,
                            diagnostics: format!(
                                "kappa=({k1},{k2}): g(A)={g} but closed form gives {closed}"
                            ),
                        });
                    }
                    report.samples += 1;
                    for (label, s, want_flag) in
                        [("sphere", &sph, true), ("hyperbolic", &hyp, false)]
                    {
                        let v = classify_spectrum(s, alpha)?;
                        let holds = if want_flag {
                            v.is_nonnegative()
                        } else {
                            v.is_nonpositive()
                        };
                        let predicted = k1 == k2;
                        if holds != predicted {
                            mismatches += 1;
                            report.findings.push(Finding {
                                description: format!(
                                    "{label} product verdict disagrees with the kappa1 = kappa2 predicate"
                                ),
                                data: json!({ "kappa1": k1, "kappa2": k2, "verdict": v, "g_at_alpha": alpha_sum(s, alpha)? }),
                            });
                        }
                    }
                }
            }
            report
                .measurements
                .insert("closed_form_deviation".into(), worst_closed);
            report
                .measurements
                .insert("mismatches".into(), mismatches as f64);
            report.checks.push(CheckResult {
                name: "iff-grid".into(),
                status: CheckStatus::Passed,
                detail: format!(
                    "{} grid points, {mismatches} mismatches reported as findings",
                    report.samples
                ),
            });
            Ok(report.finish())
        }
        RigidityCase::IffKahler { m1, m2, kappas } => {
            let (m1, m2) = (*m1, *m2);
            if m1 < 1 || m2 < 1 {
                return Err(Error::invalid("iff-kahler needs m1, m2 >= 1"));
            }
            if kappas.is_empty() || kappas.iter().any(|k| !k.is_finite() || *k <= 0.0) {
                return Err(Error::invalid(
                    "curvature grid must be nonempty and positive",
                ));
            }
            let alpha = b_const(m1, m2);
            let mut report = HarnessReport::new(
                case.name(),
                json!({ "m1": m1, "m2": m2, "alpha": alpha, "kappas": kappas, "tol": tol }),
            );
            let model = spectrum(&product(
                &kahler_space_form(m1, 1.0)?.0,
                &kahler_space_form(m2, 1.0)?.0,
            ))?;
            if let Some(t) = nonneg_threshold(&model) {
                report.measurements.insert("model_threshold".into(), t);
                report
                    .measurements
                    .insert("alpha_minus_model_threshold".into(), alpha - t);
            }
            let mut mismatches = 0;
            for &k1 in kappas {
                for &k2 in kappas {
                    let cp = spectrum(&product(
                        &kahler_space_form(m1, k1)?.0,
                        &kahler_space_form(m2, k2)?.0,
                    ))?;
                    let ch = cp.negated();
                    report.samples += 1;
                    for (label, s, want_flag) in
                        [("projective", &cp, true), ("hyperbolic", &ch, false)]
                    {
                        let v = classify_spectrum(s, alpha)?;
                        let holds = if want_flag {
                            v.is_nonnegative()
                        } else {
                            v.is_nonpositive()
                        };
                        if holds != (k1 == k2) {
                            mismatches += 1;
                            report.findings.push(Finding {
                                description: format!(
                                    "complex {label} product verdict disagrees with the kappa1 = kappa2 predicate"
                                ),
                                data: json!({
                                    "kappa1": k1,
                                    "kappa2": k2,
                                    "verdict": v,
                                    "g_at_alpha": alpha_sum(s, alpha)?,
                                    "threshold": nonneg_threshold(s),
                                }),
                            });
                        }
                    }
                }
            }
            report
                .measurements
                .insert("mismatches".into(), mismatches as f64);
            report.checks.push(CheckResult {
                name: "iff-grid".into(),
                status: CheckStatus::Passed,
                detail: format!(
                    "{} grid points, {mismatches} mismatches reported as findings",
                    report.samples
                ),
            });
            Ok(report.finish())
        }
    }
}

/// Diagonal values of the operator in the product-adapted basis, grouped the
/// way the averaging argument uses them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDiagonals {
    /// Diagonal values on the first factor's traceless tensors.
    pub factor1: Vec<f64>,
    pub factor2: Vec<f64>,
    /// Sum of the diagonal values on the mixed tensors.
    pub mixed_sum: f64,
    /// Diagonal value on the trace-difference tensor.
    pub zeta: f64,
}

/// Diagonal values of `R_1 ⊕ R_2` in the product-adapted basis built from
/// the standard factor bases.
pub fn product_diagonals(r1: &CurvatureTensor, r2: &CurvatureTensor) -> Result<ProductDiagonals> {
    let (n1, n2) = (r1.dim(), r2.dim());
    let basis = product_adapted_basis(n1, n2, &factor_basis(n1)?, &factor_basis(n2)?)?;
    let m = operator_matrix(&product(r1, r2), &basis)?;
    let diag = |label| -> Vec<f64> {
        basis
            .indices_of(label)
            .iter()
            .map(|&a| m.get(a, a))
            .collect()
    };
    Ok(ProductDiagonals {
        factor1: diag(BasisLabel::Factor1),
        factor2: diag(BasisLabel::Factor2),
        mixed_sum: diag(BasisLabel::Mixed).iter().sum(),
        zeta: diag(BasisLabel::Trace)[0],
    })
}

/// Diagonal values of a Kähler curvature tensor in the Kähler-adapted basis:
/// the φ⁻/ψ⁻/η family and the φ⁺/ψ⁺/alpha-diagonal family.
#[derive(Debug, Clone, PartialEq)]
pub struct KahlerDiagonals {
    pub minus_family: Vec<f64>,
    pub plus_family: Vec<f64>,
}

pub fn kahler_diagonals(r: &CurvatureTensor, j: &ComplexStructure) -> Result<KahlerDiagonals> {
    let basis = kahler_basis(j.complex_dim(), j)?;
    let m = operator_matrix(r, &basis)?;
    let mut minus_family = Vec::new();
    let mut plus_family = Vec::new();
    for (a, label) in basis.labels().iter().enumerate() {
        match label {
            BasisLabel::Minus | BasisLabel::Eta => minus_family.push(m.get(a, a)),
            BasisLabel::Plus | BasisLabel::Alpha => plus_family.push(m.get(a, a)),
            _ => unreachable!("kahler basis only carries plus/minus/alpha/eta labels"),
        }
    }
    Ok(KahlerDiagonals {
        minus_family,
        plus_family,
    })
}

/// Verdict of `r` at `alpha`.
pub fn verdict_at(r: &CurvatureTensor, alpha: f64) -> Result<Verdict> {
    classify_spectrum(&spectrum(r)?, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_small_cases() {
        assert!((a_const(2, 2) - 6.0).abs() < 1e-15);
        assert!((a_const(3, 1) - (4.0 + 1.0 / 2.0)).abs() < 1e-15);
        assert!((b_const(1, 1) - 7.5).abs() < 1e-15);
        assert!((b_const(1, 2) - (8.0 + 7.5 + 2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn line_constant_is_a_with_unit_factor() {
        for n in 3..10 {
            let nf = n as f64;
            assert!((a_const(n - 1, 1) - (nf + (nf - 2.0) / nf)).abs() < 1e-12);
        }
    }

    #[test]
    fn f_lemma_basics() {
        let v = [3.0, 1.0, 2.0];
        assert_eq!(f_lemma(&v, 1.0).unwrap(), 1.0);
        assert!((f_lemma(&v, 2.5).unwrap() - 4.5).abs() < 1e-15);
        assert!(f_lemma_gap(&v, 2.0).unwrap() > 0.0);
        assert!(f_lemma_gap(&[2.0; 4], 2.5).unwrap().abs() < 1e-15);
        assert!(f_lemma(&v, 0.5).is_err());
        assert!(f_lemma(&v, 3.5).is_err());
    }

    #[test]
    fn product_structure_of_space_forms() {
        let r1 = space_form(3, 1.0).unwrap();
        let r2 = space_form(2, -0.5).unwrap();
        let rep = verify_product_structure(&r1, &r2, 1e-9).unwrap();
        assert_eq!(rep.verdict, HarnessVerdict::Consistent, "{rep:#?}");
        // ρ1 = 2, ρ2 = −0.5
        let zeta = rep.measurements["zeta_entry"];
        assert!((zeta + (2.0 * 2.0 + 3.0 * -0.5) / 5.0).abs() < 1e-12);
    }

    #[test]
    fn product_structure_with_line_factor() {
        let r1 = space_form(3, 1.0).unwrap();
        let r2 = CurvatureTensor::zero(1).unwrap();
        let rep = verify_product_structure(&r1, &r2, 1e-9).unwrap();
        assert_eq!(rep.verdict, HarnessVerdict::Consistent, "{rep:#?}");
    }

    #[test]
    fn product_structure_non_einstein_is_partial() {
        let r1 = random_curvature(3, 4, 1.0).unwrap();
        let r2 = random_curvature(3, 5, 1.0).unwrap();
        let rep = verify_product_structure(&r1, &r2, 1e-9).unwrap();
        assert_eq!(rep.verdict, HarnessVerdict::Consistent);
        assert_eq!(rep.checks[0].status, CheckStatus::Passed);
        assert!(rep.checks[1..]
            .iter()
            .all(|c| c.status == CheckStatus::NotApplicable));
    }

    #[test]
    fn line_harness_is_consistent() {
        let rep = check_rigidity(&RigidityCase::Line { n: 4 }, 0, 24, 1e-9).unwrap();
        assert_eq!(rep.verdict, HarnessVerdict::Consistent, "{rep:#?}");
        assert_eq!(rep.samples, 24);
    }

    #[test]
    fn sphere_harness_is_consistent() {
        let case = RigidityCase::ProductSpheres { n1: 2, n2: 3 };
        let rep = check_rigidity(&case, 7, 16, 1e-9).unwrap();
        assert_eq!(rep.verdict, HarnessVerdict::Consistent, "{rep:#?}");
    }

    #[test]
    fn kahler_harness_reports_unequal_products() {
        // CP¹(κ1) × CP¹(κ2) is already nonnegative below B for κ1 ≠ κ2 of the
        // same sign, and the model threshold sits 3/2 below B.
        let case = RigidityCase::ProductKahler { m1: 1, m2: 1 };
        let rep = check_rigidity(&case, 0, 8, 1e-9).unwrap();
        assert_eq!(rep.verdict, HarnessVerdict::Violated);
        assert!((rep.measurements["model_threshold"] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn harness_is_deterministic() {
        let case = RigidityCase::ProductSpheres { n1: 2, n2: 2 };
        let a = check_rigidity(&case, 11, 8, 1e-9).unwrap();
        let b = check_rigidity(&case, 11, 8, 1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn iff_spheres_grid_matches_predicate() {
        let case = RigidityCase::IffSpheres {
            n1: 2,
            n2: 3,
            kappas: RigidityCase::default_kappas(),
        };
        let rep = check_rigidity(&case, 0, 0, 1e-9).unwrap();
        assert_eq!(rep.verdict, HarnessVerdict::Consistent, "{rep:#?}");
        assert!(rep.findings.is_empty());
        assert_eq!(rep.samples, 64);
    }

    #[test]
    fn iff_kahler_records_findings() {
        let case = RigidityCase::IffKahler {
            m1: 1,
            m2: 1,
            kappas: vec![1.0, 2.0],
        };
        let rep = check_rigidity(&case, 0, 0, 1e-9).unwrap();
        assert!(rep.counterexamples.is_empty());
        assert!(!rep.findings.is_empty());
        assert!((rep.measurements["alpha_minus_model_threshold"] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn invalid_parameters() {
        assert!(check_rigidity(&RigidityCase::Line { n: 2 }, 0, 1, 1e-9).is_err());
        assert!(
            check_rigidity(&RigidityCase::ProductSpheres { n1: 1, n2: 3 }, 0, 1, 1e-9).is_err()
        );
        assert!(check_rigidity(&RigidityCase::ProductKahler { m1: 0, m2: 1 }, 0, 1, 1e-9).is_err());
        assert!(check_rigidity(&RigidityCase::Line { n: 4 }, 0, 1, 0.0).is_err());
        let bad = RigidityCase::IffSpheres {
            n1: 2,
            n2: 2,
            kappas: vec![-1.0],
        };
        assert!(check_rigidity(&bad, 0, 0, 1e-9).is_err());
    }

    #[test]
    fn kahler_diagonal_identities() {
        let j = ComplexStructure::standard(2).unwrap();
        let r = random_kahler_curvature(&j, 3, 1.0).unwrap();
        let d = kahler_diagonals(&r, &j).unwrap();
        let s = r.scalar();
        let m = 2.0;
        let minus: f64 = d.minus_family.iter().sum();
        assert!((minus + (m - 1.0) / (2.0 * m) * s).abs() < 1e-9);
        let mean = d.plus_family.iter().sum::<f64>() / d.plus_family.len() as f64;
        assert!((mean - s / (m * (m + 1.0))).abs() < 1e-9);
    }
}
