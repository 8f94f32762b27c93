use std::time::Instant;

use serde::Serialize;

use secondkind::numerics::Cluster;
use secondkind::operator::{
    alpha_sum, classify_spectrum, nonneg_threshold, nonpos_threshold, spectrum,
};
use secondkind::rigidity::DETECTOR_REL_TOL;
use secondkind::{sym2_dim, Verdict};

use crate::closed_form::{closed_form, compare, Comparison};
use crate::descriptor::ManifoldDescriptor;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub nonneg: Option<f64>,
    pub nonpos: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaVerdict {
    /// The `--alpha` argument as given (a number, `A`, `B` or `line`).
    pub requested: String,
    pub alpha: f64,
    pub weighted_sum: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub input: ManifoldDescriptor,
    pub n: usize,
    #[serde(rename = "N")]
    pub sym2_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<Cluster>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub einstein: Option<Option<f64>>,
    pub thresholds: Thresholds,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<AlphaVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Option<Comparison>>,
    pub timing: Timing,
}

/// Which parts of the report to fill in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detail {
    Full,
    ThresholdsOnly,
}

/// Resolves an `--alpha` argument against the descriptor's shape.
pub fn resolve_alpha(desc: &ManifoldDescriptor, raw: &str) -> Result<f64, CliError> {
    let missing = |what: &str| CliError::Usage(format!("alpha `{raw}` needs {what}"));
    match raw {
        "A" => desc
            .a_constant()
            .ok_or_else(|| missing("a two-factor product")),
        "B" => desc
            .b_constant()
            .ok_or_else(|| missing("a product of two complex factors (cp, ch, complex_euclidean)")),
        "line" => desc
            .line_constant()
            .ok_or_else(|| missing("total dimension at least 3")),
        _ => raw
            .parse::<f64>()
            .ok()
            .filter(|a| a.is_finite())
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "alpha must be a number, `A`, `B` or `line`, got `{raw}`"
                ))
            }),
    }
}

pub fn build_report(
    desc: &ManifoldDescriptor,
    alphas: &[String],
    detail: Detail,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let r = desc.tensor()?;
    let s = spectrum(&r)?;
    let mut verdicts = Vec::new();
    for raw in alphas {
        let alpha = resolve_alpha(desc, raw)?;
        verdicts.push(AlphaVerdict {
            requested: raw.clone(),
            alpha,
            weighted_sum: alpha_sum(&s, alpha)?,
            verdict: classify_spectrum(&s, alpha)?,
        });
    }
    let full = detail == Detail::Full;
    let tol = DETECTOR_REL_TOL * r.max_abs().max(1.0);
    Ok(Report {
        input: desc.clone(),
        n: r.dim(),
        sym2_dim: sym2_dim(r.dim()),
        thresholds: Thresholds {
            nonneg: nonneg_threshold(&s),
            nonpos: nonpos_threshold(&s),
        },
        scalar: full.then(|| r.scalar()),
        einstein: full.then(|| r.einstein_constant(tol)),
        closed_form: full.then(|| closed_form(desc).map(|cf| compare(&cf, &s))),
        clusters: full.then_some(s.clusters),
        verdicts,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}
