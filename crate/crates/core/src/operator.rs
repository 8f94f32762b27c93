//! The curvature operator of the second kind as a symmetric matrix on
//! traceless symmetric two-tensors, together with the fractional α-sums
//! built from its spectrum.
//!
//! For a basis `{φ_a}` of `S²₀` the operator matrix is
//! `M[a,b] = Σ_{ijkl} R[i,j,k,l] φ_a[i,l] φ_b[j,k]`; in an orthonormal basis
//! of the traceless part this represents `π ∘ R̊`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::numerics::{
    cluster_spectrum, jacobi_eigen, random_orthonormal_family, Cluster, SymMatrix, CLUSTER_TOL,
};
use crate::sym2::{standard_basis, Sym2Basis, Sym2Tensor};

/// Tolerance on `g(α)` used by the verdicts.
pub const VERDICT_TOL: f64 = 1e-9;

/// `R̊(φ)[j,k] = Σ_{i,l} R[i,j,k,l] φ[i,l]`, the image of `φ` before
/// projection to the traceless part.
pub fn apply(r: &CurvatureTensor, phi: &Sym2Tensor) -> Sym2Tensor {
    let n = r.dim();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            let p = phi.get(i, l);
            if p == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    out[j * n + k] += r.get(i, j, k, l) * p;
                }
            }
        }
    }
    Sym2Tensor::from_dense(n, out)
}

/// The bilinear form `R̊(φ, ψ) = Σ R[i,j,k,l] φ[i,l] ψ[j,k]`.
pub fn pairing(r: &CurvatureTensor, phi: &Sym2Tensor, psi: &Sym2Tensor) -> f64 {
    apply(r, phi).inner(psi)
}

/// Operator matrix in `basis`.
pub fn operator_matrix(r: &CurvatureTensor, basis: &Sym2Basis) -> Result<SymMatrix> {
    if basis.dim() != r.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.dim(),
            got: basis.dim(),
        });
    }
    let images: Vec<Sym2Tensor> = basis.tensors().iter().map(|phi| apply(r, phi)).collect();
    let size = basis.len();
    let mut entries = vec![0.0; size * size];
    for a in 0..size {
        for b in 0..size {
            entries[a * size + b] = images[a].inner(basis.tensor(b));
        }
    }
    // the two triangles agree to rounding; average them
    for a in 0..size {
        for b in (a + 1)..size {
            let mean = 0.5 * (entries[a * size + b] + entries[b * size + a]);
            entries[a * size + b] = mean;
            entries[b * size + a] = mean;
        }
    }
    if size == 0 {
        return Ok(SymMatrix::zeros(0));
    }
    SymMatrix::from_row_major(size, entries)
}

/// Ascending eigenvalues of the operator with clustered multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Builds a spectrum from raw values (sorted here) on an
    /// `n`-dimensional space.
    pub fn from_values(n: usize, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != crate::sym2_dim(n) {
            return Err(Error::invalid(format!(
                "{} eigenvalues given, S^2_0 of dimension {n} has {}",
                values.len(),
                crate::sym2_dim(n)
            )));
        }
        values.sort_by(f64::total_cmp);
        let clusters = cluster_spectrum(&values, CLUSTER_TOL)?;
        Ok(Spectrum {
            n,
            eigenvalues: values,
            clusters,
        })
    }

    /// `N = (n−1)(n+2)/2`.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Spectrum of `−R`.
    pub fn negated(&self) -> Spectrum {
        let values = self.eigenvalues.iter().rev().map(|v| -v).collect();
        let clusters = self
            .clusters
            .iter()
            .rev()
            .map(|c| Cluster {
                value: -c.value,
                multiplicity: c.multiplicity,
            })
            .collect();
        Spectrum {
            n: self.n,
            eigenvalues: values,
            clusters,
        }
    }
}

/// Spectrum of the operator in the standard basis.
pub fn spectrum(r: &CurvatureTensor) -> Result<Spectrum> {
    if r.dim() < 2 {
        return Err(Error::invalid("spectrum needs dimension at least 2"));
    }
    let m = operator_matrix(r, &standard_basis(r.dim())?)?;
    let eig = jacobi_eigen(&m)?;
    Spectrum::from_values(r.dim(), eig.values)
}

/// Weighted sum of ascending `values`:
/// `v_1 + … + v_⌊α⌋ + (α − ⌊α⌋) v_{⌊α⌋+1}` for `1 ≤ α ≤ len`.
pub fn weighted_partial_sum(ascending: &[f64], alpha: f64) -> Result<f64> {
    let len = ascending.len();
    if !(alpha >= 1.0 && alpha <= len as f64) {
        return Err(Error::invalid(format!(
            "alpha = {alpha} outside [1, {len}]"
        )));
    }
    let whole = alpha.floor() as usize;
    let frac = alpha - whole as f64;
    let mut sum: f64 = ascending[..whole].iter().sum();
    if whole < len && frac > 0.0 {
        sum += frac * ascending[whole];
    }
    Ok(sum)
}

/// `g(α)` on the spectrum: the fractional sum of the smallest eigenvalues.
pub fn alpha_sum(s: &Spectrum, alpha: f64) -> Result<f64> {
    weighted_partial_sum(&s.eigenvalues, alpha)
}

/// α-classification of a curvature tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Nonnegative,
    Nonpositive,
    Both,
    Neither,
}

impl Verdict {
    pub fn from_flags(nonnegative: bool, nonpositive: bool) -> Self {
        match (nonnegative, nonpositive) {
            (true, true) => Verdict::Both,
            (true, false) => Verdict::Nonnegative,
            (false, true) => Verdict::Nonpositive,
            (false, false) => Verdict::Neither,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        matches!(self, Verdict::Nonnegative | Verdict::Both)
    }

    pub fn is_nonpositive(self) -> bool {
        matches!(self, Verdict::Nonpositive | Verdict::Both)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Nonnegative => "nonnegative",
            Verdict::Nonpositive => "nonpositive",
            Verdict::Both => "both",
            Verdict::Neither => "neither",
        })
    }
}

/// Verdict from a precomputed spectrum.
pub fn classify_spectrum(s: &Spectrum, alpha: f64) -> Result<Verdict> {
    let nonneg = alpha_sum(s, alpha)? >= -VERDICT_TOL;
    let nonpos = alpha_sum(&s.negated(), alpha)? >= -VERDICT_TOL;
    Ok(Verdict::from_flags(nonneg, nonpos))
}

pub fn classify(r: &CurvatureTensor, alpha: f64) -> Result<Verdict> {
    classify_spectrum(&spectrum(r)?, alpha)
}

/// Least `α ∈ [1, N]` with `g(α) ≥ 0`.
///
/// `g` is convex and piecewise linear with slope `λ_{k+1}` on `[k, k+1]`, so
/// the first crossing is found by walking the breakpoints and solving on the
/// segment. Returns `None` when `g(N) < −1e-9`; when `g(N)` lies within that
/// tolerance below zero the answer is `N`.
pub fn nonneg_threshold(s: &Spectrum) -> Option<f64> {
    let values = &s.eigenvalues;
    let len = values.len();
    if len == 0 {
        return None;
    }
    if values[0] >= 0.0 {
        return Some(1.0);
    }
    // g(k) for integer k, starting at k = 1
    let mut g = values[0];
    for (k, &slope) in values.iter().enumerate().skip(1) {
        let next = g + slope;
        if next >= 0.0 {
            // g(k) < 0 ≤ g(k+1), slope > 0
            let root = k as f64 + (-g) / slope;
            return Some(root.min((k + 1) as f64));
        }
        g = next;
    }
    (g >= -VERDICT_TOL).then_some(len as f64)
}

/// Least `α` with `−R` α-nonnegative.
pub fn nonpos_threshold(s: &Spectrum) -> Option<f64> {
    nonneg_threshold(&s.negated())
}

/// Result of [`bruteforce_min_alpha_sum`].
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce {
    /// Minimum weighted diagonal sum over all evaluated bases.
    pub min: f64,
    /// Index of the minimising sample (0 is the eigenbasis).
    pub argmin_sample: usize,
    /// Seed of the minimising sample (`seed ^ index`; `None` for sample 0).
    pub argmin_seed: Option<u64>,
    /// Weighted sum for every sample, index 0 first.
    pub per_sample: Vec<f64>,
}

/// Directly samples the defining quantifier: over `samples` Haar-random
/// orthonormal bases of `S²₀` (rotations of the standard basis in
/// coefficient space) plus the operator's eigenbasis as sample 0, sorts each
/// basis' diagonal values ascending, applies the weights
/// `(1, …, 1, α − ⌊α⌋)` and returns the smallest total.
///
/// Sample `s ≥ 1` uses the stream `seed ^ s`, so the result does not depend
/// on how the samples are split across threads.
pub fn bruteforce_min_alpha_sum(
    r: &CurvatureTensor,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<BruteForce> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let basis = standard_basis(r.dim())?;
    let m = operator_matrix(r, &basis)?;
    let size = m.dim();
    weighted_partial_sum(&vec![0.0; size], alpha)?;

    let eig = jacobi_eigen(&m)?;
    let diagonal_sum = |rows: &[Vec<f64>]| -> Result<f64> {
        let mut diag: Vec<f64> = rows.iter().map(|q| m.quadratic_form(q)).collect();
        diag.sort_by(f64::total_cmp);
        weighted_partial_sum(&diag, alpha)
    };

    let first = diagonal_sum(eig.vectors.vectors())?;
    let rest: Vec<f64> = (1..=samples as u64)
        .into_par_iter()
        .map(|s| {
            let q = random_orthonormal_family(size, size, seed ^ s)?;
            diagonal_sum(q.vectors())
        })
        .collect::<Result<_>>()?;

    let mut per_sample = Vec::with_capacity(samples + 1);
    per_sample.push(first);
    per_sample.extend(rest);
    let (argmin_sample, &min) = per_sample
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .unwrap();
    Ok(BruteForce {
        min,
        argmin_sample,
        argmin_seed: (argmin_sample > 0).then_some(seed ^ argmin_sample as u64),
        per_sample,
    })
}
