//! Dense linear algebra at the sizes this crate needs (matrices up to a few
//! hundred rows): a cyclic Jacobi eigensolver, seeded orthonormal families
//! and clustering of sorted spectra.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entrywise tolerance accepted when constructing a [`SymMatrix`] from
/// possibly asymmetric data.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Hard cap on the number of Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Default relative tolerance for merging eigenvalues into clusters.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Real symmetric matrix stored row-major. Symmetry is exact: the
/// constructors either build both triangles from one value or average the
/// two triangles after checking them.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * values.len() + i] = v;
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting non-square or
    /// asymmetric input (beyond [`SYMMETRY_TOL`] per entry).
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite entry at index {bad}")));
        }
        let mut entries = entries;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i];
                if (a - b).abs() > SYMMETRY_TOL {
                    return Err(Error::invalid(format!(
                        "matrix is not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                let mean = 0.5 * (a + b);
                entries[i * dim + j] = mean;
                entries[j * dim + i] = mean;
            }
        }
        Ok(SymMatrix { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::invalid(format!(
                "matrix is not square: {dim} rows but a row of length {}",
                r.len()
            )));
        }
        Self::from_row_major(dim, rows.concat())
    }

    /// Builds a matrix by evaluating `f(i, j)` on the upper triangle only.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.entries[i * dim + j] = v;
                m.entries[j * dim + i] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SymMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        (0..self.dim).map(|i| v[i] * dot(self.row(i), v)).sum()
    }

    /// Symmetric eigendecomposition; see [`jacobi_eigen`].
    pub fn eigen(&self) -> Result<Eigen> {
        jacobi_eigen(self)
    }
}

/// Result of [`jacobi_eigen`]: ascending eigenvalues and matching unit
/// eigenvectors (`vectors.vector(k)` belongs to `values[k]`).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: OrthonormalFamily,
}

impl Eigen {
    /// `‖Q D Qᵀ − m‖_F`.
    pub fn reconstruction_error(&self, m: &SymMatrix) -> f64 {
        let n = m.dim();
        let mut err = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for (k, &lambda) in self.values.iter().enumerate() {
                    let q = self.vectors.vector(k);
                    acc += q[i] * lambda * q[j];
                }
                let d = acc - m.get(i, j);
                err += d * d;
            }
        }
        err.sqrt()
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps over all pairs `(p, q)` with `p < q`, annihilating each
/// off-diagonal entry with a plane rotation, until the off-diagonal
/// Frobenius norm drops below `1e-13 · max(1, ‖m‖_F)`. Fails with
/// [`Error::NoConvergence`] after [`MAX_SWEEPS`] sweeps.
pub fn jacobi_eigen(m: &SymMatrix) -> Result<Eigen> {
    let n = m.dim();
    let mut a = m.entries.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = 1e-13 * m.frobenius_norm().max(1.0);

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off >= threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
                dim: n,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // t = tan(θ), the smaller root of t² + 2τt − 1 = 0.
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(Eigen {
        values,
        vectors: OrthonormalFamily {
            ambient_dim: n,
            vectors,
        },
    })
}

/// Ordered family of orthonormal vectors in `ℝ^ambient_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFamily {
    ambient_dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl OrthonormalFamily {
    /// Wraps vectors that the caller asserts are orthonormal; checked
    /// against the Gram invariant at `tol`.
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::invalid(
                "vector length differs from ambient dimension",
            ));
        }
        let family = OrthonormalFamily {
            ambient_dim,
            vectors,
        };
        let dev = family.gram_deviation();
        if dev > tol {
            return Err(Error::invalid(format!(
                "family is not orthonormal (Gram deviation {dev:e})"
            )));
        }
        Ok(family)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Largest entrywise deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, w) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(u, w) - target).abs());
            }
        }
        worst
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal family obtained by Gram–Schmidt (with one re-orthogonalisation
/// pass) applied to independent standard normal vectors drawn from a
/// ChaCha8 stream keyed by `seed`. The distribution is invariant under the
/// orthogonal group.
pub fn random_orthonormal_family(
    ambient_dim: usize,
    count: usize,
    seed: u64,
) -> Result<OrthonormalFamily> {
    if count == 0 || ambient_dim == 0 {
        return Err(Error::invalid(
            "count and ambient dimension must be positive",
        ));
    }
    if count > ambient_dim {
        return Err(Error::invalid(format!(
            "cannot fit {count} orthonormal vectors in dimension {ambient_dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    while vectors.len() < count {
        let mut v: Vec<f64> = (0..ambient_dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let initial = dot(&v, &v).sqrt();
        for _ in 0..2 {
            for u in &vectors {
                let proj = dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        // Numerically dependent draw; with Gaussian input this has
        // probability zero, so just redraw.
        if norm <= 1e-8 * initial || norm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        vectors.push(v);
    }
    Ok(OrthonormalFamily {
        ambient_dim,
        vectors,
    })
}

/// One eigenvalue cluster: mean value and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Groups an ascending list into clusters: consecutive values whose gap is at
/// most `rel_tol · max(1, |value|)` are merged and reported by their mean.
pub fn cluster_spectrum(values: &[f64], rel_tol: f64) -> Result<Vec<Cluster>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("spectrum contains non-finite values"));
    }
    if let Some(w) = values.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::invalid(format!(
            "values are not sorted ascending at index {}",
            w + 1
        )));
    }
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len() || {
            let prev = values[i - 1];
            values[i] - prev > rel_tol * prev.abs().max(values[i].abs()).max(1.0)
        };
        if split && i > start {
            let members = &values[start..i];
            clusters.push(Cluster {
                value: members.iter().sum::<f64>() / members.len() as f64,
                multiplicity: members.len(),
            });
            start = i;
        }
    }
    Ok(clusters)
}
