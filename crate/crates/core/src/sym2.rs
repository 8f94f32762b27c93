//! Traceless symmetric two-tensors and the orthonormal bases used to
//! represent the curvature operator of the second kind.
//!
//! The inner product is the Frobenius pairing `⟨φ, ψ⟩ = Σ φ[i,j] ψ[i,j]`
//! and the symmetric product is `(u ⊙ v)[i,j] = u_i v_j + u_j v_i`.

use serde::{Deserialize, Serialize};

use crate::curvature::ComplexStructure;
use crate::error::{Error, Result};
use crate::numerics::dot;

/// Symmetric `dim × dim` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Sym2Tensor {
    dim: usize,
    entries: Vec<f64>,
}

impl Sym2Tensor {
    pub fn zeros(dim: usize) -> Self {
        Sym2Tensor {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    /// Wraps row-major data whose symmetry follows from the caller's
    /// construction; the two triangles are averaged.
    pub(crate) fn from_dense(dim: usize, mut entries: Vec<f64>) -> Self {
        for i in 0..dim {
            for j in (i + 1)..dim {
                let mean = 0.5 * (entries[i * dim + j] + entries[j * dim + i]);
                entries[i * dim + j] = mean;
                entries[j * dim + i] = mean;
            }
        }
        Sym2Tensor { dim, entries }
    }

    /// `u ⊙ v`.
    pub fn sym_product(u: &[f64], v: &[f64]) -> Self {
        let dim = u.len();
        let mut t = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                t.entries[i * dim + j] = u[i] * v[j] + u[j] * v[i];
            }
        }
        t
    }

    /// `e_i ⊙ e_j` for coordinate vectors.
    pub fn coord_product(dim: usize, i: usize, j: usize) -> Self {
        let mut t = Self::zeros(dim);
        t.entries[i * dim + j] += 1.0;
        t.entries[j * dim + i] += 1.0;
        t
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

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn inner(&self, other: &Sym2Tensor) -> f64 {
        dot(&self.entries, &other.entries)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.entries.iter_mut().for_each(|v| *v *= factor);
        self
    }

    /// `self + factor · other`.
    pub fn add_scaled(mut self, other: &Sym2Tensor, factor: f64) -> Self {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += factor * b;
        }
        self
    }

    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Zero extension into `ℝ^new_dim`, placing this tensor's block at
    /// rows/columns `offset..offset + dim`.
    pub fn zero_extend(&self, offset: usize, new_dim: usize) -> Self {
        let mut t = Self::zeros(new_dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.entries[(offset + i) * new_dim + offset + j] = self.get(i, j);
            }
        }
        t
    }
}

/// Which family a basis tensor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisLabel {
    Factor1,
    Factor2,
    Mixed,
    Trace,
    Plus,
    Minus,
    Alpha,
    Eta,
    Generic,
}

/// Ordered orthonormal family of traceless symmetric two-tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct Sym2Basis {
    dim: usize,
    tensors: Vec<Sym2Tensor>,
    labels: Vec<BasisLabel>,
}

impl Sym2Basis {
    /// Basis of `S²₀(ℝ¹) = {0}`, used for one-dimensional product factors.
    pub fn empty(dim: usize) -> Self {
        Sym2Basis {
            dim,
            tensors: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Builds a labelled family, rejecting it unless it is orthonormal and
    /// traceless within `1e-12`.
    pub fn new(dim: usize, tensors: Vec<Sym2Tensor>, labels: Vec<BasisLabel>) -> Result<Self> {
        if tensors.len() != labels.len() {
            return Err(Error::invalid("one label per tensor is required"));
        }
        if let Some(t) = tensors.iter().find(|t| t.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: t.dim(),
            });
        }
        let basis = Sym2Basis {
            dim,
            tensors,
            labels,
        };
        let dev = basis.gram_deviation();
        if dev > 1e-12 {
            return Err(Error::invalid(format!(
                "family is not orthonormal (Gram deviation {dev:e})"
            )));
        }
        if let Some(t) = basis
            .tensors
            .iter()
            .find(|t| t.trace().abs() > 1e-12 || t.asymmetry() > 1e-12)
        {
            return Err(Error::invalid(format!(
                "tensor is not traceless symmetric (trace {:e})",
                t.trace()
            )));
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    /// True when the family has `(n−1)(n+2)/2` members.
    pub fn spans_traceless(&self) -> bool {
        self.len() == crate::sym2_dim(self.dim)
    }

    pub fn tensors(&self) -> &[Sym2Tensor] {
        &self.tensors
    }

    pub fn tensor(&self, a: usize) -> &Sym2Tensor {
        &self.tensors[a]
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// Indices of the members carrying `label`.
    pub fn indices_of(&self, label: BasisLabel) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == label).then_some(i))
            .collect()
    }

    pub fn gram_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, s) in self.tensors.iter().enumerate() {
            for (b, t) in self.tensors.iter().enumerate().skip(a) {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s.inner(t) - target).abs());
            }
        }
        worst
    }

    /// Members combined by the rows of an orthogonal coefficient matrix:
    /// member `a` of the result is `Σ_b rows[a][b] · φ_b`.
    pub fn rotated(&self, rows: &[Vec<f64>]) -> Result<Sym2Basis> {
        if rows.len() != self.len() || rows.iter().any(|r| r.len() != self.len()) {
            return Err(Error::invalid("rotation must be square of the basis size"));
        }
        let tensors = rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.tensors)
                    .fold(Sym2Tensor::zeros(self.dim), |acc, (&c, t)| {
                        acc.add_scaled(t, c)
                    })
            })
            .collect();
        Ok(Sym2Basis {
            dim: self.dim,
            tensors,
            labels: vec![BasisLabel::Generic; self.len()],
        })
    }
}

/// Off-diagonal tensors `(1/√2) e_i ⊙ e_j` (`i < j`, lexicographic) followed
/// by the telescoping diagonal family
/// `(1/√(k(k+1)))(Σ_{i≤k} e_i⊗e_i − k e_{k+1}⊗e_{k+1})`, `k = 1..n−1`.
pub fn standard_basis(n: usize) -> Result<Sym2Basis> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "S^2_0 needs dimension at least 2, got {n}"
        )));
    }
    let mut tensors = Vec::with_capacity(crate::sym2_dim(n));
    for i in 0..n {
        for j in (i + 1)..n {
            tensors
                .push(Sym2Tensor::coord_product(n, i, j).scaled(std::f64::consts::FRAC_1_SQRT_2));
        }
    }
    for k in 1..n {
        let mut t = Sym2Tensor::zeros(n);
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            t.entries[i * n + i] = 1.0 / norm;
        }
        t.entries[k * n + k] = -(k as f64) / norm;
        tensors.push(t);
    }
    let labels = vec![BasisLabel::Generic; tensors.len()];
    Ok(Sym2Basis {
        dim: n,
        tensors,
        labels,
    })
}

/// Orthonormal basis of `S²₀(ℝ^{n1} ⊕ ℝ^{n2})` adapted to the splitting:
/// zero-extended `b1`, zero-extended `b2`, the mixed tensors
/// `ξ_pq = (1/√2) e_p ⊙ e_q` and `ζ = (n2 g1 − n1 g2)/√(n1 n2 (n1+n2))`.
pub fn product_adapted_basis(
    n1: usize,
    n2: usize,
    b1: &Sym2Basis,
    b2: &Sym2Basis,
) -> Result<Sym2Basis> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::invalid("factor dimensions must be positive"));
    }
    for (n, b) in [(n1, b1), (n2, b2)] {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.dim(),
            });
        }
        if !b.spans_traceless() {
            return Err(Error::invalid(format!(
                "factor basis has {} members, expected {}",
                b.len(),
                crate::sym2_dim(n)
            )));
        }
    }
    let n = n1 + n2;
    let mut tensors = Vec::with_capacity(crate::sym2_dim(n));
    let mut labels = Vec::with_capacity(crate::sym2_dim(n));
    for t in b1.tensors() {
        tensors.push(t.zero_extend(0, n));
        labels.push(BasisLabel::Factor1);
    }
    for t in b2.tensors() {
        tensors.push(t.zero_extend(n1, n));
        labels.push(BasisLabel::Factor2);
    }
    for p in 0..n1 {
        for q in n1..n {
            tensors
                .push(Sym2Tensor::coord_product(n, p, q).scaled(std::f64::consts::FRAC_1_SQRT_2));
            labels.push(BasisLabel::Mixed);
        }
    }
    tensors.push(trace_difference(n1, n2));
    labels.push(BasisLabel::Trace);
    Ok(Sym2Basis {
        dim: n,
        tensors,
        labels,
    })
}

/// `ζ = (n2 g1 − n1 g2)/√(n1 n2 (n1+n2))` with `g_i` the zero-extended
/// factor metrics.
pub fn trace_difference(n1: usize, n2: usize) -> Sym2Tensor {
    let n = n1 + n2;
    let norm = ((n1 * n2 * n) as f64).sqrt();
    let mut t = Sym2Tensor::zeros(n);
    for i in 0..n {
        t.entries[i * n + i] = if i < n1 { n2 as f64 } else { -(n1 as f64) } / norm;
    }
    t
}

/// Unitary frame for `j`: vectors `e_1..e_m` such that
/// `e_1..e_m, J e_1..J e_m` is orthonormal. For the standard structure this
/// is the first `m` coordinate vectors.
fn unitary_frame(j: &ComplexStructure) -> Vec<Vec<f64>> {
    let n = j.dim();
    let m = j.complex_dim();
    let mut chosen: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut frame = Vec::with_capacity(m);
    for c in 0..n {
        if frame.len() == m {
            break;
        }
        let mut v = vec![0.0; n];
        v[c] = 1.0;
        for _ in 0..2 {
            for u in &chosen {
                let p = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let jv = j.apply(&v);
        chosen.push(v.clone());
        chosen.push(jv);
        frame.push(v);
    }
    frame
}

/// Orthonormal basis of `S²₀(ℝ^{2m})` adapted to a complex structure, in
/// the order φ⁺/φ⁻ pairs, ψ⁺/ψ⁻ pairs (both lexicographic in `i < j`), the
/// `2m` alpha-diagonal tensors and the `m − 1` tensors η_k:
///
/// * `φ^±_ij = ½(e_i ⊙ e_j ∓ Je_i ⊙ Je_j)`
/// * `ψ^±_ij = ½(e_i ⊙ Je_j ± Je_i ⊙ e_j)`
/// * `α_i = (1/(2√2))(e_i ⊙ e_i − Je_i ⊙ Je_i)`, `α_{m+i} = (1/√2) e_i ⊙ Je_i`
/// * `η_k = (1/√(8k(k+1)))(k(e_{k+1}⊙e_{k+1} + Je_{k+1}⊙Je_{k+1}) − Σ_{i≤k}(e_i⊙e_i + Je_i⊙Je_i))`
pub fn kahler_basis(m: usize, j: &ComplexStructure) -> Result<Sym2Basis> {
    if m == 0 {
        return Err(Error::invalid("complex dimension must be at least 1"));
    }
    if j.dim() != 2 * m {
        return Err(Error::invalid(format!(
            "complex structure acts on dimension {}, expected {}",
            j.dim(),
            2 * m
        )));
    }
    let n = 2 * m;
    let e = unitary_frame(j);
    let je: Vec<Vec<f64>> = e.iter().map(|v| j.apply(v)).collect();
    let sp = Sym2Tensor::sym_product;

    let mut tensors = Vec::with_capacity(crate::sym2_dim(n));
    let mut labels = Vec::with_capacity(crate::sym2_dim(n));
    for a in 0..m {
        for b in (a + 1)..m {
            let plus = sp(&e[a], &e[b])
                .add_scaled(&sp(&je[a], &je[b]), -1.0)
                .scaled(0.5);
            let minus = sp(&e[a], &e[b])
                .add_scaled(&sp(&je[a], &je[b]), 1.0)
                .scaled(0.5);
            tensors.extend([plus, minus]);
            labels.extend([BasisLabel::Plus, BasisLabel::Minus]);
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let plus = sp(&e[a], &je[b])
                .add_scaled(&sp(&je[a], &e[b]), 1.0)
                .scaled(0.5);
            let minus = sp(&e[a], &je[b])
                .add_scaled(&sp(&je[a], &e[b]), -1.0)
                .scaled(0.5);
            tensors.extend([plus, minus]);
            labels.extend([BasisLabel::Plus, BasisLabel::Minus]);
        }
    }
    let inv_2sqrt2 = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    for a in 0..m {
        tensors.push(
            sp(&e[a], &e[a])
                .add_scaled(&sp(&je[a], &je[a]), -1.0)
                .scaled(inv_2sqrt2),
        );
        labels.push(BasisLabel::Alpha);
    }
    for a in 0..m {
        tensors.push(sp(&e[a], &je[a]).scaled(std::f64::consts::FRAC_1_SQRT_2));
        labels.push(BasisLabel::Alpha);
    }
    let hermitian_diag = |a: usize| sp(&e[a], &e[a]).add_scaled(&sp(&je[a], &je[a]), 1.0);
    for k in 1..m {
        let norm = ((8 * k * (k + 1)) as f64).sqrt();
        let mut t = hermitian_diag(k).scaled(k as f64 / norm);
        for i in 0..k {
            t = t.add_scaled(&hermitian_diag(i), -1.0 / norm);
        }
        tensors.push(t);
        labels.push(BasisLabel::Eta);
    }
    Ok(Sym2Basis {
        dim: n,
        tensors,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_orthonormal(b: &Sym2Basis) {
        assert!(
            b.gram_deviation() < 1e-12,
            "gram deviation {:e}",
            b.gram_deviation()
        );
        for t in b.tensors() {
            assert!(t.trace().abs() < 1e-12);
            assert!(t.asymmetry() == 0.0);
        }
    }

    #[test]
    fn standard_counts() {
        for (n, want) in [(2, 2), (4, 9), (8, 35)] {
            let b = standard_basis(n).unwrap();
            assert_eq!(b.len(), want);
            assert_orthonormal(&b);
        }
        assert!(standard_basis(1).is_err());
    }

    #[test]
    fn product_counts_and_zeta() {
        let b = product_adapted_basis(
            2,
            2,
            &standard_basis(2).unwrap(),
            &standard_basis(2).unwrap(),
        )
        .unwrap();
        assert_orthonormal(&b);
        let sizes: Vec<usize> = [
            BasisLabel::Factor1,
            BasisLabel::Factor2,
            BasisLabel::Mixed,
            BasisLabel::Trace,
        ]
        .iter()
        .map(|&l| b.indices_of(l).len())
        .collect();
        assert_eq!(sizes, vec![2, 2, 4, 1]);
        let zeta = b.tensor(b.indices_of(BasisLabel::Trace)[0]);
        for (i, want) in [0.5, 0.5, -0.5, -0.5].iter().enumerate() {
            assert!((zeta.get(i, i) - want).abs() < 1e-15);
        }

        let b =
            product_adapted_basis(3, 1, &standard_basis(3).unwrap(), &Sym2Basis::empty(1)).unwrap();
        assert_orthonormal(&b);
        assert_eq!(b.len(), 9);
        assert_eq!(b.indices_of(BasisLabel::Factor1).len(), 5);
        assert_eq!(b.indices_of(BasisLabel::Factor2).len(), 0);
        assert_eq!(b.indices_of(BasisLabel::Mixed).len(), 3);

        assert!(product_adapted_basis(
            3,
            2,
            &standard_basis(2).unwrap(),
            &standard_basis(2).unwrap()
        )
        .is_err());
    }

    #[test]
    fn kahler_counts() {
        let j1 = ComplexStructure::standard(1).unwrap();
        let b = kahler_basis(1, &j1).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.indices_of(BasisLabel::Alpha).len(), 2);
        assert_orthonormal(&b);

        for m in 2..=4 {
            let j = ComplexStructure::standard(m).unwrap();
            let b = kahler_basis(m, &j).unwrap();
            assert_eq!(b.len(), (2 * m - 1) * (2 * m + 2) / 2);
            assert_eq!(b.indices_of(BasisLabel::Plus).len(), m * (m - 1));
            assert_eq!(b.indices_of(BasisLabel::Minus).len(), m * (m - 1));
            assert_eq!(b.indices_of(BasisLabel::Alpha).len(), 2 * m);
            assert_eq!(b.indices_of(BasisLabel::Eta).len(), m - 1);
            assert_orthonormal(&b);
        }
        assert!(kahler_basis(2, &j1).is_err());
    }

    #[test]
    fn rotation_by_identity_preserves_members() {
        let b = standard_basis(3).unwrap();
        let id: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let r = b.rotated(&id).unwrap();
        assert_eq!(r.tensors(), b.tensors());
    }

    #[test]
    fn validating_constructor() {
        let b = standard_basis(3).unwrap();
        let ok = Sym2Basis::new(3, b.tensors().to_vec(), b.labels().to_vec());
        assert!(ok.is_ok());
        let mut t = b.tensors().to_vec();
        t[1] = t[0].clone();
        assert!(Sym2Basis::new(3, t, b.labels().to_vec()).is_err());
    }
}
