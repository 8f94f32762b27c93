//! Algebraic curvature tensors.
//!
//! Components are stored as `R[i,j,k,l]` with `l` fastest. The sign
//! convention is fixed so that `R[i,j,i,j]` is the sectional curvature of
//! the coordinate plane `span(e_i, e_j)`; the round sphere of curvature `c`
//! is `c(δ_ik δ_jl − δ_il δ_jk)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;

/// Per-component tolerance of the curvature symmetries and Bianchi identity.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    components: Vec<f64>,
}

#[inline]
fn idx(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

impl CurvatureTensor {
    /// The flat tensor on `ℝ^n`, `n ≥ 1`. Dimension one is allowed so that a
    /// Euclidean line can be used as a product factor.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        Ok(CurvatureTensor {
            dim: n,
            components: vec![0.0; n.pow(4)],
        })
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut components = vec![0.0; n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        components[idx(n, i, j, k, l)] = f(i, j, k, l);
                    }
                }
            }
        }
        CurvatureTensor { dim: n, components }
    }

    /// Loads user-supplied components (`l` fastest) and re-checks every
    /// curvature symmetry and the first Bianchi identity.
    pub fn from_components(n: usize, components: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if components.len() != n.pow(4) {
            return Err(Error::invalid(format!(
                "expected {} components for dimension {n}, got {}",
                n.pow(4),
                components.len()
            )));
        }
        if let Some(bad) = components.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite component at index {bad}"
            )));
        }
        let r = CurvatureTensor { dim: n, components };
        let tol = SYMMETRY_TOL * r.max_abs().max(1.0);
        let (sym, bianchi) = r.symmetry_defects();
        if sym > tol {
            return Err(Error::invalid(format!(
                "components violate curvature symmetries (defect {sym:e})"
            )));
        }
        if bianchi > tol {
            return Err(Error::invalid(format!(
                "components violate the first Bianchi identity (defect {bianchi:e})"
            )));
        }
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.components[idx(self.dim, i, j, k, l)]
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn is_flat(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CurvatureTensor {
            dim: self.dim,
            components: self.components.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &CurvatureTensor, factor: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(CurvatureTensor {
            dim: self.dim,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + factor * b)
                .collect(),
        })
    }

    /// Sup-norm distance; `None` on dimension mismatch.
    pub fn max_diff(&self, other: &CurvatureTensor) -> Option<f64> {
        (self.dim == other.dim).then(|| {
            self.components
                .iter()
                .zip(&other.components)
                .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
        })
    }

    /// Largest defects of the pair symmetries and of the first Bianchi
    /// identity, respectively.
    pub fn symmetry_defects(&self) -> (f64, f64) {
        let n = self.dim;
        let mut sym: f64 = 0.0;
        let mut bianchi: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        sym = sym
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs());
                        let b = r + self.get(j, k, i, l) + self.get(k, i, j, l);
                        bianchi = bianchi.max(b.abs());
                    }
                }
            }
        }
        (sym, bianchi)
    }

    /// Ricci contraction `Ric[j,l] = Σ_i R[i,j,i,l]`; the round sphere of
    /// curvature `c` has `Ric = (n−1)c·Id`.
    pub fn ricci(&self) -> SymMatrix {
        let n = self.dim;
        SymMatrix::from_upper_fn(n, |j, l| (0..n).map(|i| self.get(i, j, i, l)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// Returns `ρ = scalar/dim` when `‖Ric − ρ·Id‖_∞ ≤ tol`.
    pub fn einstein_constant(&self, tol: f64) -> Option<f64> {
        let ric = self.ricci();
        let n = self.dim;
        let rho = ric.trace() / n as f64;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((ric.get(i, j) - rho * delta(i, j)).abs());
            }
        }
        (dev <= tol).then_some(rho)
    }

    /// Returns `c = scalar/(n(n−1))` when the tensor is within `tol` (sup
    /// norm) of the space form of curvature `c`.
    pub fn constant_sectional(&self, tol: f64) -> Option<f64> {
        let n = self.dim;
        if n == 1 {
            return Some(0.0);
        }
        let c = self.scalar() / (n * (n - 1)) as f64;
        let model = space_form_unchecked(n, c);
        (self.max_diff(&model)? <= tol).then_some(c)
    }

    /// Returns the holomorphic sectional curvature `c` when the tensor is
    /// within `tol` of the Kähler space form of holomorphic curvature `c`
    /// built on `j`.
    pub fn constant_holomorphic(&self, j: &ComplexStructure, tol: f64) -> Result<Option<f64>> {
        if j.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: j.dim(),
            });
        }
        let m = j.complex_dim() as f64;
        let c = 4.0 * self.scalar() / (2.0 * m * (2.0 * m + 2.0));
        let model = kahler_tensor(j, c / 4.0);
        Ok((self.max_diff(&model).unwrap_or(f64::INFINITY) <= tol).then_some(c))
    }

    /// Largest defect of `R(JX, JY, Z, W) = R(X, Y, Z, W)`.
    pub fn kahler_defect(&self, j: &ComplexStructure) -> Result<f64> {
        if j.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: j.dim(),
            });
        }
        let rotated = self.rotate_pair(j, 0);
        Ok(self.max_diff(&rotated).unwrap())
    }

    /// Applies `J` to both slots of the first (`pair = 0`) or second
    /// (`pair = 1`) index pair: `R(JX, JY, Z, W)` resp. `R(X, Y, JZ, JW)`.
    fn rotate_pair(&self, j: &ComplexStructure, pair: usize) -> CurvatureTensor {
        let mut out = self.clone();
        for slot in [2 * pair, 2 * pair + 1] {
            out = out.apply_to_slot(j, slot);
        }
        out
    }

    fn apply_to_slot(&self, j: &ComplexStructure, slot: usize) -> CurvatureTensor {
        let n = self.dim;
        let mut out = vec![0.0; n.pow(4)];
        let mut ix = [0usize; 4];
        for (pos, value) in out.iter_mut().enumerate() {
            let mut rest = pos;
            for s in (0..4).rev() {
                ix[s] = rest % n;
                rest /= n;
            }
            // (J e_a)_b = J[b][a]
            let a = ix[slot];
            let mut acc = 0.0;
            let mut src = ix;
            for b in 0..n {
                let jba = j.get(b, a);
                if jba != 0.0 {
                    src[slot] = b;
                    acc += jba * self.get(src[0], src[1], src[2], src[3]);
                }
            }
            *value = acc;
        }
        CurvatureTensor {
            dim: n,
            components: out,
        }
    }
}

fn space_form_unchecked(n: usize, c: f64) -> CurvatureTensor {
    CurvatureTensor::from_fn(n, |i, j, k, l| {
        c * (delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k))
    })
}

/// Constant sectional curvature `c` on `ℝ^n`, `n ≥ 2`.
pub fn space_form(n: usize, c: f64) -> Result<CurvatureTensor> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "space forms need dimension at least 2, got {n}"
        )));
    }
    Ok(space_form_unchecked(n, c))
}

/// Orthogonal complex structure on `ℝ^{2m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    dim: usize,
    matrix: Vec<f64>,
}

impl ComplexStructure {
    /// `J e_i = e_{m+i}`, `J e_{m+i} = −e_i` for `i < m`.
    pub fn standard(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("complex dimension must be at least 1"));
        }
        let n = 2 * m;
        let mut matrix = vec![0.0; n * n];
        for i in 0..m {
            matrix[(m + i) * n + i] = 1.0;
            matrix[i * n + (m + i)] = -1.0;
        }
        Ok(ComplexStructure { dim: n, matrix })
    }

    /// Validates `J² = −Id` and `JᵀJ = Id` within `1e-12`.
    pub fn from_matrix(dim: usize, matrix: Vec<f64>) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "complex structures need a positive even dimension, got {dim}"
            )));
        }
        if matrix.len() != dim * dim {
            return Err(Error::invalid(
                "complex structure matrix has the wrong size",
            ));
        }
        let j = ComplexStructure { dim, matrix };
        let mut worst: f64 = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                let sq: f64 = (0..dim).map(|k| j.get(a, k) * j.get(k, b)).sum();
                let gram: f64 = (0..dim).map(|k| j.get(k, a) * j.get(k, b)).sum();
                worst = worst
                    .max((sq + delta(a, b)).abs())
                    .max((gram - delta(a, b)).abs());
            }
        }
        if worst > 1e-12 {
            return Err(Error::invalid(format!(
                "matrix is not an orthogonal complex structure (defect {worst:e})"
            )));
        }
        Ok(j)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn complex_dim(&self) -> usize {
        self.dim / 2
    }

    /// Matrix entry `J[a][b]`, so that `(J v)_a = Σ_b J[a][b] v_b`.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.dim + b]
    }

    /// `J` applied to `v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|a| (0..self.dim).map(|b| self.get(a, b) * v[b]).sum())
            .collect()
    }

    /// `J_1 ⊕ J_2` on `ℝ^{2m_1} ⊕ ℝ^{2m_2}`.
    pub fn direct_sum(&self, other: &ComplexStructure) -> ComplexStructure {
        let n = self.dim + other.dim;
        let mut matrix = vec![0.0; n * n];
        for a in 0..self.dim {
            for b in 0..self.dim {
                matrix[a * n + b] = self.get(a, b);
            }
        }
        for a in 0..other.dim {
            for b in 0..other.dim {
                matrix[(self.dim + a) * n + self.dim + b] = other.get(a, b);
            }
        }
        ComplexStructure { dim: n, matrix }
    }
}

/// Kähler curvature tensor of constant holomorphic sectional curvature
/// `4κ` compatible with `j`:
/// `κ[⟨X,Z⟩⟨Y,W⟩ − ⟨X,W⟩⟨Y,Z⟩ + ⟨JX,Z⟩⟨JY,W⟩ − ⟨JX,W⟩⟨JY,Z⟩ + 2⟨JX,Y⟩⟨JZ,W⟩]`.
pub fn kahler_tensor(j: &ComplexStructure, kappa: f64) -> CurvatureTensor {
    let n = j.dim();
    // ω[a][b] = ⟨J e_a, e_b⟩ = J[b][a]
    let w = |a: usize, b: usize| j.get(b, a);
    CurvatureTensor::from_fn(n, |a, b, c, d| {
        kappa
            * (delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c) + w(a, c) * w(b, d)
                - w(a, d) * w(b, c)
                + 2.0 * w(a, b) * w(c, d))
    })
}

/// Complex space form of complex dimension `m` with holomorphic sectional
/// curvature `4κ`, on the standard complex structure.
pub fn kahler_space_form(m: usize, kappa: f64) -> Result<(CurvatureTensor, ComplexStructure)> {
    let j = ComplexStructure::standard(m)?;
    Ok((kahler_tensor(&j, kappa), j))
}

/// Riemannian product `R_1 ⊕ R_2`: pure blocks copied from the factors,
/// every mixed component zero.
pub fn product(r1: &CurvatureTensor, r2: &CurvatureTensor) -> CurvatureTensor {
    let (n1, n2) = (r1.dim, r2.dim);
    let n = n1 + n2;
    let mut out = vec![0.0; n.pow(4)];
    for i in 0..n1 {
        for j in 0..n1 {
            for k in 0..n1 {
                for l in 0..n1 {
                    out[idx(n, i, j, k, l)] = r1.get(i, j, k, l);
                }
            }
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            for k in 0..n2 {
                for l in 0..n2 {
                    out[idx(n, n1 + i, n1 + j, n1 + k, n1 + l)] = r2.get(i, j, k, l);
                }
            }
        }
    }
    CurvatureTensor {
        dim: n,
        components: out,
    }
}

/// Index of the unordered pair `i < j` among the `n(n−1)/2` pairs.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn bianchi_projection(t: &CurvatureTensor) -> CurvatureTensor {
    CurvatureTensor::from_fn(t.dim, |i, j, k, l| {
        let b = t.get(i, j, k, l) + t.get(j, k, i, l) + t.get(k, i, j, l);
        t.get(i, j, k, l) - b / 3.0
    })
}

/// Random algebraic curvature tensor: a symmetric Gaussian bilinear form on
/// `Λ²ℝ^n` (entries scaled by `scale`) with its totally antisymmetric part
/// removed.
pub fn random_curvature(n: usize, seed: u64, scale: f64) -> Result<CurvatureTensor> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "random curvature needs dimension at least 2, got {n}"
        )));
    }
    let pairs = n * (n - 1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut form = vec![0.0; pairs * pairs];
    for p in 0..pairs {
        for q in p..pairs {
            let z: f64 = StandardNormal.sample(&mut rng);
            form[p * pairs + q] = scale * z;
            form[q * pairs + p] = scale * z;
        }
    }
    let signed = |a: usize, b: usize| -> Option<(usize, f64)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some((pair_index(n, a, b), 1.0)),
            std::cmp::Ordering::Greater => Some((pair_index(n, b, a), -1.0)),
            std::cmp::Ordering::Equal => None,
        }
    };
    let t = CurvatureTensor::from_fn(n, |i, j, k, l| match (signed(i, j), signed(k, l)) {
        (Some((p, s1)), Some((q, s2))) => s1 * s2 * form[p * pairs + q],
        _ => 0.0,
    });
    Ok(bianchi_projection(&t))
}

/// Random Kähler curvature tensor for `j`: alternates the Bianchi projection
/// with averaging over `J` acting on each index pair until the two
/// constraints agree to rounding. Both maps are orthogonal projections, so
/// the iteration converges to the projection onto their intersection.
pub fn random_kahler_curvature(
    j: &ComplexStructure,
    seed: u64,
    scale: f64,
) -> Result<CurvatureTensor> {
    let n = j.dim();
    if n < 2 {
        return Err(Error::invalid("complex structure dimension too small"));
    }
    let mut r = random_curvature(n, seed, scale)?;
    let tol = 1e-15 * scale.abs().max(f64::MIN_POSITIVE);
    for _ in 0..500 {
        let first = r.rotate_pair(j, 0);
        let second = r.rotate_pair(j, 1);
        let both = first.rotate_pair(j, 1);
        let averaged = CurvatureTensor::from_fn(n, |a, b, c, d| {
            0.25 * (r.get(a, b, c, d)
                + first.get(a, b, c, d)
                + second.get(a, b, c, d)
                + both.get(a, b, c, d))
        });
        let next = bianchi_projection(&averaged);
        let change = next.max_diff(&r).unwrap();
        r = next;
        if change <= tol {
            break;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid(r: &CurvatureTensor) {
        let (sym, bianchi) = r.symmetry_defects();
        assert!(sym <= SYMMETRY_TOL, "symmetry defect {sym:e}");
        assert!(bianchi <= SYMMETRY_TOL, "bianchi defect {bianchi:e}");
    }

    #[test]
    fn space_form_components() {
        let flat = space_form(3, 0.0).unwrap();
        assert!(flat.components().iter().all(|&v| v == 0.0));
        let h = space_form(2, -1.0).unwrap();
        assert_eq!(h.get(0, 1, 0, 1), -1.0);
        assert!(space_form(1, 1.0).is_err());
        assert_valid(&space_form(5, 2.5).unwrap());
    }

    #[test]
    fn ricci_and_scalar() {
        let s3 = space_form(3, 1.0).unwrap();
        assert_eq!(s3.ricci(), SymMatrix::identity(3).scaled(2.0));
        assert_eq!(s3.scalar(), 6.0);

        let (cp2, _) = kahler_space_form(2, 1.0).unwrap();
        let ric = cp2.ricci();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 6.0 } else { 0.0 };
                assert!((ric.get(i, j) - want).abs() < 1e-12);
            }
        }

        let p = product(&space_form(2, 1.0).unwrap(), &space_form(3, 1.0).unwrap());
        assert_eq!(p.ricci(), SymMatrix::diagonal(&[1.0, 1.0, 2.0, 2.0, 2.0]));
    }

    #[test]
    fn einstein_detection() {
        assert_eq!(
            space_form(4, 1.0).unwrap().einstein_constant(1e-12),
            Some(3.0)
        );
        let s2 = space_form(2, 1.0).unwrap();
        let s3 = space_form(3, 1.0).unwrap();
        assert_eq!(product(&s2, &s3).einstein_constant(1e-9), None);
        assert_eq!(product(&s2, &s2).einstein_constant(1e-12), Some(1.0));
        for m in 1..=3 {
            let (r, _) = kahler_space_form(m, 0.7).unwrap();
            let rho = r.einstein_constant(1e-12).unwrap();
            assert!((rho - 2.0 * (m as f64 + 1.0) * 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_sectional_detection() {
        assert_eq!(
            space_form(5, -2.0).unwrap().constant_sectional(1e-12),
            Some(-2.0)
        );
        let (cp2, _) = kahler_space_form(2, 1.0).unwrap();
        assert_eq!(cp2.constant_sectional(1e-6), None);
        assert_eq!(
            CurvatureTensor::zero(4).unwrap().constant_sectional(1e-12),
            Some(0.0)
        );
    }

    #[test]
    fn constant_holomorphic_detection() {
        let (cp2, j) = kahler_space_form(2, 1.0).unwrap();
        let c = cp2.constant_holomorphic(&j, 1e-12).unwrap().unwrap();
        assert!((c - 4.0).abs() < 1e-12);
        let s4 = space_form(4, 1.0).unwrap();
        assert_eq!(s4.constant_holomorphic(&j, 1e-6).unwrap(), None);
        let zero = CurvatureTensor::zero(4).unwrap();
        assert_eq!(zero.constant_holomorphic(&j, 1e-12).unwrap(), Some(0.0));
        let j3 = ComplexStructure::standard(3).unwrap();
        assert!(matches!(
            s4.constant_holomorphic(&j3, 1e-6),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kahler_model() {
        let (cp1, _) = kahler_space_form(1, 1.0).unwrap();
        let s2 = space_form(2, 4.0).unwrap();
        assert!(cp1.max_diff(&s2).unwrap() <= 1e-12);
        let (flat, _) = kahler_space_form(1, 0.0).unwrap();
        assert!(flat.is_flat(0.0));
        assert!(kahler_space_form(0, 1.0).is_err());

        for m in 1..=3 {
            let (r, j) = kahler_space_form(m, 1.3).unwrap();
            assert_valid(&r);
            assert!(r.kahler_defect(&j).unwrap() < 1e-12);
            // holomorphic sectional curvature R(X, JX, X, JX) = 4κ
            for a in 0..2 * m {
                let mut x = vec![0.0; 2 * m];
                x[a] = 1.0;
                let jx = j.apply(&x);
                let b = jx.iter().position(|v| v.abs() == 1.0).unwrap();
                let sign = jx[b];
                assert!((sign * sign * r.get(a, b, a, b) - 4.0 * 1.3).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complex_structure_validation() {
        let j = ComplexStructure::standard(2).unwrap();
        assert!(ComplexStructure::from_matrix(4, j.matrix.clone()).is_ok());
        let mut bad = j.matrix.clone();
        bad[0] = 1.0;
        assert!(ComplexStructure::from_matrix(4, bad).is_err());
        assert!(ComplexStructure::from_matrix(3, vec![0.0; 9]).is_err());
    }

    #[test]
    fn product_blocks() {
        let r1 = random_curvature(3, 11, 1.0).unwrap();
        let r2 = random_curvature(2, 12, 1.0).unwrap();
        let p = product(&r1, &r2);
        assert_valid(&p);
        assert!((p.scalar() - r1.scalar() - r2.scalar()).abs() < 1e-12);
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    for l in 0..5 {
                        let side = |x: usize| x >= 3;
                        let v = p.get(i, j, k, l);
                        if side(i) == side(j) && side(j) == side(k) && side(k) == side(l) {
                            let want = if side(i) {
                                r2.get(i - 3, j - 3, k - 3, l - 3)
                            } else {
                                r1.get(i, j, k, l)
                            };
                            assert_eq!(v.to_bits(), want.to_bits());
                        } else {
                            assert_eq!(v, 0.0);
                        }
                    }
                }
            }
        }
        let line = CurvatureTensor::zero(1).unwrap();
        let sxr = product(&space_form(3, 1.0).unwrap(), &line);
        assert_eq!(sxr.dim(), 4);
        assert_valid(&sxr);
    }

    #[test]
    fn random_tensors() {
        for n in 2..=6 {
            assert_valid(&random_curvature(n, n as u64, 1.0).unwrap());
        }
        assert_eq!(
            random_curvature(4, 1, 1.0).unwrap(),
            random_curvature(4, 1, 1.0).unwrap()
        );
        assert!(random_curvature(4, 1, 0.0).unwrap().is_flat(0.0));
        assert!(random_curvature(1, 1, 1.0).is_err());
    }

    #[test]
    fn random_kahler_tensors() {
        for m in 1..=3 {
            let j = ComplexStructure::standard(m).unwrap();
            let r = random_kahler_curvature(&j, 5, 1.0).unwrap();
            assert_valid(&r);
            assert!(r.kahler_defect(&j).unwrap() < 1e-12);
            assert!(!r.is_flat(1e-3));
        }
    }

    #[test]
    fn custom_loader_checks() {
        let r = random_curvature(3, 2, 1.0).unwrap();
        assert!(CurvatureTensor::from_components(3, r.components().to_vec()).is_ok());
        let mut bad = r.components().to_vec();
        bad[idx(3, 0, 1, 0, 1)] += 0.5;
        assert!(CurvatureTensor::from_components(3, bad).is_err());
        assert!(CurvatureTensor::from_components(3, vec![0.0; 80]).is_err());
    }
}
