//! Algebraic curvature tensors and the curvature operator of the second kind.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: small dense symmetric eigensolver, seeded orthonormal
//!   families and spectrum clustering.
//! * [`curvature`]: curvature tensors for space forms, Kähler space forms,
//!   Riemannian products and random Bianchi-correct tensors.
//! * [`sym2`]: orthonormal bases of traceless symmetric two-tensors.
//! * [`operator`]: the operator matrix, its spectrum, fractional α-sums,
//!   classification and thresholds.
//! * [`rigidity`]: the rigidity constants and falsification harnesses.

pub mod curvature;
pub mod error;
pub mod numerics;
pub mod operator;
pub mod rigidity;
pub mod sym2;

pub use curvature::{ComplexStructure, CurvatureTensor};
pub use error::{Error, Result};
pub use numerics::{OrthonormalFamily, SymMatrix};
pub use operator::{Spectrum, Verdict};
pub use sym2::{BasisLabel, Sym2Basis, Sym2Tensor};

/// Dimension of the traceless symmetric two-tensors on an `n`-dimensional space.
pub const fn sym2_dim(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (n - 1) * (n + 2) / 2
    }
}
