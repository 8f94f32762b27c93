//! Closed-form spectra of the model-space families, used as the comparison
//! oracle for computed spectra.

use serde::Serialize;

use secondkind::numerics::{cluster_spectrum, Cluster, CLUSTER_TOL};
use secondkind::{sym2_dim, Spectrum};

use crate::descriptor::ManifoldDescriptor as D;

/// Value tolerance of the closed-form comparison.
pub const VALUE_TOL: f64 = 1e-9;

/// Expected spectrum of a family as `(value, multiplicity)` terms. Terms may
/// repeat a value or have multiplicity zero; they are merged before
/// comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub family: &'static str,
    pub terms: Vec<(f64, usize)>,
}

impl ClosedForm {
    fn negated(mut self, family: &'static str) -> Self {
        for t in &mut self.terms {
            t.0 = -t.0;
        }
        self.family = family;
        self
    }

    /// Expected eigenvalues, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|&(v, k)| std::iter::repeat_n(v, k))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

fn sphere(n: usize, k: f64) -> Vec<(f64, usize)> {
    vec![(k, sym2_dim(n))]
}

fn cp(m: usize, k: f64) -> Vec<(f64, usize)> {
    vec![(-2.0 * k, m * m - 1), (4.0 * k, m * (m + 1))]
}

fn ch(m: usize, k: f64) -> Vec<(f64, usize)> {
    vec![(2.0 * k, m * m - 1), (-4.0 * k, m * (m + 1))]
}

fn concat(parts: &[Vec<(f64, usize)>]) -> Vec<(f64, usize)> {
    parts.concat()
}

/// Closed form for the descriptor's family, when it is one of the
/// tabulated model spaces or two-factor products (in the tabulated factor
/// order).
pub fn closed_form(desc: &D) -> Option<ClosedForm> {
    let cf = |family, terms| Some(ClosedForm { family, terms });
    match desc {
        D::Sphere { dim, kappa } => cf("sphere", sphere(*dim, *kappa)),
        D::Hyperbolic { dim, kappa } => cf("hyperbolic", sphere(*dim, -kappa)),
        D::Cp { m, kappa } => cf("complex projective", cp(*m, *kappa)),
        D::Ch { m, kappa } => cf("complex hyperbolic", ch(*m, *kappa)),
        D::Euclidean { dim } if *dim >= 2 => cf("euclidean", vec![(0.0, sym2_dim(*dim))]),
        D::ComplexEuclidean { m } => cf("euclidean", vec![(0.0, sym2_dim(2 * m))]),
        D::Product { factors } if factors.len() == 2 => two_factor(&factors[0], &factors[1]),
        _ => None,
    }
}

fn two_factor(f1: &D, f2: &D) -> Option<ClosedForm> {
    let cf = |family, terms| Some(ClosedForm { family, terms });
    match (f1, f2) {
        (D::Sphere { dim: n1, kappa: k1 }, D::Sphere { dim: n2, kappa: k2 }) => {
            let (a, b) = (*n1 as f64, *n2 as f64);
            let zeta = -(b * (a - 1.0) * k1 + a * (b - 1.0) * k2) / (a + b);
            cf(
                "sphere x sphere",
                concat(&[
                    sphere(*n1, *k1),
                    sphere(*n2, *k2),
                    vec![(0.0, n1 * n2), (zeta, 1)],
                ]),
            )
        }
        (D::Hyperbolic { dim: n1, kappa: k1 }, D::Hyperbolic { dim: n2, kappa: k2 }) => two_factor(
            &D::Sphere {
                dim: *n1,
                kappa: *k1,
            },
            &D::Sphere {
                dim: *n2,
                kappa: *k2,
            },
        )
        .map(|c| c.negated("hyperbolic x hyperbolic")),
        (D::Sphere { dim: n1, kappa: k1 }, D::Euclidean { dim: n2 }) => {
            let (a, b) = (*n1 as f64, *n2 as f64);
            cf(
                "sphere x euclidean",
                concat(&[
                    sphere(*n1, *k1),
                    vec![
                        (0.0, n1 * n2 + sym2_dim(*n2)),
                        (-b * (a - 1.0) * k1 / (a + b), 1),
                    ],
                ]),
            )
        }
        (D::Hyperbolic { dim, kappa }, D::Euclidean { dim: n2 }) => two_factor(
            &D::Sphere {
                dim: *dim,
                kappa: *kappa,
            },
            &D::Euclidean { dim: *n2 },
        )
        .map(|c| c.negated("hyperbolic x euclidean")),
        (D::Sphere { dim: n1, kappa: k1 }, D::Hyperbolic { dim: n2, kappa: k2 }) => {
            let (a, b) = (*n1 as f64, *n2 as f64);
            let zeta = -(a * b * (k1 - k2) + a * k2 - b * k1) / (a + b);
            cf(
                "sphere x hyperbolic",
                concat(&[
                    sphere(*n1, *k1),
                    sphere(*n2, -k2),
                    vec![(0.0, n1 * n2), (zeta, 1)],
                ]),
            )
        }
        (D::Cp { m: m1, kappa: k1 }, D::Cp { m: m2, kappa: k2 }) => {
            let (a, b) = (*m1 as f64, *m2 as f64);
            let zeta = -(2.0 * b * (a + 1.0) * k1 + 2.0 * a * (b + 1.0) * k2) / (a + b);
            cf(
                "complex projective x complex projective",
                concat(&[
                    cp(*m1, *k1),
                    cp(*m2, *k2),
                    vec![(0.0, 4 * m1 * m2), (zeta, 1)],
                ]),
            )
        }
        (D::Ch { m: m1, kappa: k1 }, D::Ch { m: m2, kappa: k2 }) => {
            two_factor(&D::Cp { m: *m1, kappa: *k1 }, &D::Cp { m: *m2, kappa: *k2 })
                .map(|c| c.negated("complex hyperbolic x complex hyperbolic"))
        }
        (D::Cp { m: m1, kappa: k1 }, D::ComplexEuclidean { m: m2 }) => {
            let (a, b) = (*m1 as f64, *m2 as f64);
            cf(
                "complex projective x complex euclidean",
                concat(&[
                    cp(*m1, *k1),
                    vec![
                        (0.0, 4 * m1 * m2 + (2 * m2 - 1) * (m2 + 1)),
                        (-2.0 * b * (a + 1.0) * k1 / (a + b), 1),
                    ],
                ]),
            )
        }
        (D::Ch { m, kappa }, D::ComplexEuclidean { m: m2 }) => two_factor(
            &D::Cp {
                m: *m,
                kappa: *kappa,
            },
            &D::ComplexEuclidean { m: *m2 },
        )
        .map(|c| c.negated("complex hyperbolic x complex euclidean")),
        (D::Cp { m: m1, kappa: k1 }, D::Ch { m: m2, kappa: k2 }) => {
            let (a, b) = (*m1 as f64, *m2 as f64);
            let zeta = -(2.0 * a * b * (k1 - k2) + 2.0 * b * k1 - 2.0 * a * k2) / (a + b);
            cf(
                "complex projective x complex hyperbolic",
                concat(&[
                    cp(*m1, *k1),
                    ch(*m2, *k2),
                    vec![(0.0, 4 * m1 * m2), (zeta, 1)],
                ]),
            )
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub family: &'static str,
    pub expected: Vec<Cluster>,
    pub max_deviation: f64,
    pub multiplicities_match: bool,
    pub matches: bool,
}

/// Compares a computed spectrum with a closed form: eigenvalues within
/// [`VALUE_TOL`] and identical cluster multiplicities.
pub fn compare(cf: &ClosedForm, s: &Spectrum) -> Comparison {
    let expected = cf.expanded();
    let clusters = cluster_spectrum(&expected, CLUSTER_TOL).unwrap_or_default();
    let same_len = expected.len() == s.eigenvalues.len();
    let max_deviation = if same_len {
        expected
            .iter()
            .zip(&s.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max)
    } else {
        f64::INFINITY
    };
    let multiplicities_match = clusters.len() == s.clusters.len()
        && clusters
            .iter()
            .zip(&s.clusters)
            .all(|(a, b)| a.multiplicity == b.multiplicity);
    Comparison {
        family: cf.family,
        matches: same_len && max_deviation <= VALUE_TOL && multiplicities_match,
        expected: clusters,
        max_deviation,
        multiplicities_match,
    }
}
