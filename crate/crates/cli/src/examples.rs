//! The model-space example table: every tabulated family evaluated over a
//! small grid of curvatures and dimensions and compared with its closed form,
//! plus the equal-curvature rigidity block for sphere and hyperbolic products.

use serde::Serialize;

use secondkind::numerics::Cluster;
use secondkind::operator::{classify_spectrum, spectrum, Verdict};
use secondkind::rigidity::a_const;

use crate::closed_form::{closed_form, compare};
use crate::descriptor::ManifoldDescriptor as D;
use crate::error::CliError;

pub const KAPPAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const REAL_DIMS: [usize; 3] = [2, 3, 4];
pub const COMPLEX_DIMS: [usize; 3] = [1, 2, 3];
pub const FLAT_DIMS: [usize; 2] = [1, 2];

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub descriptor: D,
    pub expected: Vec<Cluster>,
    pub computed: Vec<Cluster>,
    pub max_deviation: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityCase {
    pub descriptor: D,
    pub alpha: f64,
    pub verdict: Verdict,
    pub equal_curvature: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cases {
    Spectra(Vec<Case>),
    Rigidity(Vec<RigidityCase>),
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyBlock {
    pub index: usize,
    pub family: &'static str,
    pub cases_run: usize,
    pub mismatches: usize,
    pub cases: Cases,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExamplesReport {
    pub families: Vec<FamilyBlock>,
    pub total_cases: usize,
    pub total_mismatches: usize,
    pub passed: bool,
}

fn pairs<T: Copy, U: Copy>(a: &[T], b: &[U]) -> Vec<(T, U)> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .collect()
}

fn prod(a: D, b: D) -> D {
    D::Product {
        factors: vec![a, b],
    }
}

/// Descriptors of the twelve spectrum families, in table order.
pub fn family_grids() -> Vec<(&'static str, Vec<D>)> {
    let dims2 = pairs(&REAL_DIMS, &REAL_DIMS);
    let cdims2 = pairs(&COMPLEX_DIMS, &COMPLEX_DIMS);
    let k2 = pairs(&KAPPAS, &KAPPAS);
    let real_pairs = |f: &dyn Fn(usize, f64, usize, f64) -> D| -> Vec<D> {
        pairs(&dims2, &k2)
            .into_iter()
            .map(|((n1, n2), (k1, k2))| f(n1, k1, n2, k2))
            .collect()
    };
    let complex_pairs = |f: &dyn Fn(usize, f64, usize, f64) -> D| -> Vec<D> {
        pairs(&cdims2, &k2)
            .into_iter()
            .map(|((m1, m2), (k1, k2))| f(m1, k1, m2, k2))
            .collect()
    };
    let mut out = Vec::new();
    out.push((
        "sphere and hyperbolic space",
        pairs(&REAL_DIMS, &KAPPAS)
            .into_iter()
            .flat_map(|(dim, kappa)| [D::Sphere { dim, kappa }, D::Hyperbolic { dim, kappa }])
            .collect(),
    ));
    out.push((
        "complex projective and complex hyperbolic space",
        pairs(&COMPLEX_DIMS, &KAPPAS)
            .into_iter()
            .flat_map(|(m, kappa)| [D::Cp { m, kappa }, D::Ch { m, kappa }])
            .collect(),
    ));
    out.push((
        "sphere x sphere",
        real_pairs(&|n1, k1, n2, k2| {
            prod(
                D::Sphere { dim: n1, kappa: k1 },
                D::Sphere { dim: n2, kappa: k2 },
            )
        }),
    ));
    out.push((
        "hyperbolic x hyperbolic",
        real_pairs(&|n1, k1, n2, k2| {
            prod(
                D::Hyperbolic { dim: n1, kappa: k1 },
                D::Hyperbolic { dim: n2, kappa: k2 },
            )
        }),
    ));
    let flat = pairs(&pairs(&REAL_DIMS, &FLAT_DIMS), &KAPPAS);
    out.push((
        "sphere x euclidean",
        flat.iter()
            .map(|&((n1, n2), k)| prod(D::Sphere { dim: n1, kappa: k }, D::Euclidean { dim: n2 }))
            .collect(),
    ));
    out.push((
        "hyperbolic x euclidean",
        flat.iter()
            .map(|&((n1, n2), k)| {
                prod(
                    D::Hyperbolic { dim: n1, kappa: k },
                    D::Euclidean { dim: n2 },
                )
            })
            .collect(),
    ));
    out.push((
        "sphere x hyperbolic",
        real_pairs(&|n1, k1, n2, k2| {
            prod(
                D::Sphere { dim: n1, kappa: k1 },
                D::Hyperbolic { dim: n2, kappa: k2 },
            )
        }),
    ));
    out.push((
        "complex projective x complex projective",
        complex_pairs(&|m1, k1, m2, k2| {
            prod(D::Cp { m: m1, kappa: k1 }, D::Cp { m: m2, kappa: k2 })
        }),
    ));
    out.push((
        "complex hyperbolic x complex hyperbolic",
        complex_pairs(&|m1, k1, m2, k2| {
            prod(D::Ch { m: m1, kappa: k1 }, D::Ch { m: m2, kappa: k2 })
        }),
    ));
    let cflat = pairs(&pairs(&COMPLEX_DIMS, &FLAT_DIMS), &KAPPAS);
    out.push((
        "complex projective x complex euclidean",
        cflat
            .iter()
            .map(|&((m1, m2), k)| prod(D::Cp { m: m1, kappa: k }, D::ComplexEuclidean { m: m2 }))
            .collect(),
    ));
    out.push((
        "complex hyperbolic x complex euclidean",
        cflat
            .iter()
            .map(|&((m1, m2), k)| prod(D::Ch { m: m1, kappa: k }, D::ComplexEuclidean { m: m2 }))
            .collect(),
    ));
    out.push((
        "complex projective x complex hyperbolic",
        complex_pairs(&|m1, k1, m2, k2| {
            prod(D::Cp { m: m1, kappa: k1 }, D::Ch { m: m2, kappa: k2 })
        }),
    ));
    out
}

fn spectrum_case(desc: D) -> Result<Case, CliError> {
    let cf = closed_form(&desc).expect("every grid descriptor has a closed form");
    let s = spectrum(&desc.tensor()?)?;
    let c = compare(&cf, &s);
    Ok(Case {
        descriptor: desc,
        expected: c.expected,
        computed: s.clusters,
        max_deviation: c.max_deviation,
        ok: c.matches,
    })
}

/// Sphere and hyperbolic products at `A_{n1,n2}`: nonnegative (resp.
/// nonpositive) exactly for equal curvatures.
fn rigidity_block() -> Result<Vec<RigidityCase>, CliError> {
    let mut out = Vec::new();
    for ((n1, n2), (k1, k2)) in pairs(&pairs(&REAL_DIMS, &REAL_DIMS), &pairs(&KAPPAS, &KAPPAS)) {
        let alpha = a_const(n1, n2);
        for positive in [true, false] {
            let descriptor = if positive {
                prod(
                    D::Sphere { dim: n1, kappa: k1 },
                    D::Sphere { dim: n2, kappa: k2 },
                )
            } else {
                prod(
                    D::Hyperbolic { dim: n1, kappa: k1 },
                    D::Hyperbolic { dim: n2, kappa: k2 },
                )
            };
            let verdict = classify_spectrum(&spectrum(&descriptor.tensor()?)?, alpha)?;
            let holds = if positive {
                verdict.is_nonnegative()
            } else {
                verdict.is_nonpositive()
            };
            out.push(RigidityCase {
                descriptor,
                alpha,
                verdict,
                equal_curvature: k1 == k2,
                ok: holds == (k1 == k2),
            });
        }
    }
    Ok(out)
}

pub fn run_examples() -> Result<ExamplesReport, CliError> {
    let mut families = Vec::new();
    for (i, (family, grid)) in family_grids().into_iter().enumerate() {
        let cases = grid
            .into_iter()
            .map(spectrum_case)
            .collect::<Result<Vec<_>, _>>()?;
        families.push(FamilyBlock {
            index: i + 1,
            family,
            cases_run: cases.len(),
            mismatches: cases.iter().filter(|c| !c.ok).count(),
            cases: Cases::Spectra(cases),
        });
    }
    let rigidity = rigidity_block()?;
    families.push(FamilyBlock {
        index: families.len() + 1,
        family: "equal-curvature rigidity of sphere and hyperbolic products at A",
        cases_run: rigidity.len(),
        mismatches: rigidity.iter().filter(|c| !c.ok).count(),
        cases: Cases::Rigidity(rigidity),
    });
    let total_cases = families.iter().map(|f| f.cases_run).sum();
    let total_mismatches = families.iter().map(|f| f.mismatches).sum();
    Ok(ExamplesReport {
        families,
        total_cases,
        total_mismatches,
        passed: total_mismatches == 0,
    })
}
