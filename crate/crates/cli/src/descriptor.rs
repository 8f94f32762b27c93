//! Manifold descriptors: the JSON description of a model space or a custom
//! curvature tensor.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use secondkind::curvature::{kahler_space_form, product, space_form};
use secondkind::rigidity::{a_const, b_const};
use secondkind::CurvatureTensor;

use crate::error::CliError;

/// Hyperbolic and complex hyperbolic kinds carry a positive `kappa`; the
/// tensor is built with curvature `−kappa`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldDescriptor {
    Sphere { dim: usize, kappa: f64 },
    Hyperbolic { dim: usize, kappa: f64 },
    Euclidean { dim: usize },
    Cp { m: usize, kappa: f64 },
    Ch { m: usize, kappa: f64 },
    ComplexEuclidean { m: usize },
    Product { factors: Vec<ManifoldDescriptor> },
    Custom { dim: usize, components: Vec<f64> },
}

fn parse_err(path: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn invalid(path: &str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        path: path.to_string(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value, CliError> {
    obj.get(name)
        .ok_or_else(|| parse_err(path, format!("missing field `{name}`")))
}

fn usize_field(obj: &Map<String, Value>, path: &str, name: &str) -> Result<usize, CliError> {
    let p = format!("{path}.{name}");
    let v = field(obj, path, name)?;
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(&p, format!("expected a nonnegative integer, found {v}")))
}

fn kappa_field(obj: &Map<String, Value>, path: &str) -> Result<f64, CliError> {
    let p = format!("{path}.kappa");
    let v = field(obj, path, "kappa")?;
    let k = v
        .as_f64()
        .ok_or_else(|| parse_err(&p, format!("expected a number, found {v}")))?;
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid(
            &p,
            format!("kappa must be finite and > 0, got {k}"),
        ));
    }
    Ok(k)
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), CliError> {
    for key in obj.keys() {
        if key != "kind" && !allowed.contains(&key.as_str()) {
            return Err(parse_err(&format!("{path}.{key}"), "unknown field"));
        }
    }
    Ok(())
}

fn min_dim(path: &str, name: &str, value: usize, min: usize) -> Result<(), CliError> {
    if value < min {
        return Err(invalid(
            &format!("{path}.{name}"),
            format!("{name} must be at least {min}, got {value}"),
        ));
    }
    Ok(())
}

impl ManifoldDescriptor {
    /// Parses and validates a descriptor from JSON text.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            parse_err(
                "$",
                format!(
                    "malformed JSON at line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ),
            )
        })?;
        Self::from_value(&value, "$")
    }

    /// Walks a JSON value, naming the JSON path of the first problem found.
    pub fn from_value(value: &Value, path: &str) -> Result<Self, CliError> {
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err(path, "expected an object"))?;
        let kind = field(obj, path, "kind")?
            .as_str()
            .ok_or_else(|| parse_err(&format!("{path}.kind"), "expected a string"))?;
        let desc = match kind {
            "sphere" | "hyperbolic" => {
                reject_unknown(obj, path, &["dim", "kappa"])?;
                let dim = usize_field(obj, path, "dim")?;
                let kappa = kappa_field(obj, path)?;
                min_dim(path, "dim", dim, 2)?;
                if kind == "sphere" {
                    ManifoldDescriptor::Sphere { dim, kappa }
                } else {
                    ManifoldDescriptor::Hyperbolic { dim, kappa }
                }
            }
            "euclidean" => {
                reject_unknown(obj, path, &["dim"])?;
                let dim = usize_field(obj, path, "dim")?;
                min_dim(path, "dim", dim, 1)?;
                ManifoldDescriptor::Euclidean { dim }
            }
            "cp" | "ch" => {
                reject_unknown(obj, path, &["m", "kappa"])?;
                let m = usize_field(obj, path, "m")?;
                let kappa = kappa_field(obj, path)?;
                min_dim(path, "m", m, 1)?;
                if kind == "cp" {
                    ManifoldDescriptor::Cp { m, kappa }
                } else {
                    ManifoldDescriptor::Ch { m, kappa }
                }
            }
            "complex_euclidean" => {
                reject_unknown(obj, path, &["m"])?;
                let m = usize_field(obj, path, "m")?;
                min_dim(path, "m", m, 1)?;
                ManifoldDescriptor::ComplexEuclidean { m }
            }
            "product" => {
                reject_unknown(obj, path, &["factors"])?;
                let fp = format!("{path}.factors");
                let list = field(obj, path, "factors")?
                    .as_array()
                    .ok_or_else(|| parse_err(&fp, "expected an array"))?;
                let factors = list
                    .iter()
                    .enumerate()
                    .map(|(i, v)| Self::from_value(v, &format!("{fp}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                if factors.len() < 2 {
                    return Err(invalid(&fp, format!("a product needs at least 2 factors, got {}", factors.len())));
                }
                ManifoldDescriptor::Product { factors }
            }
            "custom" => {
                reject_unknown(obj, path, &["dim", "components"])?;
                let dim = usize_field(obj, path, "dim")?;
                min_dim(path, "dim", dim, 1)?;
                let cp = format!("{path}.components");
                let list = field(obj, path, "components")?
                    .as_array()
                    .ok_or_else(|| parse_err(&cp, "expected an array"))?;
                let components = list
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.as_f64()
                            .ok_or_else(|| parse_err(&format!("{cp}[{i}]"), format!("expected a number, found {v}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if components.len() != dim.pow(4) {
                    return Err(invalid(
                        &cp,
                        format!("expected dim^4 = {} components, got {}", dim.pow(4), components.len()),
                    ));
                }
                CurvatureTensor::from_components(dim, components.clone())
                    .map_err(|e| invalid(&cp, e.to_string()))?;
                ManifoldDescriptor::Custom { dim, components }
            }
            other => {
                return Err(parse_err(
                    &format!("{path}.kind"),
                    format!(
                        "unknown kind `{other}` (expected sphere, hyperbolic, euclidean, cp, ch, complex_euclidean, product or custom)"
                    ),
                ))
            }
        };
        Ok(desc)
    }

    /// Real dimension of the described space.
    pub fn dim(&self) -> usize {
        match self {
            ManifoldDescriptor::Sphere { dim, .. }
            | ManifoldDescriptor::Hyperbolic { dim, .. }
            | ManifoldDescriptor::Euclidean { dim }
            | ManifoldDescriptor::Custom { dim, .. } => *dim,
            ManifoldDescriptor::Cp { m, .. }
            | ManifoldDescriptor::Ch { m, .. }
            | ManifoldDescriptor::ComplexEuclidean { m } => 2 * m,
            ManifoldDescriptor::Product { factors } => factors.iter().map(Self::dim).sum(),
        }
    }

    /// Complex dimension for the Kähler kinds.
    pub fn complex_dim(&self) -> Option<usize> {
        match self {
            ManifoldDescriptor::Cp { m, .. }
            | ManifoldDescriptor::Ch { m, .. }
            | ManifoldDescriptor::ComplexEuclidean { m } => Some(*m),
            _ => None,
        }
    }

    pub fn tensor(&self) -> Result<CurvatureTensor, CliError> {
        let r = match self {
            ManifoldDescriptor::Sphere { dim, kappa } => space_form(*dim, *kappa)?,
            ManifoldDescriptor::Hyperbolic { dim, kappa } => space_form(*dim, -kappa)?,
            ManifoldDescriptor::Euclidean { dim } => CurvatureTensor::zero(*dim)?,
            ManifoldDescriptor::Cp { m, kappa } => kahler_space_form(*m, *kappa)?.0,
            ManifoldDescriptor::Ch { m, kappa } => kahler_space_form(*m, -kappa)?.0,
            ManifoldDescriptor::ComplexEuclidean { m } => CurvatureTensor::zero(2 * m)?,
            ManifoldDescriptor::Product { factors } => {
                let mut acc = factors[0].tensor()?;
                for f in &factors[1..] {
                    acc = product(&acc, &f.tensor()?);
                }
                acc
            }
            ManifoldDescriptor::Custom { dim, components } => {
                CurvatureTensor::from_components(*dim, components.clone())?
            }
        };
        Ok(r)
    }

    /// `A_{n1,n2}` for a two-factor product.
    pub fn a_constant(&self) -> Option<f64> {
        match self {
            ManifoldDescriptor::Product { factors } if factors.len() == 2 => {
                Some(a_const(factors[0].dim(), factors[1].dim()))
            }
            _ => None,
        }
    }

    /// `B_{m1,m2}` for a product of two Kähler kinds.
    pub fn b_constant(&self) -> Option<f64> {
        match self {
            ManifoldDescriptor::Product { factors } if factors.len() == 2 => Some(b_const(
                factors[0].complex_dim()?,
                factors[1].complex_dim()?,
            )),
            _ => None,
        }
    }

    /// `A_{n−1,1}` for the total dimension `n`.
    pub fn line_constant(&self) -> Option<f64> {
        let n = self.dim();
        (n >= 3).then(|| a_const(n - 1, 1))
    }
}
