//! JSON request and result documents for single conversions.
//!
//! Field elements travel as canonical decimal strings in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomp::{moment_series, Decomposer};
use crate::expand::Expander;
use crate::field::{Fp, PrimeField, DEFAULT_MODULUS};
use crate::poly::DensePoly;
use crate::recurrence::{Preset, RecurrenceFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Expand,
    Decomp,
    Texpand,
    Moments,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Expand => "expand",
            Direction::Decomp => "decomp",
            Direction::Texpand => "texpand",
            Direction::Moments => "moments",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "expand" => Ok(Direction::Expand),
            "decomp" => Ok(Direction::Decomp),
            "texpand" => Ok(Direction::Texpand),
            "moments" => Ok(Direction::Moments),
            _ => Err(format!(
                "unknown direction {s:?}; expected expand, decomp, texpand or moments"
            )),
        }
    }
}

/// A preset name or explicit coefficient arrays, `a[i - 1]` holding `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Preset(String),
    Custom {
        a: Vec<String>,
        b: Vec<String>,
        c: Vec<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConversionRequest {
    pub direction: Option<Direction>,
    pub family: Option<FamilySpec>,
    pub modulus: Option<String>,
    pub coeffs: Vec<String>,
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionResult {
    pub direction: Direction,
    pub family: FamilySpec,
    pub modulus: String,
    pub n: usize,
    pub coeffs: Vec<String>,
}

/// A validation or computation failure, attributed to one request field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub field: String,
    pub message: String,
}

impl CliError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError {
            field: field.into(),
            message: message.into(),
        }
    }

    /// `{"error": {"field": ..., "message": ...}}`
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for CliError {}

/// Parses a modulus and requires it to support the transforms.
pub fn parse_modulus(text: Option<&str>) -> Result<PrimeField, CliError> {
    let Some(text) = text else {
        return PrimeField::ntt_friendly(DEFAULT_MODULUS)
            .map_err(|e| CliError::new("modulus", e.to_string()));
    };
    let p: u64 = text
        .parse()
        .map_err(|_| CliError::new("modulus", format!("{text:?} is not a decimal integer")))?;
    PrimeField::ntt_friendly(p).map_err(|e| CliError::new("modulus", e.to_string()))
}

pub fn parse_family(field: &PrimeField, spec: &FamilySpec) -> Result<RecurrenceFamily, CliError> {
    match spec {
        FamilySpec::Preset(name) => name
            .parse::<Preset>()
            .map(RecurrenceFamily::preset)
            .map_err(|e| CliError::new("family", e.to_string())),
        FamilySpec::Custom { a, b, c } => {
            let parse = |name: &str, v: &[String]| -> Result<Vec<Fp>, CliError> {
                v.iter()
                    .enumerate()
                    .map(|(i, s)| {
                        field.parse_canonical(s).map_err(|e| {
                            CliError::new(format!("family.{name}[{i}]"), e.to_string())
                        })
                    })
                    .collect()
            };
            RecurrenceFamily::custom(parse("a", a)?, parse("b", b)?, parse("c", c)?)
                .map_err(|e| CliError::new("family", e.to_string()))
        }
    }
}

fn parse_coeffs(field: &PrimeField, coeffs: &[String], n: usize) -> Result<Vec<Fp>, CliError> {
    let mut out = coeffs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            field
                .parse_canonical(s)
                .map_err(|e| CliError::new(format!("coeffs[{i}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.resize(n, Fp::ZERO);
    Ok(out)
}

pub fn run_convert(request: &ConversionRequest) -> Result<ConversionResult, CliError> {
    let direction = request
        .direction
        .ok_or_else(|| CliError::new("direction", "missing"))?;
    let spec = request
        .family
        .clone()
        .ok_or_else(|| CliError::new("family", "missing"))?;
    let field = parse_modulus(request.modulus.as_deref())?;
    let family = parse_family(&field, &spec)?;

    let n = request.n.unwrap_or(request.coeffs.len());
    if request.coeffs.len() > n {
        return Err(CliError::new(
            "coeffs",
            format!("{} coefficients given but n = {n}", request.coeffs.len()),
        ));
    }
    if n == 0 && direction == Direction::Moments {
        return Err(CliError::new("n", "moments need n >= 1"));
    }
    let coeffs = parse_coeffs(&field, &request.coeffs, n)?;

    // Library errors at this point come from the family (a zero coefficient or
    // missing triples) or from the size exceeding the transform capacity.
    let blame = |e: crate::Error| {
        let field_name = match e {
            crate::Error::NttCapacity { .. } => "n",
            _ => "family",
        };
        CliError::new(field_name, e.to_string())
    };
    let out: Vec<Fp> = match direction {
        Direction::Expand => Expander::new(&field, &family, n)
            .and_then(|e| e.expand(&coeffs))
            .map_err(blame)?
            .into_coeffs(),
        Direction::Texpand => Expander::new(&field, &family, n)
            .and_then(|e| e.expand_transposed(&coeffs))
            .map_err(blame)?,
        Direction::Decomp => Decomposer::new(&field, &family, n)
            .and_then(|d| d.decomp(&DensePoly::new(coeffs)))
            .map_err(blame)?,
        Direction::Moments => moment_series(&field, &family, n)
            .map_err(blame)?
            .moments()
            .to_vec(),
    };

    Ok(ConversionResult {
        direction,
        family: spec,
        modulus: field.modulus().to_string(),
        n,
        coeffs: out.iter().map(|c| c.value().to_string()).collect(),
    })
}

/// Accepts a full request document or a bare array of coefficients.
pub fn parse_request(text: &str) -> Result<ConversionRequest, CliError> {
    if text.trim().is_empty() {
        return Ok(ConversionRequest::default());
    }
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::new("input", format!("malformed JSON: {e}")))?;
    if value.is_array() {
        let coeffs = serde_json::from_value(value).map_err(|e| {
            CliError::new(
                "coeffs",
                format!("expected an array of decimal strings: {e}"),
            )
        })?;
        return Ok(ConversionRequest {
            coeffs,
            ..Default::default()
        });
    }
    // Result documents are accepted as input, so a conversion can be piped
    // into the reverse one.
    let serde_json::Value::Object(obj) = value else {
        return Err(CliError::new("input", "expected a JSON object or array"));
    };
    fn field<T: serde::de::DeserializeOwned>(
        name: &str,
        v: serde_json::Value,
    ) -> Result<T, CliError> {
        serde_json::from_value(v).map_err(|e| CliError::new(name, e.to_string()))
    }
    let mut req = ConversionRequest::default();
    for (key, v) in obj {
        match key.as_str() {
            "direction" => req.direction = field(&key, v)?,
            "family" => req.family = field(&key, v)?,
            "modulus" => req.modulus = field(&key, v)?,
            "coeffs" => req.coeffs = field(&key, v)?,
            "n" => req.n = field(&key, v)?,
            _ => return Err(CliError::new(key, "unknown field")),
        }
    }
    Ok(req)
}
