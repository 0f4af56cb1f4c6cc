//! Point ingestion and the lossless JSON schema for bases.
//!
//! Polynomials serialize as arrays of `{exponents, coefficient}` in
//! lex-descending order, coefficients as exact strings (`"-7/2"`).

use serde::{Deserialize, Serialize};

use crate::aoe::{FactoredBasisElement, FactoredGroebnerBasis, LinearFactor};
use crate::cemu::{CemuError, Point, PointSet};
use crate::monomial::Term;
use crate::poly::Polynomial;
use crate::scalar::{Field, ScalarError};
use crate::verify::GbCertificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    Csv,
    Json,
}

impl PointFormat {
    /// JSON when the first non-blank character opens an array.
    pub fn sniff(text: &str) -> PointFormat {
        if text.trim_start().starts_with('[') {
            PointFormat::Json
        } else {
            PointFormat::Csv
        }
    }
}

/// Input errors; `line` is 1-based (a CSV line, or a JSON row).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("no points in input")]
    Empty,
    #[error("line {line}: expected {expected} coordinates, found {got}")]
    Ragged { line: usize, expected: usize, got: usize },
    #[error("line {line}, column {column}: {source}")]
    Scalar { line: usize, column: usize, source: ScalarError },
    #[error("duplicate point: lines {first} and {second}")]
    Duplicate { first: usize, second: usize },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("points have no coordinates")]
    NoCoordinates,
}

/// A coordinate in JSON input: a string, or an integer for convenience.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Text(String),
    Int(i64),
}

fn build(field: Field, rows: Vec<(usize, Vec<String>)>) -> Result<PointSet, InputError> {
    let Some((_, first)) = rows.first() else { return Err(InputError::Empty) };
    let expected = first.len();
    if expected == 0 {
        return Err(InputError::NoCoordinates);
    }
    let mut lines = Vec::with_capacity(rows.len());
    let mut points: Vec<Point> = Vec::with_capacity(rows.len());
    for (line, cells) in rows {
        if cells.len() != expected {
            return Err(InputError::Ragged { line, expected, got: cells.len() });
        }
        let point = cells
            .iter()
            .enumerate()
            .map(|(i, c)| field.parse(c).map_err(|source| InputError::Scalar { line, column: i + 1, source }))
            .collect::<Result<Point, _>>()?;
        lines.push(line);
        points.push(point);
    }
    PointSet::new(field, points).map_err(|e| match e {
        CemuError::Duplicate { first, second } => InputError::Duplicate { first: lines[first], second: lines[second] },
        CemuError::Empty => InputError::Empty,
        other => unreachable!("rows were validated: {other}"),
    })
}

/// Parses CSV (one point per line, `#` comments and blank lines ignored) or
/// a JSON array of arrays. Input order is preserved.
pub fn parse_points(text: &str, format: PointFormat, field: Field) -> Result<PointSet, InputError> {
    let rows = match format {
        PointFormat::Csv => text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(line, l)| (line, l.split(',').map(|c| c.trim().to_owned()).collect()))
            .collect(),
        PointFormat::Json => {
            let raw: Vec<Vec<RawScalar>> = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
            raw.into_iter()
                .enumerate()
                .map(|(i, row)| {
                    let cells = row
                        .into_iter()
                        .map(|c| match c {
                            RawScalar::Text(s) => s,
                            RawScalar::Int(v) => v.to_string(),
                        })
                        .collect();
                    (i + 1, cells)
                })
                .collect()
        }
    };
    build(field, rows)
}

/// CSV rendering; [`parse_points`] reads it back to the same set.
pub fn render_points_csv(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points.points() {
        let cells: Vec<String> = p.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_points_json(points: &PointSet) -> String {
    let rows: Vec<Vec<String>> = points.points().iter().map(|p| p.iter().map(ToString::to_string).collect()).collect();
    serde_json::to_string(&rows).expect("strings serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

pub type PolynomialJson = Vec<TermJson>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub m: usize,
    pub delta: usize,
    pub body: PolynomialJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredElementJson {
    pub tau: Vec<u32>,
    pub factors: Vec<FactorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// 1-based.
    pub element: usize,
    /// 1-based.
    pub point: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub valid: bool,
    pub vanishes: bool,
    pub failures: Vec<WitnessJson>,
    pub dimension_mismatches: Vec<usize>,
    pub leading_terms_match: bool,
    pub leading_terms: Vec<Vec<u32>>,
    pub expected_leading_terms: Vec<Vec<u32>>,
    pub escalier_size: usize,
    pub point_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spolys_pass: Option<bool>,
}

/// Output of the `aoe` command. The optional sections are present when
/// requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub field: String,
    pub nvars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factored: Option<Vec<FactoredElementJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expanded: Option<Vec<PolynomialJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<Vec<PolynomialJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("term {exponents:?} has {got} exponents, expected {expected}")]
    Arity { exponents: Vec<u32>, expected: usize, got: usize },
    #[error("factor for x{m} out of range for {nvars} variables")]
    Variable { m: usize, nvars: usize },
    #[error("document carries no polynomials")]
    NoPolynomials,
}

pub fn polynomial_to_json(f: &Polynomial) -> PolynomialJson {
    f.iter()
        .rev()
        .map(|(t, c)| TermJson { exponents: t.exponents().to_vec(), coefficient: c.to_string() })
        .collect()
}

pub fn polynomial_from_json(json: &[TermJson], field: Field, nvars: usize) -> Result<Polynomial, SchemaError> {
    let terms = json
        .iter()
        .map(|t| {
            if t.exponents.len() != nvars {
                return Err(SchemaError::Arity { exponents: t.exponents.clone(), expected: nvars, got: t.exponents.len() });
            }
            Ok((Term::new(t.exponents.iter().copied()), field.parse(&t.coefficient)?))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polynomial::from_terms(field, nvars, terms))
}

pub fn factored_to_json(e: &FactoredBasisElement) -> FactoredElementJson {
    FactoredElementJson {
        tau: e.tau.exponents().to_vec(),
        factors: e
            .factors
            .iter()
            .map(|f| FactorJson { m: f.m, delta: f.delta, body: polynomial_to_json(&f.body) })
            .collect(),
    }
}

/// Rebuilds a factored basis from its JSON form. Supports, interpolation
/// sets and traces are not serialized and come back empty.
pub fn factored_from_json(
    elements: &[FactoredElementJson],
    field: Field,
    nvars: usize,
) -> Result<FactoredGroebnerBasis, SchemaError> {
    let elements = elements
        .iter()
        .map(|e| {
            if e.tau.len() != nvars {
                return Err(SchemaError::Arity { exponents: e.tau.clone(), expected: nvars, got: e.tau.len() });
            }
            let factors = e
                .factors
                .iter()
                .map(|f| {
                    if f.m == 0 || f.m > nvars {
                        return Err(SchemaError::Variable { m: f.m, nvars });
                    }
                    Ok(LinearFactor {
                        m: f.m,
                        delta: f.delta,
                        body: polynomial_from_json(&f.body, field, nvars)?,
                        support: Vec::new(),
                        interpolation_set: Vec::new(),
                    })
                })
                .collect::<Result<_, _>>()?;
            Ok(FactoredBasisElement { tau: Term::new(e.tau.iter().copied()), factors, trace: Vec::new() })
        })
        .collect::<Result<_, _>>()?;
    Ok(FactoredGroebnerBasis { field, nvars, elements })
}

pub fn certificate_to_json(c: &GbCertificate) -> CertificateJson {
    let exps = |ts: &[Term]| ts.iter().map(|t| t.exponents().to_vec()).collect();
    CertificateJson {
        valid: c.is_valid(),
        vanishes: c.vanishing.passed(),
        failures: c
            .vanishing
            .failures
            .iter()
            .map(|w| WitnessJson { element: w.element + 1, point: w.point + 1, value: w.value.to_string() })
            .collect(),
        dimension_mismatches: c.vanishing.dimension_mismatches.iter().map(|e| e + 1).collect(),
        leading_terms_match: c.leading_terms_match(),
        leading_terms: exps(&c.leading_terms),
        expected_leading_terms: exps(&c.expected_leading_terms),
        escalier_size: c.escalier_size,
        point_count: c.point_count,
        spolys_pass: c.spolys.as_ref().map(|s| s.passed()),
    }
}

impl BasisDocument {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))
    }

    pub fn field(&self) -> Result<Field, SchemaError> {
        Ok(self.field.parse()?)
    }

    /// The polynomials to certify: the factored form expanded if present,
    /// otherwise the expanded list, otherwise the reduced one.
    pub fn polynomials(&self) -> Result<Vec<Polynomial>, SchemaError> {
        let field = self.field()?;
        if let Some(f) = &self.factored {
            return Ok(factored_from_json(f, field, self.nvars)?.expanded());
        }
        self.expanded
            .as_ref()
            .or(self.reduced.as_ref())
            .ok_or(SchemaError::NoPolynomials)?
            .iter()
            .map(|p| polynomial_from_json(p, field, self.nvars))
            .collect()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}
