//! File formats: operator files (`herm-orthonormal-v1`), verdict and
//! ground-truth documents, and single projection files.
//!
//! Complex matrices are written as a flat row-major list of `[re, im]`
//! pairs next to a `"dim"` field.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::classifier::{Truth, Verdict};
use crate::coords::{CoordsError, SuperOperator, BASIS_FORMAT};
use crate::linalg::{c64, ComplexMatrix, HermitianMatrix, LinalgError, Projection};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown format '{found}', expected '{BASIS_FORMAT}'")]
    UnknownFormat { found: String },
    #[error("dim must be at least 1, got {found}")]
    BadDim { found: usize },
    #[error("expected {expected} matrix rows for dim {dim}, found {found}")]
    RowCount {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("{}matrix row {row} has {found} entries, expected {expected}", line_prefix(*line))]
    RowLength {
        row: usize,
        line: Option<usize>,
        expected: usize,
        found: usize,
    },
    #[error("{}matrix row {row}, entry {col} is not finite", line_prefix(*line))]
    NonFinite {
        row: usize,
        col: usize,
        line: Option<usize>,
    },
    #[error("expected {expected} [re, im] entries for dim {dim}, found {found}")]
    EntryCount {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("not a projection: {0}")]
    NotAProjection(LinalgError),
    #[error(transparent)]
    Coords(#[from] CoordsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message.
        let message = message
            .rsplit_once(" at line ")
            .map(|(m, _)| m.to_string())
            .unwrap_or(message);
        IoError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Deserialize)]
struct OperatorDoc {
    format: String,
    dim: usize,
    matrix: Vec<Vec<f64>>,
}

/// 1-based line on which row `row` of the `"matrix"` array starts.
fn row_line(text: &str, row: usize) -> Option<usize> {
    let start = text.find("\"matrix\"")?;
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut in_string = false;
    for (offset, ch) in text[start + 8..].char_indices() {
        match ch {
            '"' => in_string = !in_string,
            '[' if !in_string => {
                depth += 1;
                if depth == 2 {
                    if seen == row {
                        let pos = start + 8 + offset;
                        return Some(text[..pos].matches('\n').count() + 1);
                    }
                    seen += 1;
                }
            }
            ']' if !in_string => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

/// Parses an operator file. Rejects unknown formats, wrong row counts or
/// lengths and non-finite entries; syntax errors carry line and column.
pub fn parse_operator(text: &str) -> Result<SuperOperator, IoError> {
    let doc: OperatorDoc = serde_json::from_str(text)?;
    if doc.format != BASIS_FORMAT {
        return Err(IoError::UnknownFormat { found: doc.format });
    }
    if doc.dim == 0 {
        return Err(IoError::BadDim { found: 0 });
    }
    let size = doc.dim * doc.dim;
    if doc.matrix.len() != size {
        return Err(IoError::RowCount {
            dim: doc.dim,
            expected: size,
            found: doc.matrix.len(),
        });
    }
    for (row, values) in doc.matrix.iter().enumerate() {
        if values.len() != size {
            return Err(IoError::RowLength {
                row,
                line: row_line(text, row),
                expected: size,
                found: values.len(),
            });
        }
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(IoError::NonFinite {
                row,
                col,
                line: row_line(text, row),
            });
        }
    }
    Ok(SuperOperator::from_rows(doc.dim, &doc.matrix)?)
}

fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite")
}

/// Serializes an operator with one matrix row per line. The output is a
/// pure function of the entries.
pub fn format_operator(op: &SuperOperator) -> String {
    let rows: Vec<String> = op
        .rows()
        .iter()
        .map(|r| {
            format!(
                "    [{}]",
                r.iter().map(|&x| number(x)).collect::<Vec<_>>().join(", ")
            )
        })
        .collect();
    format!(
        "{{\n  \"format\": \"{BASIS_FORMAT}\",\n  \"dim\": {},\n  \"matrix\": [\n{}\n  ]\n}}\n",
        op.dim(),
        rows.join(",\n")
    )
}

pub fn read_operator_file(path: &std::path::Path) -> Result<SuperOperator, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_operator(&text)
}

/// Row-major `[re, im]` pairs.
pub fn flat_entries(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

pub fn matrix_from_flat(dim: usize, entries: &[[f64; 2]]) -> Result<ComplexMatrix, IoError> {
    if entries.len() != dim * dim {
        return Err(IoError::EntryCount {
            dim,
            expected: dim * dim,
            found: entries.len(),
        });
    }
    Ok(ComplexMatrix::new(
        dim,
        dim,
        entries.iter().map(|&[re, im]| c64(re, im)).collect(),
    )?)
}

fn hermitian_entries(h: &HermitianMatrix) -> Vec<[f64; 2]> {
    flat_entries(&h.to_matrix())
}

/// The verdict document. Keys appear in a fixed order.
#[derive(Debug, Serialize)]
pub struct VerdictDoc {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antilinear: Option<bool>,
    pub dim: usize,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<[f64; 2]>>,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<Vec<[f64; 2]>>,
    pub seed: u64,
}

impl VerdictDoc {
    pub fn new(verdict: &Verdict, dim: usize, seed: u64) -> Self {
        let mut doc = VerdictDoc {
            verdict: verdict.label(),
            antilinear: None,
            dim,
            u: None,
            p: None,
            residual: None,
            defect: None,
            witness: None,
            image: None,
            seed,
        };
        match verdict {
            Verdict::IsometryInduced {
                u,
                antilinear,
                residual,
            } => {
                doc.antilinear = Some(*antilinear);
                doc.u = Some(flat_entries(u));
                doc.residual = Some(*residual);
            }
            Verdict::TraceConstant { p, residual } => {
                doc.p = Some(hermitian_entries(p.matrix()));
                doc.residual = Some(*residual);
            }
            Verdict::NotRankOnePreserving {
                witness,
                image,
                defect,
            } => {
                doc.defect = Some(*defect);
                doc.witness = Some(hermitian_entries(witness.matrix()));
                doc.image = Some(hermitian_entries(image));
            }
        }
        doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Ground-truth document written next to a generated operator.
pub fn truth_json(truth: &Truth, dim: usize, seed: u64) -> Value {
    let mut v = truth_value(truth);
    v["dim"] = json!(dim);
    v["seed"] = json!(seed);
    v
}

fn truth_value(truth: &Truth) -> Value {
    match truth {
        Truth::Isometry { u, antilinear } => json!({
            "type": if *antilinear { "anti-isometry" } else { "isometry" },
            "antilinear": antilinear,
            "U": flat_entries(u),
        }),
        Truth::Constant { p } => json!({
            "type": "constant",
            "P": hermitian_entries(p.matrix()),
        }),
        Truth::Perturbed { base, eps } => json!({
            "type": "perturbed",
            "eps": eps,
            "base": truth_value(base),
        }),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProjectionDoc {
    pub dim: usize,
    pub matrix: Vec<[f64; 2]>,
}

/// Reads `{"dim": n, "matrix": [[re, im], ...]}` and checks that the matrix
/// is a Hermitian projection within `tol`.
pub fn parse_projection(text: &str, tol: f64) -> Result<Projection, IoError> {
    let doc: ProjectionDoc = serde_json::from_str(text)?;
    if doc.dim == 0 {
        return Err(IoError::BadDim { found: 0 });
    }
    let m = matrix_from_flat(doc.dim, &doc.matrix)?;
    let h = HermitianMatrix::from_matrix(&m, tol).map_err(IoError::NotAProjection)?;
    Projection::from_matrix(&h, tol).map_err(IoError::NotAProjection)
}

pub fn format_projection(p: &Projection) -> String {
    serde_json::to_string(&ProjectionDoc {
        dim: p.dim(),
        matrix: hermitian_entries(p.matrix()),
    })
    .expect("serializable")
}
