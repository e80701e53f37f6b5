//! File formats and machine-readable reports.
//!
//! Documents use 1-based indices; conversion to the crate's 0-based
//! internal indexing happens exactly once, here. Tensor documents are JSON
//! with sparse entry lists (omitted entries are zero); graphs use a plain
//! text edge list:
//!
//! ```text
//! # comment
//! m n
//! i1 i2 j1 j2 [weight]
//! ```
//!
//! Serialization normalizes entry order lexicographically by index
//! quadruple, so parse -> serialize -> parse is the identity and equal
//! inputs produce byte-identical output.

use crate::error::Error;
use crate::graph::{BipartiteTwoGraph, Edge, SeparabilityReport};
use crate::spectra::{ProbeOutcome, SolverOutcome};
use crate::structure::StructureReport;
use crate::tensor::{BiquadraticTensor, MEigenPair};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

/// Errors from document ingestion, split by the caller's recovery path:
/// `Parse` is malformed input (with position), the `Invalid*` variants are
/// well-formed input that violates document invariants.
#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document: {message}")]
    Invalid { message: String },
    #[error("invalid document at line {line}: {message}")]
    InvalidAt { line: usize, message: String },
}

impl DocumentError {
    pub fn is_parse_error(&self) -> bool {
        matches!(self, DocumentError::Parse { .. })
    }
}

/// One stored entry of a tensor document; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub i1: usize,
    pub j1: usize,
    pub i2: usize,
    pub j2: usize,
    pub value: f64,
}

/// Sparse JSON representation of a biquadratic tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorDocument {
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub entries: Vec<TensorEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl TensorDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: TensorDocument =
            serde_json::from_str(text).map_err(|e| DocumentError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), DocumentError> {
        if self.m < 1 || self.n < 1 {
            return Err(DocumentError::Invalid {
                message: format!("mode sizes must be positive, got {}x{}", self.m, self.n),
            });
        }
        let mut seen = HashSet::new();
        for e in &self.entries {
            for (name, idx, bound) in [
                ("i1", e.i1, self.m),
                ("i2", e.i2, self.m),
                ("j1", e.j1, self.n),
                ("j2", e.j2, self.n),
            ] {
                if idx < 1 || idx > bound {
                    return Err(DocumentError::Invalid {
                        message: format!(
                            "index {name}={idx} out of range 1..={bound} in entry ({},{},{},{})",
                            e.i1, e.j1, e.i2, e.j2
                        ),
                    });
                }
            }
            if !seen.insert((e.i1, e.j1, e.i2, e.j2)) {
                return Err(DocumentError::Invalid {
                    message: format!(
                        "duplicate index quadruple ({},{},{},{})",
                        e.i1, e.j1, e.i2, e.j2
                    ),
                });
            }
        }
        Ok(())
    }

    /// Serializes with entries sorted lexicographically by index quadruple.
    pub fn to_json(&self) -> String {
        let mut doc = self.clone();
        doc.entries
            .sort_by_key(|e| (e.i1, e.j1, e.i2, e.j2));
        let mut out = serde_json::to_string_pretty(&doc).expect("reports are serializable");
        out.push('\n');
        out
    }

    pub fn to_tensor(&self) -> crate::Result<BiquadraticTensor> {
        let mut t = BiquadraticTensor::zeros(self.m, self.n)?;
        for e in &self.entries {
            if !e.value.is_finite() {
                return Err(Error::NonFiniteEntry {
                    i1: e.i1,
                    j1: e.j1,
                    i2: e.i2,
                    j2: e.j2,
                    value: e.value,
                });
            }
            t.set(e.i1 - 1, e.j1 - 1, e.i2 - 1, e.j2 - 1, e.value);
        }
        Ok(t)
    }

    /// Captures the nonzero entries of a tensor, 1-based and sorted.
    pub fn from_tensor(t: &BiquadraticTensor, metadata: BTreeMap<String, String>) -> Self {
        let mut entries = Vec::new();
        for i1 in 0..t.m() {
            for j1 in 0..t.n() {
                for i2 in 0..t.m() {
                    for j2 in 0..t.n() {
                        let value = t.get(i1, j1, i2, j2);
                        if value != 0.0 {
                            entries.push(TensorEntry {
                                i1: i1 + 1,
                                j1: j1 + 1,
                                i2: i2 + 1,
                                j2: j2 + 1,
                                value,
                            });
                        }
                    }
                }
            }
        }
        TensorDocument {
            m: t.m(),
            n: t.n(),
            entries,
            metadata,
        }
    }
}

fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..pos]));
            }
        } else if start.is_none() {
            start = Some(pos);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parses the plain-text edge list format. 1-based vertex indices; weight
/// defaults to 1.
pub fn parse_edge_list(text: &str) -> Result<BipartiteTwoGraph, DocumentError> {
    let mut graph: Option<BipartiteTwoGraph> = None;
    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens = tokens_with_columns(line);
        if tokens.is_empty() {
            continue;
        }
        let parse_usize = |col: usize, tok: &str, what: &str| -> Result<usize, DocumentError> {
            tok.parse::<usize>().map_err(|_| DocumentError::Parse {
                line: line_no,
                column: col,
                message: format!("expected {what}, found {tok:?}"),
            })
        };
        match graph.as_mut() {
            None => {
                if tokens.len() != 2 {
                    return Err(DocumentError::Parse {
                        line: line_no,
                        column: tokens[0].0,
                        message: format!(
                            "header must be `m n`, found {} token(s)",
                            tokens.len()
                        ),
                    });
                }
                let m = parse_usize(tokens[0].0, tokens[0].1, "vertex count m")?;
                let n = parse_usize(tokens[1].0, tokens[1].1, "vertex count n")?;
                graph = Some(BipartiteTwoGraph::new(m, n).map_err(|e| {
                    DocumentError::InvalidAt {
                        line: line_no,
                        message: e.to_string(),
                    }
                })?);
            }
            Some(g) => {
                if tokens.len() != 4 && tokens.len() != 5 {
                    return Err(DocumentError::Parse {
                        line: line_no,
                        column: tokens[0].0,
                        message: format!(
                            "edge line must be `i1 i2 j1 j2 [weight]`, found {} token(s)",
                            tokens.len()
                        ),
                    });
                }
                let i1 = parse_usize(tokens[0].0, tokens[0].1, "vertex index i1")?;
                let i2 = parse_usize(tokens[1].0, tokens[1].1, "vertex index i2")?;
                let j1 = parse_usize(tokens[2].0, tokens[2].1, "vertex index j1")?;
                let j2 = parse_usize(tokens[3].0, tokens[3].1, "vertex index j2")?;
                let weight = if tokens.len() == 5 {
                    tokens[4].1.parse::<f64>().map_err(|_| DocumentError::Parse {
                        line: line_no,
                        column: tokens[4].0,
                        message: format!("expected weight, found {:?}", tokens[4].1),
                    })?
                } else {
                    1.0
                };
                for idx in [i1, i2, j1, j2] {
                    if idx < 1 {
                        return Err(DocumentError::InvalidAt {
                            line: line_no,
                            message: "vertex indices are 1-based".into(),
                        });
                    }
                }
                let edge = Edge::new(i1 - 1, i2 - 1, j1 - 1, j2 - 1, weight).map_err(|e| {
                    DocumentError::InvalidAt {
                        line: line_no,
                        message: e.to_string(),
                    }
                })?;
                g.add_edge(edge).map_err(|e| DocumentError::InvalidAt {
                    line: line_no,
                    message: e.to_string(),
                })?;
            }
        }
    }
    graph.ok_or_else(|| DocumentError::Invalid {
        message: "edge list is empty: missing `m n` header".into(),
    })
}

// ---------------------------------------------------------------------------
// Report documents (Serialize-only views with 1-based indices).
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub fixed: usize,
    pub block: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiWitnessDoc {
    pub pair: [usize; 2],
    pub block: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureReportDoc {
    pub x_reducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_witness: Option<WitnessDoc>,
    pub y_reducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_witness: Option<WitnessDoc>,
    pub x_quasi_reducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_quasi_witness: Option<QuasiWitnessDoc>,
    pub y_quasi_reducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_quasi_witness: Option<QuasiWitnessDoc>,
    pub irreducible: bool,
    pub quasi_irreducible: bool,
}

fn one_based(block: &[usize]) -> Vec<usize> {
    block.iter().map(|v| v + 1).collect()
}

impl From<&StructureReport> for StructureReportDoc {
    fn from(r: &StructureReport) -> Self {
        StructureReportDoc {
            x_reducible: r.x_reducible.is_some(),
            x_witness: r.x_reducible.as_ref().map(|w| WitnessDoc {
                fixed: w.fixed + 1,
                block: one_based(&w.block),
            }),
            y_reducible: r.y_reducible.is_some(),
            y_witness: r.y_reducible.as_ref().map(|w| WitnessDoc {
                fixed: w.fixed + 1,
                block: one_based(&w.block),
            }),
            x_quasi_reducible: r.x_quasi_reducible.is_some(),
            x_quasi_witness: r.x_quasi_reducible.as_ref().map(|w| QuasiWitnessDoc {
                pair: [w.fixed.0 + 1, w.fixed.1 + 1],
                block: one_based(&w.block),
            }),
            y_quasi_reducible: r.y_quasi_reducible.is_some(),
            y_quasi_witness: r.y_quasi_reducible.as_ref().map(|w| QuasiWitnessDoc {
                pair: [w.fixed.0 + 1, w.fixed.1 + 1],
                block: one_based(&w.block),
            }),
            irreducible: r.irreducible,
            quasi_irreducible: r.quasi_irreducible,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparabilityWitnessDoc {
    pub pair: [usize; 2],
    pub block: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparabilityReportDoc {
    pub m: usize,
    pub n: usize,
    pub t_separable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_witness: Option<SeparabilityWitnessDoc>,
    pub s_separable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_witness: Option<SeparabilityWitnessDoc>,
    pub bi_separable: bool,
}

impl SeparabilityReportDoc {
    pub fn new(m: usize, n: usize, r: &SeparabilityReport) -> Self {
        let conv = |w: &crate::graph::SeparabilityWitness| SeparabilityWitnessDoc {
            pair: [w.pair.0 + 1, w.pair.1 + 1],
            block: one_based(&w.block),
        };
        SeparabilityReportDoc {
            m,
            n,
            t_separable: r.t_separable.is_some(),
            t_witness: r.t_separable.as_ref().map(conv),
            s_separable: r.s_separable.is_some(),
            s_witness: r.s_separable.as_ref().map(conv),
            bi_separable: r.bi_separable,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenpairDoc {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub class: String,
    pub residual: f64,
}

impl From<&MEigenPair> for EigenpairDoc {
    fn from(p: &MEigenPair) -> Self {
        EigenpairDoc {
            lambda: p.lambda,
            x: p.pair.x.clone(),
            y: p.pair.y.clone(),
            class: p.class.to_string(),
            residual: p.residual,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverSummaryDoc {
    pub lambda: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub converged: bool,
    pub iterations_used: usize,
    pub eigenpair: EigenpairDoc,
    pub restart_values: Vec<f64>,
}

impl From<&SolverOutcome> for SolverSummaryDoc {
    fn from(o: &SolverOutcome) -> Self {
        SolverSummaryDoc {
            lambda: o.best.lambda,
            lower_bound: o.lower_bound,
            upper_bound: o.upper_bound,
            converged: o.converged,
            iterations_used: o.iterations_used,
            eigenpair: EigenpairDoc::from(&o.best),
            restart_values: o.restart_values.clone(),
        }
    }
}

/// Full analysis output. Phase timings are collected for diagnostics but
/// excluded from serialization so identical inputs and seeds serialize
/// byte-identically.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub m: usize,
    pub n: usize,
    pub structure: StructureReportDoc,
    pub lambda_max: SolverSummaryDoc,
    pub rho_star_estimate: f64,
    pub eigenpair_table: Vec<EigenpairDoc>,
    #[serde(skip)]
    pub timing_ms: BTreeMap<String, u128>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PsdReport {
    pub probe: f64,
    pub tol: f64,
    pub verdict: String,
    pub converged: bool,
    pub witness_x: Vec<f64>,
    pub witness_y: Vec<f64>,
}

impl PsdReport {
    pub fn new(outcome: &ProbeOutcome, tol: f64) -> Self {
        let verdict = if outcome.value >= -tol {
            "PSD-CONSISTENT"
        } else {
            "NOT-PSD"
        };
        PsdReport {
            probe: outcome.value,
            tol,
            verdict: verdict.to_string(),
            converged: outcome.converged,
            witness_x: outcome.witness.x.clone(),
            witness_y: outcome.witness.y.clone(),
        }
    }
}

pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports are serializable");
    out.push('\n');
    out
}
