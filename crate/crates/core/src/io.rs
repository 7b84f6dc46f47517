//! CSV and JSON encodings of spectra, curve traces, intersections and
//! reduction relations.
//!
//! Floats are written in Rust's shortest round-trip decimal form unless a
//! fixed number of decimals is requested, so unrounded files parse back
//! bit-exactly.

use serde::{Deserialize, Serialize};

use crate::conics::{fit_residuals, ConicRelation, FitSpec, Sign};
use crate::degeneracy::{CurveTrace, LevelPair};
use crate::error::{Error, Result};
use crate::intersect::IntersectionPoint;
use crate::reduction::SpectrumEntry;

pub const SPECTRUM_HEADER: [&str; 4] = ["n", "E", "q_used", "branch"];
pub const TRACE_HEADER: [&str; 3] = ["p", "q", "pair"];
pub const INTERSECTION_HEADER: [&str; 6] = ["q", "p", "pair1", "pair2", "residual1", "residual2"];

/// Validates a `--rounding` value.
pub fn check_rounding(rounding: Option<u32>) -> Result<()> {
    match rounding {
        Some(d) if !(1..=12).contains(&d) => Err(Error::Argument(format!(
            "rounding must be within 1..=12 decimals, got {d}"
        ))),
        _ => Ok(()),
    }
}

pub fn format_float(x: f64, rounding: Option<u32>) -> String {
    match rounding {
        Some(d) => format!("{:.*}", d as usize, x),
        None => format!("{x}"),
    }
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

fn write_csv<const N: usize>(
    header: [&str; N],
    rows: impl Iterator<Item = [String; N]>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

fn read_csv<const N: usize>(text: &str, header: [&str; N]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let found = r.headers().map_err(csv_err)?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Format(format!(
            "expected header {header:?}, found {found:?}"
        )));
    }
    r.records().map(|rec| rec.map_err(csv_err)).collect()
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = rec
        .get(i)
        .ok_or_else(|| Error::Format(format!("missing column {i}")))?;
    raw.parse()
        .map_err(|_| Error::Format(format!("cannot parse {raw:?} in column {i}")))
}

pub fn write_spectrum_csv(entries: &[SpectrumEntry], rounding: Option<u32>) -> Result<String> {
    check_rounding(rounding)?;
    write_csv(
        SPECTRUM_HEADER,
        entries.iter().map(|e| {
            [
                e.n.to_string(),
                format_float(e.energy, rounding),
                format_float(e.q_used, rounding),
                e.branch.to_string(),
            ]
        }),
    )
}

pub fn read_spectrum_csv(text: &str) -> Result<Vec<SpectrumEntry>> {
    read_csv(text, SPECTRUM_HEADER)?
        .iter()
        .map(|rec| {
            Ok(SpectrumEntry {
                n: field(rec, 0)?,
                energy: field(rec, 1)?,
                q_used: field(rec, 2)?,
                branch: field::<Sign>(rec, 3)?,
            })
        })
        .collect()
}

/// One `p,q,pair` row per sample of every trace.
pub fn write_traces_csv(traces: &[CurveTrace], rounding: Option<u32>) -> Result<String> {
    check_rounding(rounding)?;
    write_csv(
        TRACE_HEADER,
        traces.iter().flat_map(|t| {
            t.samples.iter().map(move |s| {
                [
                    format_float(s.p(), rounding),
                    format_float(s.q(), rounding),
                    t.pair.to_string(),
                ]
            })
        }),
    )
}

/// Rows of a trace file as `(p, q, pair)`.
pub fn read_traces_csv(text: &str) -> Result<Vec<(f64, f64, LevelPair)>> {
    read_csv(text, TRACE_HEADER)?
        .iter()
        .map(|rec| Ok((field(rec, 0)?, field(rec, 1)?, field(rec, 2)?)))
        .collect()
}

pub fn write_intersections_csv(
    points: &[IntersectionPoint],
    rounding: Option<u32>,
) -> Result<String> {
    check_rounding(rounding)?;
    write_csv(
        INTERSECTION_HEADER,
        points.iter().map(|pt| {
            [
                format_float(pt.q, rounding),
                format_float(pt.p, rounding),
                pt.pair1.to_string(),
                pt.pair2.to_string(),
                format!("{:e}", pt.residual1),
                format!("{:e}", pt.residual2),
            ]
        }),
    )
}

pub fn read_intersections_csv(text: &str) -> Result<Vec<IntersectionPoint>> {
    read_csv(text, INTERSECTION_HEADER)?
        .iter()
        .map(|rec| {
            Ok(IntersectionPoint {
                q: field(rec, 0)?,
                p: field(rec, 1)?,
                pair1: field(rec, 2)?,
                pair2: field(rec, 3)?,
                residual1: field(rec, 4)?,
                residual2: field(rec, 5)?,
            })
        })
        .collect()
}

/// Quality figures attached to a fitted relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    /// Defining-equation residuals at (q1,p0), (q2,p0) and (1,1).
    pub residuals: [f64; 3],
    pub p_min: Option<f64>,
    pub p_extremes: Option<(f64, f64)>,
}

/// `{"kind": ..., "params": {...}, "fit_spec": {...} | null}` plus optional
/// diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDocument {
    #[serde(flatten)]
    pub relation: ConicRelation,
    pub fit_spec: Option<FitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<FitDiagnostics>,
}

impl RelationDocument {
    pub fn new(relation: ConicRelation, fit_spec: Option<FitSpec>) -> Self {
        RelationDocument {
            relation,
            fit_spec,
            diagnostics: None,
        }
    }

    /// Attaches residuals at the fit points (or only at (1,1) without a spec)
    /// and the admissible-p information.
    pub fn with_diagnostics(mut self) -> Self {
        let rel = &self.relation;
        let residuals = match &self.fit_spec {
            Some(spec) => fit_residuals(rel, spec),
            None => [0.0, 0.0, rel.implicit_residual(1.0, 1.0)],
        };
        self.diagnostics = Some(FitDiagnostics {
            residuals,
            p_min: rel.p_min().ok(),
            p_extremes: rel.p_extremes(),
        });
        self
    }
}

pub fn relation_to_json(doc: &RelationDocument) -> Result<String> {
    serde_json::to_string_pretty(doc).map_err(|e| Error::Format(e.to_string()))
}

pub fn relation_from_json(text: &str) -> Result<RelationDocument> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}
