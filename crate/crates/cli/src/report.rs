use std::path::Path;

use fllab::io::{InvariantJson, MatrixJson};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: &'static str,
    pub p: u64,
    pub u: i64,
    pub n: usize,
    pub seed: u64,
    pub precision: u32,
    pub samples: usize,
    pub height: i64,
    pub guard: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inject: Option<f64>,
    pub version: &'static str,
    pub timestamp: String,
}

/// Whether a sample came from a matched pair or from an invariant point
/// without a hermitian orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Matched,
    Injected,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub kind: SampleKind,
    pub invariants: Option<InvariantJson>,
    pub o_u: Option<i64>,
    pub o_gl: Option<i64>,
    pub hermitian_exists: Option<bool>,
    pub equal: Option<bool>,
    pub runtime_ms: u64,
    pub retries: u32,
    /// Hermitian representative, absent for injected samples.
    pub x: Option<MatrixJson>,
    pub y: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub mismatches: usize,
    pub precision_failures: usize,
    pub explosion_skips: usize,
    pub errors: usize,
    pub injected: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub samples: Vec<SampleRecord>,
    pub summary: Summary,
}

impl Summary {
    pub fn tally(records: &[SampleRecord]) -> Self {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            if r.equal == Some(false) {
                s.mismatches += 1;
            }
            if r.kind == SampleKind::Injected {
                s.injected += 1;
            }
            if r.skipped.is_some() {
                s.explosion_skips += 1;
            }
            match &r.error {
                Some(e) if e.starts_with("precision exhausted") => s.precision_failures += 1,
                Some(_) => s.errors += 1,
                None => {}
            }
        }
        s
    }
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    index: usize,
    kind: SampleKind,
    charpoly: String,
    moments: String,
    o_u: Option<i64>,
    o_gl: Option<i64>,
    hermitian_exists: Option<bool>,
    equal: Option<bool>,
    runtime_ms: u64,
    retries: u32,
    skipped: Option<&'a str>,
    error: Option<&'a str>,
}

/// One row per sample; invariant coordinates are joined with `;`.
pub fn write_csv(path: &Path, records: &[SampleRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        let (charpoly, moments) = match &r.invariants {
            Some(a) => (a.charpoly.join(";"), a.moments.join(";")),
            None => (String::new(), String::new()),
        };
        w.serialize(CsvRow {
            index: r.index,
            kind: r.kind,
            charpoly,
            moments,
            o_u: r.o_u,
            o_gl: r.o_gl,
            hermitian_exists: r.hermitian_exists,
            equal: r.equal,
            runtime_ms: r.runtime_ms,
            retries: r.retries,
            skipped: r.skipped.as_deref(),
            error: r.error.as_deref(),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Record {
    pub index: usize,
    pub x: Option<MatrixJson>,
    pub u_lhs: Option<i64>,
    pub u_rhs: Option<i64>,
    pub gl_lhs: Option<i64>,
    pub gl_rhs: Option<i64>,
    pub holds: Option<bool>,
    pub retries: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Lemma1Summary {
    pub total: usize,
    pub failures: usize,
    pub precision_failures: usize,
    pub explosion_skips: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub meta: Meta,
    pub samples: Vec<Lemma1Record>,
    pub summary: Lemma1Summary,
}

impl Lemma1Summary {
    pub fn tally(records: &[Lemma1Record]) -> Self {
        let mut s = Lemma1Summary { total: records.len(), ..Lemma1Summary::default() };
        for r in records {
            if r.holds == Some(false) {
                s.failures += 1;
            }
            if r.skipped.is_some() {
                s.explosion_skips += 1;
            }
            match &r.error {
                Some(e) if e.starts_with("precision exhausted") => s.precision_failures += 1,
                Some(_) => s.errors += 1,
                None => {}
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub side: String,
    pub check: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierReport {
    pub p: u64,
    pub u: i64,
    pub n: usize,
    pub level: u32,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
}
