//! JSON formats for case snapshots and certificate files.
//!
//! Files are written canonically: two-space indent, keys sorted, arrays of
//! scalars on one line, a trailing newline. Loading then saving a canonical
//! file reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::action::{ActionError, GeneratorSet};
use crate::certificates::{Certificate, CertificateEntry, Invariant, Term};
use crate::curves::{CurveError, CurveSystem};
use crate::lattice::{LatticeVector, RANK};

/// The only basis tag understood by this crate.
pub const BASIS_TAG: &str = "E10-fig1";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Schema {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: unsupported basis {found:?}, expected {BASIS_TAG:?}")]
    Basis { path: String, found: String },
    #[error("{path}: {source}")]
    Curves {
        path: String,
        #[source]
        source: CurveError,
    },
    #[error("{path}: {source}")]
    Generators {
        path: String,
        #[source]
        source: ActionError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRecord {
    pub label: String,
    pub vector: [i64; RANK],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSnapshot {
    pub case_id: u32,
    pub basis: String,
    pub curves: Vec<CurveRecord>,
    #[serde(default)]
    pub automorphisms: BTreeMap<String, [[i64; RANK]; RANK]>,
    #[serde(default)]
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    base: String,
    mult: u64,
    word: Vec<(String, i32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRecord {
    den: u8,
    terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateRecord {
    case_id: u32,
    claimed_bound: usize,
    equality_claimed: bool,
    invariant: Invariant,
    members: Vec<EntryRecord>,
}

impl From<CertificateRecord> for Certificate {
    fn from(r: CertificateRecord) -> Self {
        Certificate {
            case_id: r.case_id,
            claimed_bound: r.claimed_bound,
            equality_claimed: r.equality_claimed,
            invariant: r.invariant,
            members: r
                .members
                .into_iter()
                .map(|e| CertificateEntry {
                    denominator: e.den,
                    terms: e
                        .terms
                        .into_iter()
                        .map(|t| Term {
                            mult: t.mult,
                            base: t.base,
                            word: t.word,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl From<&Certificate> for CertificateRecord {
    fn from(c: &Certificate) -> Self {
        CertificateRecord {
            case_id: c.case_id,
            claimed_bound: c.claimed_bound,
            equality_claimed: c.equality_claimed,
            invariant: c.invariant,
            members: c
                .members
                .iter()
                .map(|e| EntryRecord {
                    den: e.denominator,
                    terms: e
                        .terms
                        .iter()
                        .map(|t| TermRecord {
                            base: t.base.clone(),
                            mult: t.mult,
                            word: t.word.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn schema_error(path: &str, e: serde_json::Error) -> DataError {
    DataError::Schema {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a snapshot without validating the lattice data.
pub fn parse_snapshot(text: &str, origin: &str) -> Result<CaseSnapshot, DataError> {
    serde_json::from_str(text).map_err(|e| schema_error(origin, e))
}

impl CaseSnapshot {
    /// Validates curves and generators; curve order is kept as stored.
    pub fn into_parts(self, origin: &str) -> Result<(CurveSystem, GeneratorSet), DataError> {
        if self.basis != BASIS_TAG {
            return Err(DataError::Basis {
                path: origin.to_string(),
                found: self.basis,
            });
        }
        let (labels, vectors): (Vec<String>, Vec<LatticeVector>) = self
            .curves
            .into_iter()
            .map(|c| (c.label, LatticeVector(c.vector)))
            .unzip();
        let system =
            CurveSystem::build(vectors, Some(labels)).map_err(|source| DataError::Curves {
                path: origin.to_string(),
                source,
            })?;
        let gens =
            GeneratorSet::new(self.automorphisms).map_err(|source| DataError::Generators {
                path: origin.to_string(),
                source,
            })?;
        Ok((system, gens))
    }
}

pub fn parse_case(text: &str, origin: &str) -> Result<(CurveSystem, GeneratorSet), DataError> {
    parse_snapshot(text, origin)?.into_parts(origin)
}

pub fn load_snapshot(path: &Path) -> Result<CaseSnapshot, DataError> {
    parse_snapshot(&read(path)?, &path.display().to_string())
}

pub fn load_case(path: &Path) -> Result<(CurveSystem, GeneratorSet), DataError> {
    let origin = path.display().to_string();
    parse_case(&read(path)?, &origin)
}

pub fn parse_certificates(text: &str, origin: &str) -> Result<Vec<Certificate>, DataError> {
    let records: Vec<CertificateRecord> =
        serde_json::from_str(text).map_err(|e| schema_error(origin, e))?;
    Ok(records.into_iter().map(Certificate::from).collect())
}

pub fn load_certificates(path: &Path) -> Result<Vec<Certificate>, DataError> {
    parse_certificates(&read(path)?, &path.display().to_string())
}

/// Canonical text of any serialisable value.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("plain data serialises");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

pub fn certificates_to_canonical(certs: &[Certificate]) -> String {
    let records: Vec<CertificateRecord> = certs.iter().map(CertificateRecord::from).collect();
    to_canonical(&records)
}

pub fn save_snapshot(path: &Path, snapshot: &CaseSnapshot) -> Result<(), DataError> {
    write_file(path, &to_canonical(snapshot))
}

pub fn save_certificates(path: &Path, certs: &[Certificate]) -> Result<(), DataError> {
    write_file(path, &certificates_to_canonical(certs))
}

fn write_file(path: &Path, text: &str) -> Result<(), DataError> {
    fs::write(path, text).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn scalar(v: &Value) -> String {
    serde_json::to_string(v).expect("scalar serialises")
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                out.push_str(&scalar(&Value::String((*k).clone())));
                out.push_str(": ");
                write_value(out, &map[*k], indent + 1);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push('}');
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                write_value(out, x, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push(']');
        }
        other => out.push_str(&scalar(other)),
    }
}
