//! Certificates: explicit isotropic sequences with a claimed length, and
//! their verification against case data.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{apply_word, word_label, ActionError, GeneratorSet, Word};
use crate::configs::{validate_combination, ConfigError};
use crate::curves::CurveSystem;
use crate::data_io::DataError;
use crate::dynkin::DynkinType;
use crate::half_fibers::FiberKind;
use crate::lattice::{is_two_divisible, LatticeVector, RationalClass};
use crate::notation;
use crate::solver::{verify_sequence, SequenceReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Invariant {
    Nd,
    Cnd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub mult: u64,
    pub base: String,
    pub word: Word,
}

impl Term {
    pub fn label(&self) -> String {
        word_label(&self.base, &self.word)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    /// 1 or 2.
    pub denominator: u8,
    pub terms: Vec<Term>,
}

impl CertificateEntry {
    pub fn notation(&self) -> String {
        let labels: Vec<(u64, String)> = self.terms.iter().map(|t| (t.mult, t.label())).collect();
        notation::combination(
            self.denominator,
            labels.iter().map(|(m, l)| (*m, l.as_str())),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub case_id: u32,
    pub claimed_bound: usize,
    /// Informational only; verification certifies the lower bound.
    pub equality_claimed: bool,
    pub invariant: Invariant,
    pub members: Vec<CertificateEntry>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("entry {entry}, term {term}: no curve labelled {label:?}")]
    UnknownCurve {
        entry: usize,
        term: usize,
        label: String,
    },
    #[error("entry {entry}, term {term}: {source}")]
    UnresolvableCurve {
        entry: usize,
        term: usize,
        #[source]
        source: ActionError,
    },
    #[error("entry {entry}: denominator must be 1 or 2, got {found}")]
    BadDenominator { entry: usize, found: u8 },
}

/// Finds the class of a term: a curve stored under the full label wins,
/// otherwise the base curve is moved by the word.
pub fn resolve_term(
    term: &Term,
    system: &CurveSystem,
    gens: &GeneratorSet,
) -> Result<LatticeVector, Result<String, ActionError>> {
    if let Some(i) = system.index_of_label(&term.label()) {
        return Ok(*system.curve(i));
    }
    let base = system.index_of_label(&term.base).ok_or(Ok(term.label()))?;
    apply_word(system.curve(base), &term.word, gens).map_err(Err)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryReport {
    pub notation: String,
    pub class: RationalClass,
    pub integral: bool,
    pub indivisible: bool,
    /// Type and fiber kind of `denominator * entry`, or why it is not a
    /// configuration.
    pub configuration: Result<(DynkinType, FiberKind), ConfigError>,
}

impl EntryReport {
    pub fn type_label(&self) -> Option<String> {
        self.configuration
            .as_ref()
            .ok()
            .map(|(t, k)| format!("{t}^{k}"))
    }

    pub fn passed(&self) -> bool {
        self.integral && self.indivisible && self.configuration.is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub case_id: u32,
    pub claimed_bound: usize,
    pub entries: Vec<EntryReport>,
    pub sequence: SequenceReport,
    pub length_matches: bool,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(EntryReport::passed)
            && self.sequence.products_ok
            && self.length_matches
    }

    pub fn type_labels(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| e.type_label().unwrap_or_else(|| "?".into()))
            .collect()
    }
}

/// Runs every check on every entry. Lookup failures abort; all other
/// failures are recorded in the report.
pub fn verify_certificate(
    cert: &Certificate,
    system: &CurveSystem,
    gens: &GeneratorSet,
) -> Result<CertificateReport, CertificateError> {
    let mut entries = Vec::new();
    let mut classes = Vec::new();
    for (ei, entry) in cert.members.iter().enumerate() {
        if entry.denominator != 1 && entry.denominator != 2 {
            return Err(CertificateError::BadDenominator {
                entry: ei,
                found: entry.denominator,
            });
        }
        let mut terms = Vec::new();
        for (ti, t) in entry.terms.iter().enumerate() {
            let v = resolve_term(t, system, gens).map_err(|e| match e {
                Ok(label) => CertificateError::UnknownCurve {
                    entry: ei,
                    term: ti,
                    label,
                },
                Err(source) => CertificateError::UnresolvableCurve {
                    entry: ei,
                    term: ti,
                    source,
                },
            })?;
            terms.push((t.mult, v));
        }
        let numerator: LatticeVector = terms.iter().map(|&(m, v)| m as i64 * v).sum();
        let class = RationalClass::new(numerator, entry.denominator);
        let kind = if entry.denominator == 2 {
            FiberKind::F
        } else {
            FiberKind::HF
        };
        let configuration = validate_combination(&terms).map(|(t, _)| (t, kind));
        entries.push(EntryReport {
            notation: entry.notation(),
            integral: class.is_integral(),
            indivisible: class.is_integral() && !is_two_divisible(&class.numerator()),
            class,
            configuration,
        });
        classes.push(class);
    }
    Ok(CertificateReport {
        case_id: cert.case_id,
        claimed_bound: cert.claimed_bound,
        length_matches: cert.members.len() == cert.claimed_bound,
        sequence: verify_sequence(&classes),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseStatus {
    Pass,
    Fail(String),
    Skipped(String),
}

impl fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseStatus::Pass => write!(f, "PASS"),
            CaseStatus::Fail(why) => write!(f, "FAIL ({why})"),
            CaseStatus::Skipped(why) => write!(f, "SKIPPED ({why})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRow {
    pub case_id: u32,
    pub status: CaseStatus,
    pub report: Option<CertificateReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusSummary {
    pub rows: Vec<CorpusRow>,
}

impl CorpusSummary {
    pub fn count(&self, pred: impl Fn(&CaseStatus) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.status)).count()
    }

    pub fn passed(&self) -> usize {
        self.count(|s| *s == CaseStatus::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(|s| matches!(s, CaseStatus::Fail(_)))
    }

    pub fn skipped(&self) -> usize {
        self.count(|s| matches!(s, CaseStatus::Skipped(_)))
    }
}

/// Verifies each certificate against the data returned by `lookup`, which
/// yields `None` for cases without curve data. Rows are ordered by case id.
pub fn verify_corpus<F>(corpus: &[Certificate], mut lookup: F) -> CorpusSummary
where
    F: FnMut(u32) -> Option<Result<(CurveSystem, GeneratorSet), DataError>>,
{
    let mut order: Vec<&Certificate> = corpus.iter().collect();
    order.sort_by_key(|c| c.case_id);
    let rows = order
        .into_iter()
        .map(|cert| {
            let (status, report) = match lookup(cert.case_id) {
                None => (CaseStatus::Skipped("no curve data".into()), None),
                Some(Err(e)) => (CaseStatus::Fail(e.to_string()), None),
                Some(Ok((system, gens))) => match verify_certificate(cert, &system, &gens) {
                    Ok(r) if r.passed() => (CaseStatus::Pass, Some(r)),
                    Ok(r) => (CaseStatus::Fail("checks failed".into()), Some(r)),
                    Err(
                        e @ CertificateError::UnresolvableCurve {
                            source: ActionError::UnknownGenerator(_),
                            ..
                        },
                    ) => (CaseStatus::Skipped(e.to_string()), None),
                    Err(e) => (CaseStatus::Fail(e.to_string()), None),
                },
            };
            CorpusRow {
                case_id: cert.case_id,
                status,
                report,
            }
        })
        .collect();
    CorpusSummary { rows }
}
