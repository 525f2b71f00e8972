//! Half-fiber classes coming from elliptic configurations.
//!
//! A configuration whose class is divisible by two is read as a fiber and
//! contributes half its class; otherwise the configuration itself is taken as
//! the half-fiber. This is a lattice-level stand-in for the geometric
//! dichotomy and can misread a primitive fiber whose half-fibers are not
//! supported on the given curves.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::configs::{enumerate_configurations, EllipticConfiguration, EnumerateOptions};
use crate::curves::CurveSystem;
use crate::dynkin::DynkinType;
use crate::lattice::{halve, is_two_divisible, LatticeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FiberKind {
    /// The configuration is a fiber; the class was halved.
    F,
    /// The configuration is a half-fiber.
    HF,
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiberKind::F => "F",
            FiberKind::HF => "HF",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfFiberClass {
    pub klass: LatticeVector,
    pub kind: FiberKind,
    pub dynkin_type: DynkinType,
    /// Index of the source configuration in enumeration order.
    pub source: usize,
}

impl HalfFiberClass {
    /// `Ã7^HF`-style label.
    pub fn type_label(&self) -> String {
        format!("{}^{}", self.dynkin_type, self.kind)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HalfFiberError {
    #[error("configuration class {0} is divisible by 4")]
    DoubleDivisible(LatticeVector),
}

/// Fiber/half-fiber reading of a single class.
pub fn classify_class(class: &LatticeVector) -> Result<(LatticeVector, FiberKind), HalfFiberError> {
    if !is_two_divisible(class) {
        return Ok((*class, FiberKind::HF));
    }
    let half = halve(class).expect("checked divisible");
    if is_two_divisible(&half) {
        return Err(HalfFiberError::DoubleDivisible(*class));
    }
    Ok((half, FiberKind::F))
}

pub fn classify(
    config: &EllipticConfiguration,
    source: usize,
) -> Result<HalfFiberClass, HalfFiberError> {
    let (klass, kind) = classify_class(&config.class)?;
    Ok(HalfFiberClass {
        klass,
        kind,
        dynkin_type: config.dynkin_type,
        source,
    })
}

/// Classifies every configuration, keeping the first source of each class.
pub fn collect_hf(
    configs: &[EllipticConfiguration],
) -> Result<Vec<HalfFiberClass>, HalfFiberError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        let h = classify(c, i)?;
        if seen.insert(h.klass) {
            out.push(h);
        }
    }
    Ok(out)
}

/// Half-fiber set of a curve system, in configuration order.
pub fn build_hf_set(
    system: &CurveSystem,
    opts: EnumerateOptions,
) -> Result<(Vec<EllipticConfiguration>, Vec<HalfFiberClass>), HalfFiberError> {
    let configs = enumerate_configurations(system, opts);
    let hf = collect_hf(&configs)?;
    Ok((configs, hf))
}
