//! Printing classes as `½(R0+2R11+R2·H2)`.

use crate::configs::EllipticConfiguration;
use crate::curves::CurveSystem;
use crate::half_fibers::{FiberKind, HalfFiberClass};

/// `sum m_i label_i`, halved when `denominator` is 2.
pub fn combination<'a>(denominator: u8, terms: impl IntoIterator<Item = (u64, &'a str)>) -> String {
    let body: Vec<String> = terms
        .into_iter()
        .map(|(m, l)| {
            if m == 1 {
                l.to_string()
            } else {
                format!("{m}{l}")
            }
        })
        .collect();
    let body = body.join("+");
    if denominator == 2 {
        format!("½({body})")
    } else {
        body
    }
}

pub fn configuration(system: &CurveSystem, c: &EllipticConfiguration, denominator: u8) -> String {
    combination(
        denominator,
        c.support
            .iter()
            .zip(&c.multiplicities)
            .map(|(&i, &m)| (m, system.label(i))),
    )
}

/// A half-fiber written through the configuration it came from.
pub fn half_fiber(
    system: &CurveSystem,
    configs: &[EllipticConfiguration],
    h: &HalfFiberClass,
) -> String {
    let den = match h.kind {
        FiberKind::F => 2,
        FiberKind::HF => 1,
    };
    configuration(system, &configs[h.source], den)
}
