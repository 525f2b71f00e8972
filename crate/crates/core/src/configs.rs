//! Elliptic configurations supported on a curve system.
//!
//! A connected set of curves supports a configuration iff its intersection
//! matrix is negative semidefinite of corank one with a strictly positive
//! kernel vector; that vector gives the component multiplicities.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curves::CurveSystem;
use crate::dynkin::{self, DynkinError, DynkinType};
use crate::exact;
use crate::lattice::{gram_of, LatticeVector};

/// Largest support an affine diagram can have inside a rank-10 lattice.
pub const MAX_SUPPORT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticConfiguration {
    /// Sorted curve indices.
    pub support: Vec<usize>,
    /// Multiplicity of `support[i]`.
    pub multiplicities: Vec<u64>,
    pub class: LatticeVector,
    pub dynkin_type: DynkinType,
}

impl EllipticConfiguration {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("a configuration needs at least two distinct curves")]
    TooSmall,
    #[error("curve {0} appears twice")]
    RepeatedCurve(usize),
    #[error("component {0} is not a (-2)-class")]
    NotACurve(usize),
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("intersection matrix has a positive direction")]
    NotSemidefinite,
    #[error("intersection matrix has corank {0}, expected 1")]
    WrongCorank(usize),
    #[error("kernel vector is not strictly positive")]
    KernelNotPositive,
    #[error("multiplicities {found:?} differ from the kernel vector {expected:?}")]
    MultiplicityMismatch { found: Vec<u64>, expected: Vec<u64> },
    #[error(transparent)]
    Dynkin(#[from] DynkinError),
    #[error("configuration invariant violated: {0}")]
    Invariant(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_support: usize,
    /// Skip extensions of subsets with a positive direction.
    pub prune: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            max_support: MAX_SUPPORT,
            prune: true,
        }
    }
}

fn is_connected(gram: &[Vec<i64>]) -> bool {
    let n = gram.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if !seen[w] && w != v && gram[v][w] > 0 {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Primitive positive kernel vector of a connected restricted Gram matrix,
/// if it is negative semidefinite of corank one.
fn kernel_multiplicities(gram: &[Vec<i64>]) -> Result<Vec<u64>, ConfigError> {
    let s = exact::inertia(gram);
    if s.positive > 0 {
        return Err(ConfigError::NotSemidefinite);
    }
    if s.zero != 1 {
        return Err(ConfigError::WrongCorank(s.zero));
    }
    let basis = exact::kernel_basis(gram);
    let mut v = exact::primitive_integer(&basis[0]);
    if v.iter().any(|x| x.is_negative()) {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    if v.iter().any(|x| !x.is_positive()) {
        return Err(ConfigError::KernelNotPositive);
    }
    Ok(v.iter()
        .map(|x| x.to_u64().expect("small multiplicity"))
        .collect())
}

/// Checks that `sum m_i C_i` is an elliptic configuration and returns its
/// type and class.
pub fn validate_combination(
    terms: &[(u64, LatticeVector)],
) -> Result<(DynkinType, LatticeVector), ConfigError> {
    if terms.len() < 2 {
        return Err(ConfigError::TooSmall);
    }
    for (i, (_, v)) in terms.iter().enumerate() {
        if v.square() != -2 {
            return Err(ConfigError::NotACurve(i));
        }
        if terms[..i].iter().any(|(_, w)| w == v) {
            return Err(ConfigError::RepeatedCurve(i));
        }
    }
    let vectors: Vec<LatticeVector> = terms.iter().map(|t| t.1).collect();
    let gram = gram_of(&vectors);
    if !is_connected(&gram) {
        return Err(ConfigError::Disconnected);
    }
    let expected = kernel_multiplicities(&gram)?;
    let found: Vec<u64> = terms.iter().map(|t| t.0).collect();
    if found != expected {
        return Err(ConfigError::MultiplicityMismatch { found, expected });
    }
    let t = dynkin::label_type(&gram, &found)?;
    let class = terms.iter().map(|&(m, v)| m as i64 * v).sum();
    Ok((t, class))
}

/// Tests one support against the configuration criterion. `Err` carries
/// whether the subset already has a positive direction.
fn test_support(system: &CurveSystem, support: &[usize]) -> Result<EllipticConfiguration, bool> {
    let gram = system.restricted(support);
    match kernel_multiplicities(&gram) {
        Ok(multiplicities) => {
            let dynkin_type = dynkin::label_type(&gram, &multiplicities)
                .expect("kernel vector of an affine diagram carries its marks");
            let class = support
                .iter()
                .zip(&multiplicities)
                .map(|(&i, &m)| m as i64 * *system.curve(i))
                .sum();
            Ok(EllipticConfiguration {
                support: support.to_vec(),
                multiplicities,
                class,
                dynkin_type,
            })
        }
        Err(ConfigError::NotSemidefinite) => Err(true),
        Err(_) => Err(false),
    }
}

/// All configurations supported on `system`, sorted by support.
///
/// Connected subsets are grown one neighbour at a time, each subset produced
/// once. A subset with a positive direction is not extended when pruning is
/// on: every superset contains it as a principal block and inherits that
/// direction by interlacing.
pub fn enumerate_configurations(
    system: &CurveSystem,
    opts: EnumerateOptions,
) -> Vec<EllipticConfiguration> {
    let n = system.len();
    let max = opts.max_support.min(MAX_SUPPORT);
    let adj: Vec<Vec<usize>> = (0..n).map(|i| system.neighbours(i).collect()).collect();
    let mut out = Vec::new();
    let mut sub = Vec::with_capacity(max);
    let mut in_sub = vec![false; n];
    let mut in_nbhd = vec![0u32; n];
    for v in 0..n {
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        sub.push(v);
        in_sub[v] = true;
        for &u in &adj[v] {
            in_nbhd[u] += 1;
        }
        grow(
            system,
            &adj,
            opts.prune,
            max,
            v,
            &mut sub,
            &mut in_sub,
            &mut in_nbhd,
            ext,
            &mut out,
        );
        for &u in &adj[v] {
            in_nbhd[u] -= 1;
        }
        in_sub[v] = false;
        sub.pop();
    }
    for c in &mut out {
        let mut order: Vec<usize> = (0..c.support.len()).collect();
        order.sort_by_key(|&i| c.support[i]);
        c.multiplicities = order.iter().map(|&i| c.multiplicities[i]).collect();
        c.support = order.iter().map(|&i| c.support[i]).collect();
    }
    out.sort_by(|a, b| a.support.cmp(&b.support));
    out
}

#[allow(clippy::too_many_arguments)]
fn grow(
    system: &CurveSystem,
    adj: &[Vec<usize>],
    prune: bool,
    max: usize,
    root: usize,
    sub: &mut Vec<usize>,
    in_sub: &mut [bool],
    in_nbhd: &mut [u32],
    mut ext: Vec<usize>,
    out: &mut Vec<EllipticConfiguration>,
) {
    if sub.len() >= 2 {
        match test_support(system, sub) {
            Ok(c) => out.push(c),
            Err(true) if prune => return,
            Err(_) => {}
        }
    }
    if sub.len() == max {
        return;
    }
    while let Some(w) = ext.pop() {
        // exclusive neighbours of w: beyond the root and not yet adjacent to sub
        let mut next = ext.clone();
        for &u in &adj[w] {
            if u > root && !in_sub[u] && in_nbhd[u] == 0 && !next.contains(&u) {
                next.push(u);
            }
        }
        sub.push(w);
        in_sub[w] = true;
        for &u in &adj[w] {
            in_nbhd[u] += 1;
        }
        grow(
            system, adj, prune, max, root, sub, in_sub, in_nbhd, next, out,
        );
        for &u in &adj[w] {
            in_nbhd[u] -= 1;
        }
        in_sub[w] = false;
        sub.pop();
    }
}

/// Re-checks every invariant of a configuration against its system.
pub fn audit(system: &CurveSystem, c: &EllipticConfiguration) -> Result<(), ConfigError> {
    let terms: Vec<(u64, LatticeVector)> = c
        .support
        .iter()
        .zip(&c.multiplicities)
        .map(|(&i, &m)| (m, *system.curve(i)))
        .collect();
    let (t, class) = validate_combination(&terms)?;
    if t != c.dynkin_type {
        return Err(ConfigError::Invariant("stored type"));
    }
    if class != c.class {
        return Err(ConfigError::Invariant("stored class"));
    }
    if class.square() != 0 {
        return Err(ConfigError::Invariant("class is not isotropic"));
    }
    if c.support
        .iter()
        .any(|&i| !class.dot(system.curve(i)).is_zero())
    {
        return Err(ConfigError::Invariant("class meets a component"));
    }
    if c.support.len() != c.dynkin_type.vertices() {
        return Err(ConfigError::Invariant("support size"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn find<'a>(cs: &'a [EllipticConfiguration], support: &[usize]) -> &'a EllipticConfiguration {
        let mut s = support.to_vec();
        s.sort_unstable();
        cs.iter()
            .find(|c| c.support == s)
            .unwrap_or_else(|| panic!("no configuration on {s:?}"))
    }

    fn mult_of(c: &EllipticConfiguration, i: usize) -> u64 {
        c.multiplicities[c.support.iter().position(|&j| j == i).unwrap()]
    }

    #[test]
    fn case_145_eight_cycle_and_e7() {
        let (sys, _) = bundled::case_145();
        let cs = enumerate_configurations(&sys, EnumerateOptions::default());
        let a7 = find(&cs, &[0, 2, 3, 4, 5, 6, 7, 9]);
        assert_eq!(a7.dynkin_type, DynkinType::A(7));
        assert!(a7.multiplicities.iter().all(|&m| m == 1));

        // 4R9 + 3R0 + 3R7 + 2R2 + 2R6 + 2R8 + R3 + R5
        let g3 = find(&cs, &[9, 0, 7, 2, 6, 8, 3, 5]);
        assert_eq!(g3.dynkin_type, DynkinType::E7);
        let want = [
            (9, 4),
            (0, 3),
            (7, 3),
            (2, 2),
            (6, 2),
            (8, 2),
            (3, 1),
            (5, 1),
        ];
        for (i, m) in want {
            assert_eq!(mult_of(g3, i), m);
        }
        let class: LatticeVector = want.iter().map(|&(i, m)| m as i64 * *sys.curve(i)).sum();
        assert_eq!(g3.class, class);

        for c in &cs {
            audit(&sys, c).unwrap();
        }
    }

    #[test]
    fn case_158_small_types() {
        let (sys, _) = bundled::case_158();
        let cs = enumerate_configurations(&sys, EnumerateOptions::default());
        let a1 = find(&cs, &[0, 2]);
        assert_eq!(a1.dynkin_type, DynkinType::A(1));
        assert_eq!(a1.multiplicities, vec![1, 1]);
        // R5 + R6 + R8 + R9 + 2 R11; R11 sits at index 10
        let d4 = find(&cs, &[5, 6, 8, 9, 10]);
        assert_eq!(d4.dynkin_type, DynkinType::D(4));
        assert_eq!(mult_of(d4, 10), 2);
        assert_eq!(d4.multiplicities.iter().filter(|&&m| m == 1).count(), 4);
    }

    #[test]
    fn single_curve_never_a_configuration() {
        let s = CurveSystem::build(vec![LatticeVector::basis(0)], None).unwrap();
        assert!(enumerate_configurations(&s, EnumerateOptions::default()).is_empty());
        assert_eq!(
            validate_combination(&[(1, LatticeVector::basis(0))]),
            Err(ConfigError::TooSmall)
        );
    }

    #[test]
    fn pruning_does_not_change_result() {
        let (sys, _) = bundled::case_158();
        let a = enumerate_configurations(&sys, EnumerateOptions::default());
        let b = enumerate_configurations(
            &sys,
            EnumerateOptions {
                prune: false,
                ..Default::default()
            },
        );
        assert_eq!(a, b);
    }

    #[test]
    fn max_support_limits_size() {
        let (sys, _) = bundled::case_145();
        let cs = enumerate_configurations(
            &sys,
            EnumerateOptions {
                max_support: 5,
                prune: true,
            },
        );
        assert!(cs.iter().all(|c| c.len() <= 5));
        assert!(!cs.iter().any(|c| c.dynkin_type == DynkinType::A(7)));
    }

    #[test]
    fn combination_errors() {
        let (sys, _) = bundled::case_145();
        let c = |i: usize| *sys.curve(i);
        assert_eq!(
            validate_combination(&[(1, c(0)), (1, c(4))]),
            Err(ConfigError::Disconnected)
        );
        // a chain is negative definite
        assert_eq!(
            validate_combination(&[(1, c(0)), (1, c(2)), (1, c(3))]),
            Err(ConfigError::WrongCorank(0))
        );
        let cycle: Vec<(u64, LatticeVector)> = [0, 2, 3, 4, 5, 6, 7, 9]
            .iter()
            .map(|&i| (1, c(i)))
            .collect();
        assert!(validate_combination(&cycle).is_ok());
        let mut doubled = cycle.clone();
        doubled.iter_mut().for_each(|t| t.0 = 2);
        assert!(matches!(
            validate_combination(&doubled),
            Err(ConfigError::MultiplicityMismatch { .. })
        ));
        let mut with_leg = cycle;
        with_leg.push((1, c(1)));
        assert_eq!(
            validate_combination(&with_leg),
            Err(ConfigError::NotSemidefinite)
        );
    }
}
