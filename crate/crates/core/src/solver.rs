//! Longest isotropic sequences: cliques in the "product equals one" graph.

use num_rational::Rational64;
use thiserror::Error;

use crate::half_fibers::HalfFiberClass;
use crate::lattice::{dot, is_two_divisible, LatticeVector, RationalClass, RANK};

/// No isotropic sequence in a rank-10 lattice is longer than this.
pub const LENGTH_CAP: usize = RANK;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("class {0} is not isotropic")]
    NotIsotropic(usize),
    #[error("internal check failed: witness {0:?} is not an isotropic sequence")]
    BadWitness(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CndResult {
    pub length: usize,
    /// Indices into the input, ascending.
    pub witness: Vec<usize>,
}

struct Graph {
    n: usize,
    words: usize,
    adj: Vec<Vec<u64>>,
}

impl Graph {
    fn new(classes: &[LatticeVector]) -> Self {
        let n = classes.len();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![vec![0u64; words]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if dot(&classes[i], &classes[j]) == 1 {
                    adj[i][j / 64] |= 1 << (j % 64);
                    adj[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        Self { n, words, adj }
    }

    fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }

    fn degree(&self, i: usize) -> u32 {
        self.adj[i].iter().map(|w| w.count_ones()).sum()
    }
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn first(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn clear(set: &mut [u64], i: usize) {
    set[i / 64] &= !(1 << (i % 64));
}

/// Size of a maximum clique, exploring vertices by descending degree.
fn max_clique_size(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    // relabel so that bit position = rank in `order`
    let mut adj = vec![vec![0u64; g.words]; g.n];
    for (pi, &vi) in order.iter().enumerate() {
        for (pj, &vj) in order.iter().enumerate() {
            if g.has_edge(vi, vj) {
                adj[pi][pj / 64] |= 1 << (pj % 64);
            }
        }
    }
    let mut all = vec![0u64; g.words];
    for i in 0..g.n {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut best = 0;
    expand(&adj, 0, all, &mut best);
    best
}

fn expand(adj: &[Vec<u64>], depth: usize, mut cand: Vec<u64>, best: &mut usize) {
    if depth > *best {
        *best = depth;
    }
    while let Some(v) = first(&cand) {
        if *best >= LENGTH_CAP || depth + count(&cand) <= *best {
            return;
        }
        clear(&mut cand, v);
        let next = and(&cand, &adj[v]);
        expand(adj, depth + 1, next, best);
    }
}

/// Lexicographically first clique of the given size, in input order.
fn first_clique(g: &Graph, size: usize) -> Option<Vec<usize>> {
    let mut all = vec![0u64; g.words];
    for i in 0..g.n {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut chosen = Vec::with_capacity(size);
    search(g, size, all, &mut chosen).then_some(chosen)
}

fn search(g: &Graph, size: usize, mut cand: Vec<u64>, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == size {
        return true;
    }
    while let Some(v) = first(&cand) {
        if chosen.len() + count(&cand) < size {
            return false;
        }
        clear(&mut cand, v);
        chosen.push(v);
        if search(g, size, and(&cand, &g.adj[v]), chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Longest sequence of classes with pairwise product one.
///
/// The length is found by branch and bound; the witness is then the
/// lexicographically first clique of that length, so the result depends only
/// on the input order.
pub fn max_isotropic_sequence(classes: &[LatticeVector]) -> Result<CndResult, SolverError> {
    if let Some(i) = classes.iter().position(|c| c.square() != 0) {
        return Err(SolverError::NotIsotropic(i));
    }
    let g = Graph::new(classes);
    let length = max_clique_size(&g);
    let witness = first_clique(&g, length).expect("a clique of the maximum size exists");
    let members: Vec<RationalClass> = witness
        .iter()
        .map(|&i| RationalClass::integral(classes[i]))
        .collect();
    if !verify_sequence(&members).products_ok {
        return Err(SolverError::BadWitness(witness));
    }
    Ok(CndResult { length, witness })
}

pub fn compute_cnd(hf: &[HalfFiberClass]) -> Result<CndResult, SolverError> {
    let classes: Vec<LatticeVector> = hf.iter().map(|h| h.klass).collect();
    max_isotropic_sequence(&classes)
}

/// Outcome of checking a candidate sequence entry by entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub integral: Vec<bool>,
    pub indivisible: Vec<bool>,
    /// Full product matrix.
    pub products: Vec<Vec<Rational64>>,
    /// Whether `products` equals the all-ones matrix minus the identity.
    pub products_ok: bool,
}

impl SequenceReport {
    pub fn passed(&self) -> bool {
        self.products_ok && self.integral.iter().all(|&b| b) && self.indivisible.iter().all(|&b| b)
    }
}

fn rational_dot(a: &RationalClass, b: &RationalClass) -> Rational64 {
    Rational64::new(
        dot(&a.numerator(), &b.numerator()),
        a.denominator() as i64 * b.denominator() as i64,
    )
}

/// Standalone check: integrality, 2-indivisibility and `F G F^T = 1 - I`.
pub fn verify_sequence(members: &[RationalClass]) -> SequenceReport {
    let integral = members.iter().map(|m| m.is_integral()).collect();
    let indivisible = members
        .iter()
        .map(|m| m.is_integral() && !is_two_divisible(&m.numerator()))
        .collect();
    let products: Vec<Vec<Rational64>> = members
        .iter()
        .map(|a| members.iter().map(|b| rational_dot(a, b)).collect())
        .collect();
    let products_ok = products.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, p)| *p == Rational64::from_integer(if i == j { 0 } else { 1 }))
    });
    SequenceReport {
        integral,
        indivisible,
        products,
        products_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Every maximum clique by exhaustive enumeration; returns the
    /// lexicographically smallest.
    fn oracle(adj: &[Vec<bool>]) -> Vec<usize> {
        fn rec(adj: &[Vec<bool>], cur: &mut Vec<usize>, start: usize, best: &mut Vec<usize>) {
            if cur.len() > best.len() || (cur.len() == best.len() && *cur < *best) {
                *best = cur.clone();
            }
            for v in start..adj.len() {
                if cur.iter().all(|&u| adj[u][v]) {
                    cur.push(v);
                    rec(adj, cur, v + 1, best);
                    cur.pop();
                }
            }
        }
        let mut best = Vec::new();
        rec(adj, &mut Vec::new(), 0, &mut best);
        best
    }

    fn graph_from(n: usize, edges: &[bool]) -> (Graph, Vec<Vec<bool>>) {
        let mut adj = vec![vec![false; n]; n];
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![vec![0u64; words]; n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if edges[k] {
                    adj[i][j] = true;
                    adj[j][i] = true;
                    bits[i][j / 64] |= 1 << (j % 64);
                    bits[j][i / 64] |= 1 << (i % 64);
                }
                k += 1;
            }
        }
        (
            Graph {
                n,
                words,
                adj: bits,
            },
            adj,
        )
    }

    proptest! {
        #[test]
        fn clique_search_matches_oracle(n in 0usize..16, seed in prop::collection::vec(any::<bool>(), 120)) {
            let (g, adj) = graph_from(n, &seed);
            let want = oracle(&adj);
            prop_assume!(want.len() <= LENGTH_CAP);
            let size = max_clique_size(&g);
            prop_assert_eq!(size, want.len());
            prop_assert_eq!(first_clique(&g, size).unwrap(), want);
        }
    }

    #[test]
    fn empty_input() {
        assert_eq!(
            max_isotropic_sequence(&[]).unwrap(),
            CndResult {
                length: 0,
                witness: vec![]
            }
        );
    }

    #[test]
    fn rejects_non_isotropic() {
        let e1 = LatticeVector::basis(0);
        assert_eq!(
            max_isotropic_sequence(&[e1]),
            Err(SolverError::NotIsotropic(0))
        );
    }

    #[test]
    fn verify_examples() {
        let f1 = LatticeVector::new([5, 3, 6, 9, 8, 7, 5, 3, 2, 1]);
        let single = verify_sequence(&[RationalClass::integral(f1)]);
        assert!(single.passed());
        let dup = verify_sequence(&[RationalClass::integral(f1), RationalClass::integral(f1)]);
        assert!(!dup.products_ok);
        assert_eq!(dup.products[0][1], Rational64::from_integer(0));
        let half = verify_sequence(&[RationalClass::new(LatticeVector::basis(0), 2)]);
        assert!(!half.integral[0] && !half.passed());
    }
}
