//! Finite systems of smooth rational curve classes.
//!
//! Only the numerical invariants are checked: every class squares to -2,
//! pairwise products are non-negative and no class repeats. Whether a vector
//! really is an effective curve is taken on trust from the input data.

use thiserror::Error;

use crate::exact;
use crate::lattice::{dot, LatticeVector, RANK};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve {0} does not have self-intersection -2")]
    NotMinusTwo(usize),
    #[error("curves {0} and {1} have negative intersection")]
    NegativePairing(usize, usize),
    #[error("curves {0} and {1} are equal")]
    Duplicate(usize, usize),
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
}

/// An ordered, validated list of curve classes with their intersection matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSystem {
    curves: Vec<LatticeVector>,
    intersections: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl CurveSystem {
    /// Validates and caches all pairwise products. Without explicit labels the
    /// curves are named `R0, R1, ...`.
    pub fn build(
        vectors: Vec<LatticeVector>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, CurveError> {
        let labels = match labels {
            Some(l) if l.len() != vectors.len() => {
                return Err(CurveError::LabelCount {
                    expected: vectors.len(),
                    found: l.len(),
                })
            }
            Some(l) => l,
            None => (0..vectors.len()).map(|i| format!("R{i}")).collect(),
        };
        let n = vectors.len();
        let mut intersections = vec![vec![0i64; n]; n];
        for i in 0..n {
            let sq = dot(&vectors[i], &vectors[i]);
            if sq != -2 {
                return Err(CurveError::NotMinusTwo(i));
            }
            intersections[i][i] = sq;
            for j in 0..i {
                if vectors[i] == vectors[j] {
                    return Err(CurveError::Duplicate(j, i));
                }
                let p = dot(&vectors[i], &vectors[j]);
                if p < 0 {
                    return Err(CurveError::NegativePairing(j, i));
                }
                intersections[i][j] = p;
                intersections[j][i] = p;
            }
        }
        Ok(Self {
            curves: vectors,
            intersections,
            labels,
        })
    }

    pub fn empty() -> Self {
        Self {
            curves: Vec::new(),
            intersections: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curves(&self) -> &[LatticeVector] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> &LatticeVector {
        &self.curves[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn index_of(&self, v: &LatticeVector) -> Option<usize> {
        self.curves.iter().position(|c| c == v)
    }

    pub fn intersections(&self) -> &[Vec<i64>] {
        &self.intersections
    }

    pub fn intersection(&self, i: usize, j: usize) -> i64 {
        self.intersections[i][j]
    }

    /// Neighbours of `i` in the dual graph (positive intersection).
    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.intersections[i]
            .iter()
            .enumerate()
            .filter(move |&(j, &p)| j != i && p > 0)
            .map(|(j, _)| j)
    }

    /// Restriction of the intersection matrix to `subset`.
    pub fn restricted(&self, subset: &[usize]) -> Vec<Vec<i64>> {
        subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.intersections[i][j]).collect())
            .collect()
    }

    /// True iff the classes generate a rank-10 sublattice over Q.
    pub fn spans_full_rank(&self) -> bool {
        let rows: Vec<Vec<i64>> = self.curves.iter().map(|c| c.0.to_vec()).collect();
        !rows.is_empty() && exact::rank(&rows) == RANK
    }

    /// Appends curves already checked against the current system.
    pub(crate) fn extend_unchecked(
        &mut self,
        extra: impl IntoIterator<Item = (LatticeVector, String)>,
    ) {
        for (v, label) in extra {
            for (i, c) in self.curves.iter().enumerate() {
                let p = dot(c, &v);
                self.intersections[i].push(p);
            }
            let mut row: Vec<i64> = self.curves.iter().map(|c| dot(c, &v)).collect();
            row.push(dot(&v, &v));
            self.intersections.push(row);
            self.curves.push(v);
            self.labels.push(label);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn case_145_matches_dual_graph() {
        let (sys, _) = bundled::case_145();
        assert_eq!(sys.len(), 10);
        // Edges of the ten-curve dual graph: an outer 8-cycle
        // R0-R2-R3-R4-R5-R6-R7-R9-R0 plus R9-R8 and R4-R1.
        let mut edges = Vec::new();
        for i in 0..10 {
            for j in (i + 1)..10 {
                match sys.intersection(i, j) {
                    0 => {}
                    1 => edges.push((i, j)),
                    p => panic!("unexpected product {p} between R{i} and R{j}"),
                }
            }
        }
        let expected = vec![
            (0, 2),
            (0, 9),
            (1, 4),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 9),
            (8, 9),
        ];
        assert_eq!(edges, expected);
        assert!(sys.spans_full_rank());
    }

    #[test]
    fn rejects_bad_input() {
        let e1 = LatticeVector::basis(0);
        assert!(CurveSystem::build(vec![e1], None).is_ok());
        assert_eq!(
            CurveSystem::build(vec![e1, LatticeVector::ZERO], None),
            Err(CurveError::NotMinusTwo(1))
        );
        assert_eq!(
            CurveSystem::build(vec![e1, e1], None),
            Err(CurveError::Duplicate(0, 1))
        );
        // -e4 meets e1 negatively
        assert_eq!(
            CurveSystem::build(vec![e1, -LatticeVector::basis(3)], None),
            Err(CurveError::NegativePairing(0, 1))
        );
    }

    #[test]
    fn single_curve_not_full_rank() {
        let s = CurveSystem::build(vec![LatticeVector::basis(0)], None).unwrap();
        assert!(!s.spans_full_rank());
        assert!(!CurveSystem::empty().spans_full_rank());
    }

    #[test]
    fn order_and_cache_coherent() {
        let (sys, _) = bundled::case_158();
        for i in 0..sys.len() {
            for j in 0..sys.len() {
                assert_eq!(sys.intersection(i, j), dot(sys.curve(i), sys.curve(j)));
            }
        }
        assert_eq!(sys.label(15), "R2·H2");
        assert!(sys.spans_full_rank());
    }
}
