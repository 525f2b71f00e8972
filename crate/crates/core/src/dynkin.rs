//! Affine Dynkin labels, read off the dual graph and cross-checked against
//! the standard marks.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    /// Ã_n, n >= 1
    A(usize),
    /// D̃_n, n >= 4
    D(usize),
    E6,
    E7,
    E8,
}

impl DynkinType {
    /// Number of vertices of the affine diagram.
    pub fn vertices(&self) -> usize {
        match *self {
            DynkinType::A(n) | DynkinType::D(n) => n + 1,
            DynkinType::E6 => 7,
            DynkinType::E7 => 8,
            DynkinType::E8 => 9,
        }
    }

    /// Affine marks, sorted ascending.
    pub fn marks(&self) -> Vec<u64> {
        match *self {
            DynkinType::A(n) => vec![1; n + 1],
            DynkinType::D(n) => {
                let mut m = vec![1; 4];
                m.extend(std::iter::repeat_n(2, n - 3));
                m
            }
            DynkinType::E6 => vec![1, 1, 1, 2, 2, 2, 3],
            DynkinType::E7 => vec![1, 1, 2, 2, 2, 3, 3, 4],
            DynkinType::E8 => vec![1, 2, 2, 3, 3, 4, 4, 5, 6],
        }
    }

    /// ASCII form used in file formats and the CLI: `A7`, `D8`, `E7`.
    pub fn ascii(&self) -> String {
        match *self {
            DynkinType::A(n) => format!("A{n}"),
            DynkinType::D(n) => format!("D{n}"),
            DynkinType::E6 => "E6".into(),
            DynkinType::E7 => "E7".into(),
            DynkinType::E8 => "E8".into(),
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DynkinType::A(n) => write!(f, "Ã{n}"),
            DynkinType::D(n) => write!(f, "D̃{n}"),
            DynkinType::E6 => write!(f, "Ẽ6"),
            DynkinType::E7 => write!(f, "Ẽ7"),
            DynkinType::E8 => write!(f, "Ẽ8"),
        }
    }
}

impl Serialize for DynkinType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.ascii())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynkinError {
    #[error("dual graph is not an affine Dynkin diagram")]
    NotAffine,
    #[error("structural label {structural} disagrees with multiplicities {multiplicities:?}")]
    Inconsistent {
        structural: DynkinType,
        multiplicities: Vec<u64>,
    },
}

/// Reads the affine type off the restricted intersection matrix.
pub fn structural_type(gram: &[Vec<i64>]) -> Option<DynkinType> {
    let n = gram.len();
    if n < 2 {
        return None;
    }
    let mut degree = vec![0usize; n];
    let mut edges = 0usize;
    let mut multi = false;
    for i in 0..n {
        for j in (i + 1)..n {
            match gram[i][j] {
                0 => {}
                1 => {
                    degree[i] += 1;
                    degree[j] += 1;
                    edges += 1;
                }
                _ => multi = true,
            }
        }
    }
    if multi || edges >= n {
        return Some(DynkinType::A(n - 1));
    }
    if edges != n - 1 {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    match branch.as_slice() {
        [] => None,
        [c] if degree[*c] == 4 && n == 5 => Some(DynkinType::D(4)),
        [c] if degree[*c] == 3 => {
            let mut arms: Vec<usize> = (0..n)
                .filter(|&v| v != *c && gram[*c][v] == 1)
                .map(|start| arm_length(gram, *c, start))
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [2, 2, 2] => Some(DynkinType::E6),
                [1, 3, 3] => Some(DynkinType::E7),
                [1, 2, 5] => Some(DynkinType::E8),
                _ => None,
            }
        }
        [a, b] if degree[*a] == 3 && degree[*b] == 3 => Some(DynkinType::D(n - 1)),
        _ => None,
    }
}

/// Number of vertices on the path leaving `center` through `start`.
fn arm_length(gram: &[Vec<i64>], center: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (center, start, 1);
    loop {
        let next = (0..gram.len()).find(|&v| v != prev && v != cur && gram[cur][v] == 1);
        match next {
            Some(v) => {
                prev = cur;
                cur = v;
                len += 1;
            }
            None => return len,
        }
    }
}

/// Structural label, accepted only if the multiplicities carry the marks of
/// that label.
pub fn label_type(gram: &[Vec<i64>], multiplicities: &[u64]) -> Result<DynkinType, DynkinError> {
    let t = structural_type(gram).ok_or(DynkinError::NotAffine)?;
    let mut sorted = multiplicities.to_vec();
    sorted.sort_unstable();
    if t.vertices() != multiplicities.len() || sorted != t.marks() {
        return Err(DynkinError::Inconsistent {
            structural: t,
            multiplicities: multiplicities.to_vec(),
        });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
        let mut g = vec![vec![0; n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -2;
        }
        for &(a, b) in edges {
            g[a][b] = 1;
            g[b][a] = 1;
        }
        g
    }

    fn path(n: usize) -> Vec<(usize, usize)> {
        (1..n).map(|i| (i - 1, i)).collect()
    }

    #[test]
    fn cycles_and_double_edge() {
        let mut cyc = path(8);
        cyc.push((7, 0));
        assert_eq!(label_type(&graph(8, &cyc), &[1; 8]), Ok(DynkinType::A(7)));
        let double = vec![vec![-2, 2], vec![2, -2]];
        assert_eq!(label_type(&double, &[1, 1]), Ok(DynkinType::A(1)));
    }

    #[test]
    fn trees() {
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(label_type(&star, &[2, 1, 1, 1, 1]), Ok(DynkinType::D(4)));
        // D̃8: forks at vertices 2 and 6 joined by a chain
        let mut d8 = vec![(0, 2), (1, 2)];
        d8.extend((2..6).map(|i| (i, i + 1)));
        d8.extend([(6, 7), (6, 8)]);
        let d8 = graph(9, &d8);
        assert_eq!(
            label_type(&d8, &[1, 1, 2, 2, 2, 2, 2, 1, 1]),
            Ok(DynkinType::D(8))
        );
        assert!(matches!(
            label_type(&d8, &[1, 1, 2, 2, 2, 2, 2, 2, 1]),
            Err(DynkinError::Inconsistent {
                structural: DynkinType::D(8),
                ..
            })
        ));
        let mut d9 = vec![(0, 2), (1, 2)];
        d9.extend((2..7).map(|i| (i, i + 1)));
        d9.extend([(7, 8), (7, 9)]);
        assert_eq!(structural_type(&graph(10, &d9)), Some(DynkinType::D(9)));
    }

    #[test]
    fn exceptional() {
        // Ẽ7: chain of seven with a leg on the middle vertex
        let mut e7 = path(7);
        e7.push((3, 7));
        assert_eq!(
            label_type(&graph(8, &e7), &[1, 2, 3, 4, 3, 2, 1, 2]),
            Ok(DynkinType::E7)
        );
        let e6 = graph(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)]);
        assert_eq!(label_type(&e6, &[1, 2, 3, 2, 1, 2, 1]), Ok(DynkinType::E6));
        // Ẽ8: chain of eight with a leg on the third vertex from one end
        let mut e8 = path(8);
        e8.push((5, 8));
        assert_eq!(
            label_type(&graph(9, &e8), &[1, 2, 3, 4, 5, 6, 4, 2, 3]),
            Ok(DynkinType::E8)
        );
    }

    #[test]
    fn finite_diagrams_rejected() {
        assert_eq!(structural_type(&graph(4, &path(4))), None);
        assert_eq!(structural_type(&graph(1, &[])), None);
        let d5 = graph(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]);
        assert_eq!(structural_type(&d5), None);
    }

    #[test]
    fn marks_sum_to_coxeter_number() {
        for (t, h) in [
            (DynkinType::A(5), 6),
            (DynkinType::D(6), 10),
            (DynkinType::E6, 12),
            (DynkinType::E7, 18),
            (DynkinType::E8, 30),
        ] {
            assert_eq!(t.marks().iter().sum::<u64>(), h);
            assert_eq!(t.marks().len(), t.vertices());
        }
    }
}
