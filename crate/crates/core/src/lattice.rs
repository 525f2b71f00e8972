//! The E10 lattice: Gram form, classes, divisibility and isometries.
//!
//! Basis convention: `e1` is attached to `e4`, and `e2 - e3 - ... - e10` is a
//! chain. Every bundled coordinate list is written in this basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact;

/// Rank of E10.
pub const RANK: usize = 10;

/// Edges of the E10 diagram, zero-based.
const EDGES: [(usize, usize); 9] = [
    (0, 3),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (6, 7),
    (7, 8),
    (8, 9),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("class {0} is not divisible by 2")]
    NotDivisible(Box<LatticeVector>),
    #[error("matrix is not an isometry: (M G M^T)[{row}][{col}] = {found}, expected {expected}")]
    NotIsometry {
        row: usize,
        col: usize,
        found: i64,
        expected: i64,
    },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("matrix is not square")]
    NotSquare,
}

/// The fixed Gram matrix of E10.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GramE10;

impl GramE10 {
    pub fn entry(i: usize, j: usize) -> i64 {
        if i == j {
            -2
        } else if EDGES.contains(&(i.min(j), i.max(j))) {
            1
        } else {
            0
        }
    }

    pub fn matrix() -> [[i64; RANK]; RANK] {
        let mut g = [[0; RANK]; RANK];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = Self::entry(i, j);
            }
        }
        g
    }

    pub fn rows() -> Vec<Vec<i64>> {
        Self::matrix().iter().map(|r| r.to_vec()).collect()
    }

    pub fn determinant() -> i64 {
        use num_traits::ToPrimitive;
        exact::determinant(&Self::rows())
            .to_i64()
            .expect("det fits")
    }

    pub fn inertia() -> exact::Inertia {
        exact::inertia(&Self::rows())
    }

    pub fn is_even() -> bool {
        (0..RANK).all(|i| Self::entry(i, i) % 2 == 0)
    }
}

/// A class in Num(Y), written in the E10 basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub [i64; RANK]);

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector([0; RANK]);

    pub fn new(coords: [i64; RANK]) -> Self {
        Self(coords)
    }

    /// The basis vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        let mut c = [0; RANK];
        c[i] = 1;
        Self(c)
    }

    pub fn coords(&self) -> &[i64; RANK] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> i64 {
        dot(self, other)
    }

    pub fn square(&self) -> i64 {
        dot(self, self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_two_divisible(&self) -> bool {
        is_two_divisible(self)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<[i64; RANK]> for LatticeVector {
    fn from(c: [i64; RANK]) -> Self {
        Self(c)
    }
}

impl Add for LatticeVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for LatticeVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector(rhs.0.map(|c| self * c))
    }
}

impl std::iter::Sum for LatticeVector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// Intersection product `u G v^T`.
pub fn dot(u: &LatticeVector, v: &LatticeVector) -> i64 {
    let (u, v) = (&u.0, &v.0);
    let mut acc: i128 = 0;
    for i in 0..RANK {
        acc -= 2 * u[i] as i128 * v[i] as i128;
    }
    for &(i, j) in &EDGES {
        acc += u[i] as i128 * v[j] as i128 + u[j] as i128 * v[i] as i128;
    }
    i64::try_from(acc).expect("intersection product overflows i64")
}

pub fn is_two_divisible(v: &LatticeVector) -> bool {
    v.0.iter().all(|c| c % 2 == 0)
}

pub fn halve(v: &LatticeVector) -> Result<LatticeVector, LatticeError> {
    if !is_two_divisible(v) {
        return Err(LatticeError::NotDivisible(Box::new(*v)));
    }
    Ok(LatticeVector(v.0.map(|c| c / 2)))
}

/// `numerator / denominator` with `denominator` in {1, 2}, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalClass {
    numerator: LatticeVector,
    denominator: u8,
}

impl RationalClass {
    /// Panics if `denominator` is not 1 or 2.
    pub fn new(numerator: LatticeVector, denominator: u8) -> Self {
        assert!(
            denominator == 1 || denominator == 2,
            "denominator must be 1 or 2"
        );
        if denominator == 2 && is_two_divisible(&numerator) {
            Self {
                numerator: LatticeVector(numerator.0.map(|c| c / 2)),
                denominator: 1,
            }
        } else {
            Self {
                numerator,
                denominator,
            }
        }
    }

    pub fn integral(v: LatticeVector) -> Self {
        Self::new(v, 1)
    }

    pub fn numerator(&self) -> LatticeVector {
        self.numerator
    }

    pub fn denominator(&self) -> u8 {
        self.denominator
    }

    pub fn is_integral(&self) -> bool {
        self.denominator == 1
    }

    pub fn to_integral(&self) -> Option<LatticeVector> {
        self.is_integral().then_some(self.numerator)
    }
}

/// A validated isometry of E10 acting on row vectors from the right.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IsometryMatrix([[i64; RANK]; RANK]);

impl fmt::Debug for IsometryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl IsometryMatrix {
    pub fn identity() -> Self {
        let mut m = [[0; RANK]; RANK];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Self(m)
    }

    pub fn rows(&self) -> &[[i64; RANK]; RANK] {
        &self.0
    }

    /// `v . M`
    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        let mut out = [0i64; RANK];
        for (i, row) in self.0.iter().enumerate() {
            let vi = v.0[i];
            if vi == 0 {
                continue;
            }
            for (o, &mij) in out.iter_mut().zip(row.iter()) {
                *o = o
                    .checked_add(vi.checked_mul(mij).expect("overflow in v.M"))
                    .expect("overflow in v.M");
            }
        }
        LatticeVector(out)
    }

    /// Matrix product `self * rhs`; acting on rows this applies `self` first.
    pub fn then(&self, rhs: &Self) -> Self {
        let mut out = [[0i64; RANK]; RANK];
        for (i, row) in out.iter_mut().enumerate() {
            *row = rhs.apply(&LatticeVector(self.0[i])).0;
        }
        Self(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::identity();
        let mut base = *self;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// The inverse, `G M^T G^{-1}`, which is integral because E10 is unimodular.
    pub fn inverse(&self) -> Self {
        let rows: Vec<Vec<i64>> = self.0.iter().map(|r| r.to_vec()).collect();
        let inv = exact::integer_inverse(&rows).expect("isometry of a unimodular lattice");
        Self(std::array::from_fn(|i| std::array::from_fn(|j| inv[i][j])))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// Accepts `m` iff `m G m^T = G`.
pub fn validate_isometry(m: [[i64; RANK]; RANK]) -> Result<IsometryMatrix, LatticeError> {
    let rows: Vec<LatticeVector> = m.iter().map(|r| LatticeVector(*r)).collect();
    for i in 0..RANK {
        for j in 0..RANK {
            let found = dot(&rows[i], &rows[j]);
            let expected = GramE10::entry(i, j);
            if found != expected {
                return Err(LatticeError::NotIsometry {
                    row: i,
                    col: j,
                    found,
                    expected,
                });
            }
        }
    }
    Ok(IsometryMatrix(m))
}

/// Intersection matrix of a list of classes.
pub fn gram_of(vectors: &[LatticeVector]) -> Vec<Vec<i64>> {
    vectors
        .iter()
        .map(|u| vectors.iter().map(|v| dot(u, v)).collect())
        .collect()
}

/// Exact rank over Q of a symmetric integer matrix.
pub fn rank_of_gram(m: &[Vec<i64>]) -> Result<usize, LatticeError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LatticeError::NotSquare);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m[i][j] != m[j][i] {
                return Err(LatticeError::NonSymmetric(i, j));
            }
        }
    }
    Ok(exact::inertia(m).rank())
}
