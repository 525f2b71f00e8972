//! Exact linear algebra over the integers and rationals.
//!
//! Everything here is fraction-free (Bareiss) where possible. Each routine
//! first runs on checked `i128` arithmetic and reruns on `BigInt` if any
//! intermediate overflows, so results never depend on a magnitude bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Scalar ring used by the fraction-free kernels.
trait Exact: Clone {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i32;
    fn add(&self, rhs: &Self) -> Option<Self>;
    fn sub(&self, rhs: &Self) -> Option<Self>;
    fn mul(&self, rhs: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn div_exact(&self, rhs: &Self) -> Self;
}

impl Exact for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        self.checked_add(*rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        self.checked_sub(*rhs)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        self.checked_mul(*rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self % rhs, 0);
        self / rhs
    }
}

impl Exact for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i32 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % rhs)));
        self / rhs
    }
}

/// Sylvester inertia of a real symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

fn to_ring<T: Exact>(m: &[Vec<i64>]) -> Vec<Vec<T>> {
    m.iter()
        .map(|row| row.iter().map(|&v| T::from_i64(v)).collect())
        .collect()
}

/// Symmetric congruence elimination. Pivots are chosen on the diagonal; if the
/// remaining diagonal is zero but an off-diagonal entry is not, row/column `j`
/// is added to row/column `i`, which is a unimodular congruence and keeps the
/// Bareiss divisions exact.
fn inertia_generic<T: Exact>(m: &[Vec<i64>]) -> Option<Inertia> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = to_ring(m);
    let mut prev = T::from_i64(1);
    let mut prev_sign = 1;
    let (mut pos, mut neg) = (0usize, 0usize);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let pair = (k..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                for c in k..n {
                    let v = a[i][c].add(&a[j][c])?;
                    a[i][c] = v;
                }
                for r in k..n {
                    let v = a[r][i].add(&a[r][j])?;
                    a[r][i] = v;
                }
                i
            }
        };
        if p != k {
            a.swap(p, k);
            for row in a.iter_mut() {
                row.swap(p, k);
            }
        }
        let piv = a[k][k].clone();
        let s = piv.signum() * prev_sign;
        if s > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = piv.mul(&a[i][j])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = t.div_exact(&prev);
            }
        }
        prev_sign = piv.signum();
        prev = piv;
    }
    Some(Inertia {
        positive: pos,
        negative: neg,
        zero: n - pos - neg,
    })
}

/// Exact inertia of a symmetric integer matrix. The caller guarantees symmetry.
pub fn inertia(m: &[Vec<i64>]) -> Inertia {
    inertia_generic::<i128>(m).unwrap_or_else(|| {
        inertia_generic::<BigInt>(m).expect("bigint arithmetic does not overflow")
    })
}

/// Row-echelon Bareiss elimination; returns (rank, determinant if square).
fn echelon_generic<T: Exact>(m: &[Vec<i64>]) -> Option<(usize, Option<T>)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<T>> = to_ring(m);
    let mut prev = T::from_i64(1);
    let mut rank = 0;
    let mut sign = 1i64;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        let piv = a[rank][c].clone();
        for r in (rank + 1)..rows {
            for j in (c + 1)..cols {
                let t = piv.mul(&a[r][j])?.sub(&a[r][c].mul(&a[rank][j])?)?;
                a[r][j] = t.div_exact(&prev);
            }
            a[r][c] = T::from_i64(0);
        }
        prev = piv;
        rank += 1;
    }
    let det = if rows == cols {
        if rank == rows {
            Some(prev.mul(&T::from_i64(sign))?)
        } else {
            Some(T::from_i64(0))
        }
    } else {
        None
    };
    Some((rank, det))
}

/// Rank over the rationals of an arbitrary integer matrix.
pub fn rank(m: &[Vec<i64>]) -> usize {
    match echelon_generic::<i128>(m) {
        Some((r, _)) => r,
        None => echelon_generic::<BigInt>(m).expect("bigint").0,
    }
}

/// Determinant of a square integer matrix.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    assert!(
        m.iter().all(|row| row.len() == m.len()),
        "matrix not square"
    );
    if m.is_empty() {
        return BigInt::one();
    }
    match echelon_generic::<i128>(m) {
        Some((_, Some(d))) => BigInt::from(d),
        _ => echelon_generic::<BigInt>(m)
            .and_then(|(_, d)| d)
            .expect("bigint"),
    }
}

/// Reduced row echelon form over the rationals, in place. Returns pivot columns.
pub fn rref(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rational_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect()
}

/// Basis of the right kernel `{x : m x = 0}` over the rationals.
pub fn kernel_basis(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = rational_matrix(m);
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -a[r][f].clone();
            }
            x
        })
        .collect()
}

/// Scale a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if Zero::is_zero(&g) {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Inverse of a square integer matrix, if it exists and is integral.
pub fn integer_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = rational_matrix(m);
    for (i, row) in a.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
    }
    let pivots = rref(&mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    a.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        x.to_integer().to_i64()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn inertia_of_hyperbolic_plane_needs_off_diagonal_pivot() {
        let u = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            inertia(&u),
            Inertia {
                positive: 1,
                negative: 1,
                zero: 0
            }
        );
    }

    #[test]
    fn inertia_of_affine_a1_is_semidefinite_corank_one() {
        let a1 = m(&[&[-2, 2], &[2, -2]]);
        assert_eq!(
            inertia(&a1),
            Inertia {
                positive: 0,
                negative: 1,
                zero: 1
            }
        );
    }

    #[test]
    fn zero_matrix() {
        let z = m(&[&[0, 0], &[0, 0]]);
        assert_eq!(inertia(&z).zero, 2);
        assert_eq!(rank(&z), 0);
        assert_eq!(determinant(&z), BigInt::zero());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1_i64 << 40;
        let a = m(&[&[big, 1, 0], &[1, big, 1], &[0, 1, big]]);
        // det = big^3 - 2 big, far beyond i64 but exact via either path.
        let expect = BigInt::from(big).pow(3) - BigInt::from(2) * BigInt::from(big);
        assert_eq!(determinant(&a), expect);
        assert_eq!(inertia(&a).positive, 3);
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        let p = primitive_integer(&k[0]);
        assert_eq!(p, vec![BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn unimodular_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(integer_inverse(&a), Some(m(&[&[1, -1], &[-1, 2]])));
        assert_eq!(integer_inverse(&m(&[&[2, 0], &[0, 1]])), None);
        assert_eq!(integer_inverse(&m(&[&[1, 1], &[1, 1]])), None);
    }

    #[test]
    fn rank_of_rectangular() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
    }
}
