//! Quasipolynomials `a k^2 + b k + c + d (-1)^k` over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuasiError {
    #[error("need at least six samples at distinct k with both parities")]
    TooFewSamples,
    #[error("samples do not follow a k^2 + b k + c + d (-1)^k")]
    NoFit,
    #[error("p(k) = target for infinitely many k")]
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiPolynomial {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl QuasiPolynomial {
    /// Coefficients as `(numerator, denominator)` pairs.
    pub fn new(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Self {
        Self {
            a: q(a.0, a.1),
            b: q(b.0, b.1),
            c: q(c.0, c.1),
            d: q(d.0, d.1),
        }
    }

    pub fn eval(&self, k: i64) -> BigRational {
        let kk = BigRational::from_integer(BigInt::from(k));
        &self.a * &kk * &kk + &self.b * &kk + &self.c + &self.d * q(sign(k), 1)
    }

    /// The unique quasipolynomial through all samples.
    pub fn fit(samples: &[(i64, BigRational)]) -> Result<Self, QuasiError> {
        let mut ks: Vec<i64> = samples.iter().map(|s| s.0).collect();
        ks.sort_unstable();
        ks.dedup();
        let parities = ks.iter().map(|k| k.rem_euclid(2)).collect::<Vec<_>>();
        if ks.len() != samples.len()
            || samples.len() < 6
            || !parities.contains(&0)
            || !parities.contains(&1)
        {
            return Err(QuasiError::TooFewSamples);
        }
        let mut rows: Vec<Vec<BigRational>> = samples
            .iter()
            .map(|(k, v)| {
                let kk = BigRational::from_integer(BigInt::from(*k));
                vec![&kk * &kk, kk, BigRational::one(), q(sign(*k), 1), v.clone()]
            })
            .collect();
        let pivots = exact::rref(&mut rows);
        if pivots != [0, 1, 2, 3] {
            return Err(QuasiError::NoFit);
        }
        let p = Self {
            a: rows[0][4].clone(),
            b: rows[1][4].clone(),
            c: rows[2][4].clone(),
            d: rows[3][4].clone(),
        };
        if samples.iter().any(|(k, v)| p.eval(*k) != *v) {
            return Err(QuasiError::NoFit);
        }
        Ok(p)
    }

    /// Samples `f` on `window` and fits.
    pub fn fit_fn(
        window: std::ops::RangeInclusive<i64>,
        mut f: impl FnMut(i64) -> BigRational,
    ) -> Result<Self, QuasiError> {
        let samples: Vec<(i64, BigRational)> = window.map(|k| (k, f(k))).collect();
        Self::fit(&samples)
    }

    /// Every integer `k` with `p(k) = target`.
    ///
    /// For `a != 0` the search covers `|k| < B`, where `B` is the first
    /// non-negative integer with `|a| B^2 - |b| B - (|c| + |d| + |target|) > 0`;
    /// beyond it `|p(k) - target|` is positive. Linear and constant cases are
    /// solved per parity.
    pub fn integer_solutions_equal(&self, target: &BigRational) -> Result<Vec<i64>, QuasiError> {
        if !self.a.is_zero() {
            let a = self.a.abs();
            let b = self.b.abs();
            let rest = self.c.abs() + self.d.abs() + target.abs();
            let mut bound: i64 = 0;
            loop {
                let x = q(bound, 1);
                if &a * &x * &x - &b * &x - &rest > BigRational::zero() {
                    break;
                }
                bound += 1;
            }
            return Ok((-bound + 1..bound)
                .filter(|&k| self.eval(k) == *target)
                .collect());
        }
        let mut out = Vec::new();
        for parity in [0i64, 1] {
            let s = q(if parity == 0 { 1 } else { -1 }, 1);
            let rhs = target - &self.c - &self.d * &s;
            if self.b.is_zero() {
                if rhs.is_zero() {
                    return Err(QuasiError::Unbounded);
                }
                continue;
            }
            let k = rhs / &self.b;
            if k.is_integer() {
                let k = k.to_integer().to_i64().expect("root fits in i64");
                if k.rem_euclid(2) == parity {
                    out.push(k);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn fmt_coeff(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    c: &BigRational,
    unit: &str,
) -> fmt::Result {
    if c.is_zero() {
        return Ok(());
    }
    let neg = c.is_negative();
    let mag = c.abs();
    if *first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { "-" } else { "+" })?;
    }
    *first = false;
    let show = !mag.is_one() || unit.is_empty();
    if show {
        write!(f, "{mag}")?;
    }
    write!(f, "{unit}")
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        fmt_coeff(f, &mut first, &self.a, "k^2")?;
        fmt_coeff(f, &mut first, &self.b, "k")?;
        fmt_coeff(f, &mut first, &self.c, "")?;
        fmt_coeff(f, &mut first, &self.d, "(-1)^k")?;
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> BigRational {
        q(v, 1)
    }

    #[test]
    fn constant_zero() {
        let p = QuasiPolynomial::fit_fn(-3..=3, |_| int(0)).unwrap();
        assert_eq!(p, QuasiPolynomial::new((0, 1), (0, 1), (0, 1), (0, 1)));
        assert_eq!(p.to_string(), "0");
        assert_eq!(
            p.integer_solutions_equal(&int(0)),
            Err(QuasiError::Unbounded)
        );
        assert_eq!(p.integer_solutions_equal(&int(1)), Ok(vec![]));
    }

    #[test]
    fn solution_sets() {
        let p = QuasiPolynomial::new((4, 1), (-4, 1), (3, 1), (2, 1));
        assert_eq!(p.integer_solutions_equal(&int(1)).unwrap(), vec![1]);
        let p = QuasiPolynomial::new((1, 1), (0, 1), (1, 2), (1, 2));
        assert_eq!(p.integer_solutions_equal(&int(1)).unwrap(), vec![-1, 0, 1]);
        let p = QuasiPolynomial::new((4, 1), (0, 1), (3, 1), (0, 1));
        assert_eq!(
            p.integer_solutions_equal(&int(1)).unwrap(),
            Vec::<i64>::new()
        );
    }

    #[test]
    fn linear_and_constant_cases() {
        // 2k + 1 + (-1)^k: even k gives 2k + 2, odd k gives 2k
        let p = QuasiPolynomial::new((0, 1), (2, 1), (1, 1), (1, 1));
        assert_eq!(p.integer_solutions_equal(&int(6)).unwrap(), vec![2, 3]);
        // (-1)^k only hits 1 on even k
        let p = QuasiPolynomial::new((0, 1), (0, 1), (0, 1), (1, 1));
        assert_eq!(
            p.integer_solutions_equal(&int(1)),
            Err(QuasiError::Unbounded)
        );
        assert_eq!(p.integer_solutions_equal(&int(2)), Ok(vec![]));
    }

    #[test]
    fn negative_leading_coefficient() {
        let p = QuasiPolynomial::new((-1, 1), (0, 1), (4, 1), (0, 1));
        assert_eq!(p.integer_solutions_equal(&int(0)).unwrap(), vec![-2, 2]);
    }

    #[test]
    fn rejects_bad_samples() {
        let few: Vec<(i64, BigRational)> = (0..5).map(|k| (k, int(k))).collect();
        assert_eq!(QuasiPolynomial::fit(&few), Err(QuasiError::TooFewSamples));
        let even: Vec<(i64, BigRational)> = (0..8).map(|k| (2 * k, int(k))).collect();
        assert_eq!(QuasiPolynomial::fit(&even), Err(QuasiError::TooFewSamples));
        assert_eq!(
            QuasiPolynomial::fit_fn(-4..=4, |k| int(k * k * k)),
            Err(QuasiError::NoFit)
        );
    }

    #[test]
    fn display() {
        let p = QuasiPolynomial::new((4, 1), (-4, 1), (3, 1), (2, 1));
        assert_eq!(p.to_string(), "4k^2 - 4k + 3 + 2(-1)^k");
        let p = QuasiPolynomial::new((1, 1), (0, 1), (1, 2), (-1, 2));
        assert_eq!(p.to_string(), "k^2 + 1/2 - 1/2(-1)^k");
    }

    proptest! {
        #[test]
        fn fit_recovers_coefficients(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9,
                                     den in 1i64..4, target in -50i64..50) {
            let p = QuasiPolynomial::new((a, den), (b, den), (c, den), (d, den));
            let fitted = QuasiPolynomial::fit_fn(-6..=6, |k| p.eval(k)).unwrap();
            prop_assert_eq!(&fitted, &p);
            let t = int(target);
            match p.integer_solutions_equal(&t) {
                Ok(sol) => {
                    for k in -60..=60 {
                        prop_assert_eq!(sol.contains(&k), p.eval(k) == t);
                    }
                }
                Err(QuasiError::Unbounded) => {
                    prop_assert!(a == 0 && b == 0);
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
