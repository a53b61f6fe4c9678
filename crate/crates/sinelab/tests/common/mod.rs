//! Exact-rational power-series arithmetic shared by the integration tests,
//! used as an oracle independent of the library's own recurrences.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use sinelab::series::Rational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Reciprocal of a power series with a[0] = 1, to `len` terms.
pub fn series_recip(a: &[Rational], len: usize) -> Vec<Rational> {
    assert!(a[0].is_one());
    let mut b = vec![Rational::zero(); len];
    b[0] = Rational::one();
    for j in 1..len {
        let mut acc = Rational::zero();
        for i in 1..=j {
            if i < a.len() {
                acc += &a[i] * &b[j - i];
            }
        }
        b[j] = -acc;
    }
    b
}

pub fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); len];
    for j in 0..len {
        for i in 0..=j {
            if i < a.len() && j - i < b.len() {
                c[j] += &a[i] * &b[j - i];
            }
        }
    }
    c
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// sin(x)/x as a series in t = x².
pub fn sin_over_x_series(len: usize) -> Vec<Rational> {
    (0..len)
        .map(|m| {
            let sign = BigInt::from(if m % 2 == 0 { 1 } else { -1 });
            Rational::new(sign, factorial(2 * m + 1))
        })
        .collect()
}

/// cos(x) as a series in t = x².
pub fn cos_series(len: usize) -> Vec<Rational> {
    (0..len)
        .map(|m| {
            let sign = BigInt::from(if m % 2 == 0 { 1 } else { -1 });
            Rational::new(sign, factorial(2 * m))
        })
        .collect()
}

/// Series length comfortably past the k = 20 table horizon.
pub const TERMS: usize = 25;
