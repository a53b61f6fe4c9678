//! Bernoulli numbers in exact rational arithmetic, the expansion
//! coefficients of csc/cot/tan that drive the kernel-difference series, and
//! the log-space Bernoulli growth ratio.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Which expansion a [`CoeffTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    /// csc(x) - 1/x = Σ_{k≥0} c_{2k+1} x^{2k+1}
    Csc,
    /// cot(u/(2N))/(2N) - 1/u = Σ_{k≥0} b_{2k+1} u^{2k+1} / N^{2k+2}
    CotCorrection,
    /// tan(z) = Σ_{k≥0} a_{2k+1} z^{2k+1}
    Tan,
    /// B_0, B_2, B_4, ...
    Bernoulli,
}

impl CoeffKind {
    /// Subscript of the k-th entry: 2k+1 for the odd series, 2k for Bernoulli.
    pub fn index(self, k: usize) -> usize {
        match self {
            CoeffKind::Bernoulli => 2 * k,
            _ => 2 * k + 1,
        }
    }
}

/// One table entry: position `k`, printed subscript, exact value, float view.
#[derive(Debug, Clone)]
pub struct CoeffEntry {
    pub k: usize,
    pub index: usize,
    pub exact: Rational,
    pub float: f64,
}

/// Coefficient table indexed consecutively from k = 0.
///
/// Entries up to k = 40 are materialized at construction; later requests
/// extend the table in place.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    kind: CoeffKind,
    entries: Vec<CoeffEntry>,
}

const PRECOMPUTE_K: usize = 40;

impl CoeffTable {
    pub fn new(kind: CoeffKind, max_k: usize) -> Self {
        let mut table = CoeffTable {
            kind,
            entries: Vec::new(),
        };
        table.extend_to(max_k.max(PRECOMPUTE_K));
        table
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn entries(&self) -> &[CoeffEntry] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&CoeffEntry> {
        self.entries.get(k)
    }

    /// Entry for position `k`, extending the table if necessary.
    pub fn entry(&mut self, k: usize) -> &CoeffEntry {
        if k >= self.entries.len() {
            self.extend_to(k);
        }
        &self.entries[k]
    }

    fn extend_to(&mut self, max_k: usize) {
        for k in self.entries.len()..=max_k {
            let exact = match self.kind {
                CoeffKind::Csc => csc_coeff(k),
                CoeffKind::CotCorrection => cot_coeff(k),
                CoeffKind::Tan => tan_coeff(k),
                CoeffKind::Bernoulli => bernoulli(2 * k),
            };
            let float = rational_to_f64(&exact);
            self.entries.push(CoeffEntry {
                k,
                index: self.kind.index(k),
                exact,
                float,
            });
        }
    }
}

static BERNOULLI_CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();

/// B_n under the convention B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rational {
    let lock = BERNOULLI_CACHE.get_or_init(|| RwLock::new(vec![Rational::one()]));
    {
        let table = lock.read().unwrap();
        if n < table.len() {
            return table[n].clone();
        }
    }
    let mut table = lock.write().unwrap();
    if n >= table.len() {
        let target = n.max(2 * table.len()).max(16);
        extend_bernoulli(&mut table, target);
    }
    table[n].clone()
}

/// Defining recurrence: Σ_{k=0}^{m} C(m+1, k) B_k = 0 for m ≥ 1.
fn extend_bernoulli(table: &mut Vec<Rational>, target: usize) {
    for m in table.len()..=target {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom is now C(m+1, m) = m+1
        table.push(-acc / Rational::from_integer(binom));
    }
}

fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= BigInt::from(i);
    }
    f
}

/// c_{2k+1} in csc(x) - 1/x = Σ c_{2k+1} x^{2k+1}, valid on 0 < |x| < π.
pub fn csc_coeff(k: usize) -> Rational {
    let lead = BigInt::from(if k % 2 == 0 { 2 } else { -2 });
    let pow = (BigInt::one() << (2 * k + 1)) - BigInt::one();
    Rational::from_integer(lead * pow) * bernoulli(2 * k + 2)
        / Rational::from_integer(factorial(2 * k + 2))
}

/// b_{2k+1} in cot(u/(2N))/(2N) - 1/u = Σ b_{2k+1} u^{2k+1} / N^{2k+2}.
pub fn cot_coeff(k: usize) -> Rational {
    let lead = BigInt::from(if k % 2 == 0 { -1 } else { 1 });
    Rational::from_integer(lead) * bernoulli(2 * k + 2)
        / Rational::from_integer(factorial(2 * k + 2))
}

/// a_{2k+1} in tan(z) = Σ a_{2k+1} z^{2k+1}, valid on |z| < π/2.
pub fn tan_coeff(k: usize) -> Rational {
    let four = BigInt::from(4);
    let neg_four_pow = BigInt::from(-4).pow(k as u32 + 1);
    let tail = BigInt::one() - four.pow(k as u32 + 1);
    Rational::from_integer(neg_four_pow * tail) * bernoulli(2 * k + 2)
        / Rational::from_integer(factorial(2 * k + 2))
}

/// ζ(2n) = (-1)^{n+1} (2π)^{2n} B_{2n} / (2 (2n)!), for n ≥ 1.
///
/// Two regimes: below 2n = 36 the Bernoulli identity is evaluated with the
/// rational part exact and only the final π power in floating point; from
/// 2n = 36 on, the defining p-series converges in a handful of terms and is
/// the more accurate route (a log-space identity would already carry ~1e-13
/// of error from ln((2n)!) alone).
pub fn zeta_even(n: usize) -> f64 {
    if 2 * n >= 36 {
        let p = -(2 * n as i32);
        let mut tail = 0.0;
        let mut j = 2u64;
        loop {
            let term = (j as f64).powi(p);
            if term < 1e-20 {
                break;
            }
            tail += term;
            j += 1;
        }
        1.0 + tail
    } else {
        let sign = BigInt::from(if n % 2 == 0 { -1 } else { 1 });
        let rational_part = Rational::from_integer(sign << (2 * n)) * bernoulli(2 * n)
            / Rational::from_integer(BigInt::from(2) * factorial(2 * n));
        rational_to_f64(&rational_part) * std::f64::consts::PI.powi(2 * n as i32)
    }
}

/// |B_{2n}| (πe)^{2n} / n^{2n + 1/2}, evaluated in log space; the sequence
/// converges to 4√π.
pub fn bernoulli_growth_ratio(n: usize) -> f64 {
    assert!(n >= 1, "growth ratio requires n >= 1");
    let b = bernoulli(2 * n);
    let ln_b = ln_big(&b.numer().abs()) - ln_big(b.denom());
    let nf = n as f64;
    let ln_ratio =
        ln_b + 2.0 * nf * (1.0 + std::f64::consts::PI.ln()) - (2.0 * nf + 0.5) * nf.ln();
    ln_ratio.exp()
}

/// Natural log of a positive big integer, exact to ~1 ulp regardless of size.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        x.to_f64().unwrap().ln()
    } else {
        let mantissa = (x >> (bits - 53)).to_f64().unwrap();
        mantissa.ln() + (bits - 53) as f64 * std::f64::consts::LN_2
    }
}

/// Round a rational to the nearest f64 without overflowing on huge
/// numerators or denominators: divide with ~80 guard bits, convert the
/// small quotient, then undo the shift.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let shift = 80 + den.bits() as i64 - num.bits() as i64;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    sign * quotient.to_f64().unwrap() * 2f64.powi(-shift as i32)
}
