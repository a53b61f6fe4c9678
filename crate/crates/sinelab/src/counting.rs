//! Integer-valued counting laws: exact Poisson-binomial construction from
//! restricted-operator spectra, Wasserstein-1 and total-variation distances,
//! and the distance chain d_TV ≤ W1 ≤ trace norm.

use std::sync::Arc;

use crate::kernels::{EnsembleId, KernelSpec, Scaling};
use crate::opcalc::{difference_from_sine_on, discretize_fallible, gauss_legendre};
use crate::{Error, Result};

/// Eigenvalue band tolerance used when none is supplied. Nyström spectra of
/// these analytic kernels sit inside [0, 1] up to discretization error;
/// anything worse points at a grid problem and should fail loudly.
pub const DEFAULT_CLAMP_TOL: f64 = 1e-8;

/// A probability law on {0, 1, ..., len-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerLaw {
    pmf: Vec<f64>,
}

impl IntegerLaw {
    /// Validate and normalize a raw PMF: entries in [-1e-15, ...] are
    /// clamped to zero and the total mass must be 1 within 1e-10.
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        let mut pmf = pmf;
        for p in &mut pmf {
            if *p < 0.0 {
                if *p < -1e-15 {
                    return Err(Error::Invariant(format!("negative pmf entry {p}")));
                }
                *p = 0.0;
            }
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Invariant(format!("pmf sums to {total}, expected 1")));
        }
        if pmf.is_empty() {
            return Err(Error::Invariant("empty pmf".into()));
        }
        Ok(IntegerLaw { pmf })
    }

    /// Empirical law from tally counts.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Invariant("no observations".into()));
        }
        IntegerLaw::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }

    pub fn point_mass(k: usize) -> Self {
        let mut pmf = vec![0.0; k + 1];
        pmf[k] = 1.0;
        IntegerLaw { pmf }
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn support_len(&self) -> usize {
        self.pmf.len()
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.pmf
            .iter()
            .enumerate()
            .map(|(k, p)| (k as f64 - mean) * (k as f64 - mean) * p)
            .sum()
    }

}

/// What came out of a restricted-operator spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumSummary {
    /// Eigenvalues after clamping into [0, 1].
    pub eigenvalues: Vec<f64>,
    /// Sum of the clamped eigenvalues, i.e. the law's mean.
    pub trace: f64,
    /// How many raw eigenvalues fell outside [0, 1] (within tolerance).
    pub clamped_count: usize,
}

fn clamp_spectrum(eigenvalues: &[f64], clamp_tol: f64) -> Result<(Vec<f64>, usize)> {
    let mut clamped = Vec::with_capacity(eigenvalues.len());
    let mut clamped_count = 0;
    for &e in eigenvalues {
        if !(-clamp_tol..=1.0 + clamp_tol).contains(&e) {
            return Err(Error::EigenvalueOutOfRange {
                value: e,
                tol: clamp_tol,
            });
        }
        let c = e.clamp(0.0, 1.0);
        if c != e {
            clamped_count += 1;
        }
        clamped.push(c);
    }
    Ok((clamped, clamped_count))
}

/// PMF of a sum of independent Bernoulli variables with the given success
/// probabilities, by iterated convolution.
pub fn poisson_binomial(probabilities: &[f64]) -> Vec<f64> {
    let mut pmf = vec![1.0];
    for &p in probabilities {
        let q = 1.0 - p;
        let mut next = vec![0.0; pmf.len() + 1];
        for (i, &mass) in pmf.iter().enumerate() {
            next[i] += mass * q;
            next[i + 1] += mass * p;
        }
        pmf = next;
    }
    pmf
}

/// Poisson-binomial counting law of a determinantal process restricted to a
/// set whose operator has the given eigenvalues.
pub fn spectrum_to_law(eigenvalues: &[f64], clamp_tol: f64) -> Result<IntegerLaw> {
    let (clamped, _) = clamp_spectrum(eigenvalues, clamp_tol)?;
    IntegerLaw::new(poisson_binomial(&clamped))
}

/// W1 distance between integer laws via the CDF-difference sum.
pub fn w1_integer(a: &IntegerLaw, b: &IntegerLaw) -> f64 {
    let len = a.support_len().max(b.support_len());
    let mut fa = 0.0;
    let mut fb = 0.0;
    let mut acc = 0.0;
    for k in 0..len {
        fa += a.pmf.get(k).copied().unwrap_or(0.0);
        fb += b.pmf.get(k).copied().unwrap_or(0.0);
        acc += (fa - fb).abs();
    }
    acc
}

/// Total-variation distance between integer laws.
pub fn tv_integer(a: &IntegerLaw, b: &IntegerLaw) -> f64 {
    let len = a.support_len().max(b.support_len());
    0.5 * (0..len)
        .map(|k| {
            (a.pmf.get(k).copied().unwrap_or(0.0) - b.pmf.get(k).copied().unwrap_or(0.0)).abs()
        })
        .sum::<f64>()
}

/// Counting law of the process on [lo, hi], computed by discretizing the
/// kernel on a grid recentered at the interval midpoint.
///
/// For ensemble kernels the spec must be bulk-scaled and the interval must
/// sit strictly inside (-N/2, N/2). The law's mean is cross-checked against
/// the diagonal quadrature ∫ K(x,x) dx to 1e-8 relative.
pub fn dpp_count_law(
    spec: &KernelSpec,
    interval: (f64, f64),
    grid_size: usize,
) -> Result<(IntegerLaw, SpectrumSummary)> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Config(format!("bad interval [{lo}, {hi}]")));
    }
    if spec.ensemble() != EnsembleId::Sine {
        if spec.scaling() != Scaling::Bulk {
            return Err(Error::Domain(
                "counting laws are defined for bulk-scaled kernels".into(),
            ));
        }
        let half = spec.n() as f64 / 2.0;
        if lo.abs().max(hi.abs()) >= half {
            return Err(Error::BulkDomain {
                value: if lo.abs() > hi.abs() { lo } else { hi },
                half_width: half,
            });
        }
    }
    let center = 0.5 * (lo + hi);
    let half_width = 0.5 * (hi - lo);
    let grid = Arc::new(gauss_legendre(grid_size, half_width)?);
    let op = discretize_fallible(|u, v| spec.eval(u + center, v + center), &grid)?;
    let raw_eigs = op.symmetric_eigenvalues()?;
    let (clamped, clamped_count) = clamp_spectrum(&raw_eigs, DEFAULT_CLAMP_TOL)?;
    let law = IntegerLaw::new(poisson_binomial(&clamped))?;
    let trace: f64 = clamped.iter().sum();
    let diag = {
        let mut acc = 0.0;
        for (&x, &w) in grid.nodes().iter().zip(grid.weights()) {
            acc += w * spec.eval(x + center, x + center)?;
        }
        acc
    };
    if (law.mean() - diag).abs() > 1e-8 * diag.abs().max(1.0) {
        return Err(Error::Invariant(format!(
            "law mean {} disagrees with diagonal integral {diag}",
            law.mean()
        )));
    }
    Ok((
        law,
        SpectrumSummary {
            eigenvalues: clamped,
            trace,
            clamped_count,
        },
    ))
}

/// The three quantities of the distance chain on one interval.
#[derive(Debug, Clone, Copy)]
pub struct ChainTriple {
    pub dtv: f64,
    pub w1: f64,
    pub trace_norm: f64,
}

impl ChainTriple {
    pub fn holds(&self, slack: f64) -> bool {
        self.dtv <= self.w1 + slack && self.w1 <= self.trace_norm + slack
    }
}

/// Compute d_TV and W1 between the ensemble and sine counting laws on an
/// arbitrary interval, plus the trace norm of the kernel difference
/// restricted to it. The contract is dtv ≤ w1 ≤ trace_norm up to
/// numerical slack, on any interval.
pub fn chain_on_interval(
    spec: &KernelSpec,
    interval: (f64, f64),
    grid_size: usize,
) -> Result<ChainTriple> {
    let sine = KernelSpec::new(EnsembleId::Sine, 0, Scaling::Bulk)?;
    let (law, _) = dpp_count_law(spec, interval, grid_size)?;
    let (sine_law, _) = dpp_count_law(&sine, interval, grid_size)?;
    let trace_norm = difference_from_sine_on(spec, interval, grid_size)?.trace_norm()?;
    Ok(ChainTriple {
        dtv: tv_integer(&law, &sine_law),
        w1: w1_integer(&law, &sine_law),
        trace_norm,
    })
}

/// The distance chain on the symmetric interval [-s, s].
pub fn lemma31_chain_check(spec: &KernelSpec, s: f64, grid_size: usize) -> Result<ChainTriple> {
    chain_on_interval(spec, (-s, s), grid_size)
}
