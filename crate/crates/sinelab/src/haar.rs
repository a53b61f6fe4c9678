//! Haar-distributed sampling on the classical compact groups, eigenangle
//! extraction with trivial-eigenvalue removal, bulk rescaling, and empirical
//! counting laws that cross-validate the exact determinantal ones.

use std::f64::consts::{PI, TAU};

use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::counting::IntegerLaw;
use crate::kernels::EnsembleId;
use crate::{Error, Result};

const UNITARITY_TOL: f64 = 1e-10;
const REALITY_TOL: f64 = 1e-12;
const DET_TOL: f64 = 1e-8;
const SYMPLECTIC_TOL: f64 = 1e-8;
const MODULUS_TOL: f64 = 1e-8;
const PAIRING_TOL: f64 = 1e-8;
const TRIVIAL_TOL: f64 = 1e-6;

/// A validated element of one of the matrix groups.
///
/// Construction checks unitarity for every ensemble, realness and the
/// determinant sign for the orthogonal family, and the UᵀJU = J identity
/// for the symplectic group.
#[derive(Debug, Clone)]
pub struct GroupElement {
    ensemble: EnsembleId,
    n: u32,
    matrix: Mat<c64>,
}

impl GroupElement {
    pub fn new(ensemble: EnsembleId, matrix: Mat<c64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || dim == 0 {
            return Err(Error::GroupDefect(format!(
                "expected a square matrix, got {dim}x{}",
                matrix.ncols()
            )));
        }
        let n = ensemble
            .angle_count_for_matrix_dim(dim as u32)
            .ok_or_else(|| {
                Error::GroupDefect(format!("dimension {dim} does not fit ensemble {ensemble}"))
            })?;

        let gram = matrix.adjoint() * &matrix;
        let mut unitarity = 0.0f64;
        for j in 0..dim {
            for i in 0..dim {
                let expected = if i == j { 1.0 } else { 0.0 };
                unitarity = unitarity.max((gram[(i, j)] - c64::new(expected, 0.0)).norm());
            }
        }
        if unitarity > UNITARITY_TOL {
            return Err(Error::GroupDefect(format!(
                "unitarity residual {unitarity:.3e} exceeds {UNITARITY_TOL:.0e}"
            )));
        }

        match ensemble {
            EnsembleId::U => {}
            EnsembleId::Sp => {
                let residual = symplectic_residual(&matrix);
                if residual > SYMPLECTIC_TOL {
                    return Err(Error::GroupDefect(format!(
                        "symplectic residual {residual:.3e} exceeds {SYMPLECTIC_TOL:.0e}"
                    )));
                }
            }
            EnsembleId::Sine => {
                return Err(Error::GroupDefect("the sine process has no matrices".into()))
            }
            _ => {
                let mut imag = 0.0f64;
                for j in 0..dim {
                    for i in 0..dim {
                        imag = imag.max(matrix[(i, j)].im.abs());
                    }
                }
                if imag > REALITY_TOL {
                    return Err(Error::GroupDefect(format!(
                        "orthogonal matrix has imaginary parts up to {imag:.3e}"
                    )));
                }
                let expected = match ensemble {
                    EnsembleId::SoEven | EnsembleId::SoOdd => 1.0,
                    _ => -1.0,
                };
                let det = real_determinant(&matrix);
                if (det - expected).abs() > DET_TOL {
                    return Err(Error::GroupDefect(format!(
                        "determinant {det} does not match coset sign {expected}"
                    )));
                }
            }
        }

        Ok(GroupElement {
            ensemble,
            n,
            matrix,
        })
    }

    pub fn ensemble(&self) -> EnsembleId {
        self.ensemble
    }

    /// Number of nontrivial eigenangles this element carries.
    pub fn angle_count(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<c64> {
        &self.matrix
    }
}

/// max |UᵀJU - J| with J = [[0, I], [-I, 0]].
fn symplectic_residual(m: &Mat<c64>) -> f64 {
    let dim = m.nrows();
    let half = dim / 2;
    let j = Mat::from_fn(dim, dim, |r, c| {
        if r < half && c == r + half {
            c64::new(1.0, 0.0)
        } else if r >= half && c + half == r {
            c64::new(-1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let t = m.transpose() * &j * m;
    let mut worst = 0.0f64;
    for c in 0..dim {
        for r in 0..dim {
            worst = worst.max((t[(r, c)] - j[(r, c)]).norm());
        }
    }
    worst
}

/// Determinant of a real-valued matrix via partial-pivot elimination.
/// Exact enough here: it is only applied to near-orthogonal matrices.
fn real_determinant(m: &Mat<c64>) -> f64 {
    let n = m.nrows();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            a.push(m[(r, c)].re);
        }
    }
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap();
        if a[pivot * n + k] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            for c in 0..n {
                a.swap(k * n + c, pivot * n + c);
            }
            det = -det;
        }
        det *= a[k * n + k];
        for i in (k + 1)..n {
            let f = a[i * n + k] / a[k * n + k];
            for c in k..n {
                a[i * n + c] -= f * a[k * n + c];
            }
        }
    }
    det
}

fn complex_ginibre(rng: &mut ChaCha8Rng, dim: usize) -> Mat<c64> {
    Mat::from_fn(dim, dim, |_, _| {
        c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn real_ginibre_as_complex(rng: &mut ChaCha8Rng, dim: usize) -> Mat<c64> {
    Mat::from_fn(dim, dim, |_, _| c64::new(rng.sample(StandardNormal), 0.0))
}

fn dot(m: &Mat<c64>, col_a: usize, col_b: usize) -> c64 {
    let mut acc = c64::new(0.0, 0.0);
    for r in 0..m.nrows() {
        acc += m[(r, col_a)].conj() * m[(r, col_b)];
    }
    acc
}

/// Modified Gram-Schmidt with a second reorthogonalization pass. Keeping the
/// triangular factor's diagonal real and positive is what makes the
/// orthonormalized Gaussian matrix exactly Haar-distributed.
fn mgs_orthonormalize(mut z: Mat<c64>) -> Option<Mat<c64>> {
    let rows = z.nrows();
    for j in 0..z.ncols() {
        for _ in 0..2 {
            for i in 0..j {
                let d = dot(&z, i, j);
                for r in 0..rows {
                    let zi = z[(r, i)];
                    z[(r, j)] -= d * zi;
                }
            }
        }
        let norm = (0..rows).map(|r| z[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-140 {
            return None;
        }
        for r in 0..rows {
            z[(r, j)] /= c64::new(norm, 0.0);
        }
    }
    Some(z)
}

fn sample_unitary_with(rng: &mut ChaCha8Rng, dim: usize) -> Result<GroupElement> {
    for _ in 0..10 {
        if let Some(q) = mgs_orthonormalize(complex_ginibre(rng, dim)) {
            return GroupElement::new(EnsembleId::U, q);
        }
    }
    Err(Error::GroupDefect(
        "unitary orthonormalization failed repeatedly".into(),
    ))
}

/// Haar-distributed element of U(dim).
pub fn sample_unitary(dim: u32, seed: u64) -> Result<GroupElement> {
    if dim == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    sample_unitary_with(&mut ChaCha8Rng::seed_from_u64(seed), dim as usize)
}

fn coset_ensemble(dim: u32, det_sign: i32) -> Result<EnsembleId> {
    match (dim % 2, det_sign) {
        (0, 1) => Ok(EnsembleId::SoEven),
        (1, 1) => Ok(EnsembleId::SoOdd),
        (1, -1) => Ok(EnsembleId::SoMinusOdd),
        (0, -1) => Ok(EnsembleId::SoMinusEven),
        _ => Err(Error::Config(format!("det_sign must be ±1, got {det_sign}"))),
    }
}

fn sample_orthogonal_with(rng: &mut ChaCha8Rng, dim: usize, det_sign: i32) -> Result<GroupElement> {
    let ensemble = coset_ensemble(dim as u32, det_sign)?;
    for _ in 0..256 {
        let z = real_ginibre_as_complex(rng, dim);
        // QR with positive diagonal keeps det(Q) = sign(det(Z)); reject the
        // wrong coset before paying for the orthonormalization
        if real_determinant(&z).signum() as i32 != det_sign {
            continue;
        }
        if let Some(q) = mgs_orthonormalize(z) {
            return GroupElement::new(ensemble, q);
        }
    }
    Err(Error::GroupDefect(
        "orthogonal rejection sampling failed repeatedly".into(),
    ))
}

/// Haar-distributed element of O(dim) conditioned on the determinant sign.
pub fn sample_orthogonal_coset(dim: u32, det_sign: i32, seed: u64) -> Result<GroupElement> {
    if dim == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    sample_orthogonal_with(&mut ChaCha8Rng::seed_from_u64(seed), dim as usize, det_sign)
}

/// The quaternionic conjugate-partner map (a; b) ↦ (-b̄; ā).
fn psi(v: &[c64]) -> Vec<c64> {
    let half = v.len() / 2;
    let mut out = Vec::with_capacity(v.len());
    for i in 0..half {
        out.push(-v[half + i].conj());
    }
    for i in 0..half {
        out.push(v[i].conj());
    }
    out
}

fn sample_symplectic_with(rng: &mut ChaCha8Rng, n: usize) -> Result<GroupElement> {
    let dim = 2 * n;
    'attempt: for _ in 0..10 {
        let a = complex_ginibre(rng, n);
        let b = complex_ginibre(rng, n);
        // quaternionic columns: (A[:,j]; -conj(B[:,j])); their psi-partners
        // fill the second half of the final matrix
        let mut q: Vec<Vec<c64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v: Vec<c64> = (0..n)
                .map(|r| a[(r, j)])
                .chain((0..n).map(|r| -b[(r, j)].conj()))
                .collect();
            for _ in 0..2 {
                for prev in &q {
                    let partner = psi(prev);
                    for basis in [prev, &partner] {
                        let mut d = c64::new(0.0, 0.0);
                        for r in 0..dim {
                            d += basis[r].conj() * v[r];
                        }
                        for r in 0..dim {
                            v[r] -= d * basis[r];
                        }
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-140 {
                continue 'attempt;
            }
            for z in &mut v {
                *z /= c64::new(norm, 0.0);
            }
            q.push(v);
        }
        let matrix = Mat::from_fn(dim, dim, |r, c| {
            if c < n {
                q[c][r]
            } else {
                psi(&q[c - n])[r]
            }
        });
        return GroupElement::new(EnsembleId::Sp, matrix);
    }
    Err(Error::GroupDefect(
        "symplectic orthonormalization failed after 10 attempts".into(),
    ))
}

/// Haar-distributed element of Sp(2n), the compact symplectic group.
pub fn sample_symplectic(n: u32, seed: u64) -> Result<GroupElement> {
    if n == 0 {
        return Err(Error::Config("size parameter must be positive".into()));
    }
    sample_symplectic_with(&mut ChaCha8Rng::seed_from_u64(seed), n as usize)
}

fn sample_with(ensemble: EnsembleId, n: u32, rng: &mut ChaCha8Rng) -> Result<GroupElement> {
    let dim = ensemble
        .matrix_dim(n)
        .ok_or_else(|| Error::Config("cannot sample the sine process".into()))?
        as usize;
    match ensemble {
        EnsembleId::U => sample_unitary_with(rng, dim),
        EnsembleId::Sp => sample_symplectic_with(rng, dim / 2),
        EnsembleId::SoEven | EnsembleId::SoOdd => sample_orthogonal_with(rng, dim, 1),
        EnsembleId::SoMinusOdd | EnsembleId::SoMinusEven => sample_orthogonal_with(rng, dim, -1),
        EnsembleId::Sine => unreachable!(),
    }
}

/// Element number `index` of the deterministic sample stream for a master
/// seed. Matches the stream derivation used by [`mc_count_law`], so the
/// same (seed, index) always yields the same element regardless of thread
/// scheduling or batch size.
pub fn sample_element(ensemble: EnsembleId, n: u32, seed: u64, index: u64) -> Result<GroupElement> {
    if ensemble == EnsembleId::Sine {
        return Err(Error::Config("cannot sample the sine process".into()));
    }
    if n == 0 {
        return Err(Error::Config("need n ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    sample_with(ensemble, n, &mut rng)
}

/// Nontrivial eigenangles of a group element.
#[derive(Debug, Clone)]
pub struct AngleSample {
    ensemble: EnsembleId,
    n: u32,
    angles: Vec<f64>,
}

impl AngleSample {
    /// Validates the count and range convention: N angles in [0, 2π) for
    /// the unitary group, N angles in (0, π) for everything else.
    pub fn new(ensemble: EnsembleId, n: u32, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != n as usize {
            return Err(Error::Invariant(format!(
                "expected {n} angles, got {}",
                angles.len()
            )));
        }
        let ok = match ensemble {
            EnsembleId::U => angles.iter().all(|&t| (0.0..TAU).contains(&t)),
            EnsembleId::Sine => false,
            _ => angles.iter().all(|&t| t > 0.0 && t < PI),
        };
        if !ok {
            return Err(Error::Invariant("angle outside ensemble range".into()));
        }
        Ok(AngleSample {
            ensemble,
            n,
            angles,
        })
    }

    pub fn ensemble(&self) -> EnsembleId {
        self.ensemble
    }

    pub fn count(&self) -> u32 {
        self.n
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

fn trivial_targets(ensemble: EnsembleId) -> &'static [f64] {
    match ensemble {
        EnsembleId::SoOdd => &[1.0],
        EnsembleId::SoMinusOdd => &[-1.0],
        EnsembleId::SoMinusEven => &[1.0, -1.0],
        _ => &[],
    }
}

/// Extract the nontrivial eigenangles, removing forced ±1 eigenvalues by
/// nearest selection and collapsing conjugate pairs to one angle in (0, π).
pub fn eigenangles(g: &GroupElement) -> Result<AngleSample> {
    let eigs: Vec<c64> = g
        .matrix
        .eigenvalues()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    for lambda in &eigs {
        if (lambda.norm() - 1.0).abs() > MODULUS_TOL {
            return Err(Error::GroupDefect(format!(
                "eigenvalue modulus {} off the unit circle",
                lambda.norm()
            )));
        }
    }

    if g.ensemble == EnsembleId::U {
        let mut angles: Vec<f64> = eigs
            .iter()
            .map(|l| {
                let arg = l.arg();
                if arg < 0.0 {
                    arg + TAU
                } else {
                    arg
                }
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        return AngleSample::new(EnsembleId::U, g.n, angles);
    }

    let mut remaining = eigs;
    for &target in trivial_targets(g.ensemble) {
        let t = c64::new(target, 0.0);
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l - t).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("spectrum cannot be empty here");
        if dist > TRIVIAL_TOL {
            return Err(Error::TrivialEigenvalueMissing {
                target,
                found: remaining[idx].re,
                distance: dist,
            });
        }
        remaining.swap_remove(idx);
    }

    let mut magnitudes: Vec<f64> = remaining.iter().map(|l| l.arg().abs()).collect();
    magnitudes.sort_by(f64::total_cmp);
    let mut angles = Vec::with_capacity(magnitudes.len() / 2);
    for pair in magnitudes.chunks(2) {
        if pair.len() != 2 || (pair[1] - pair[0]).abs() > PAIRING_TOL {
            return Err(Error::GroupDefect(
                "nontrivial spectrum is not closed under conjugation".into(),
            ));
        }
        angles.push(0.5 * (pair[0] + pair[1]));
    }
    AngleSample::new(g.ensemble, g.n, angles)
}

/// Map raw angles to the bulk scale where mean spacing is 1: N(θ-π)/(2π)
/// for the unitary group, N(θ-π/2)/π for the others.
pub fn bulk_rescale(sample: &AngleSample) -> Vec<f64> {
    let nf = sample.n as f64;
    match sample.ensemble {
        EnsembleId::U => sample
            .angles
            .iter()
            .map(|t| nf * (t - PI) / TAU)
            .collect(),
        _ => sample
            .angles
            .iter()
            .map(|t| nf * (t - PI / 2.0) / PI)
            .collect(),
    }
}

/// Empirical counting law of bulk-rescaled eigenangles in [lo, hi] over
/// `num_samples` independent draws, with per-entry binomial standard errors.
///
/// Each sample derives its generator from the master seed by stream index,
/// so results are reproducible and independent of thread scheduling.
pub fn mc_count_law(
    ensemble: EnsembleId,
    n: u32,
    interval: (f64, f64),
    num_samples: usize,
    seed: u64,
) -> Result<(IntegerLaw, Vec<f64>)> {
    if ensemble == EnsembleId::Sine {
        return Err(Error::Config("cannot sample the sine process".into()));
    }
    if n == 0 || num_samples == 0 {
        return Err(Error::Config("need n ≥ 1 and at least one sample".into()));
    }
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::Config(format!("bad interval [{lo}, {hi}]")));
    }
    let half = n as f64 / 2.0;
    if lo <= -half || hi >= half {
        return Err(Error::BulkDomain {
            value: if lo.abs() > hi.abs() { lo } else { hi },
            half_width: half,
        });
    }
    let counts: Vec<usize> = (0..num_samples)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let g = sample_element(ensemble, n, seed, i as u64)?;
            let sample = eigenangles(&g)?;
            Ok(bulk_rescale(&sample)
                .into_iter()
                .filter(|x| (lo..=hi).contains(x))
                .count())
        })
        .collect::<Result<_>>()?;
    let max_count = counts.iter().copied().max().unwrap_or(0);
    let mut tally = vec![0u64; max_count + 1];
    for c in counts {
        tally[c] += 1;
    }
    let m = num_samples as f64;
    let errors = tally
        .iter()
        .map(|&c| {
            let p = c as f64 / m;
            (p * (1.0 - p) / m).sqrt()
        })
        .collect();
    Ok((IntegerLaw::from_counts(&tally)?, errors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{dpp_count_law, tv_integer};
    use crate::kernels::KernelSpec;
    use approx::assert_relative_eq;

    fn max_entry_diff(a: &Mat<c64>, b: &Mat<c64>) -> f64 {
        let mut worst = 0.0f64;
        for c in 0..a.ncols() {
            for r in 0..a.nrows() {
                worst = worst.max((a[(r, c)] - b[(r, c)]).norm());
            }
        }
        worst
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = sample_unitary(8, 5).unwrap();
        let b = sample_unitary(8, 5).unwrap();
        assert_eq!(max_entry_diff(a.matrix(), b.matrix()), 0.0);
        let c = sample_unitary(8, 6).unwrap();
        assert!(max_entry_diff(a.matrix(), c.matrix()) > 1e-3);
    }

    #[test]
    fn unitary_phases_pass_kolmogorov_smirnov() {
        let m = 10_000;
        let mut phases: Vec<f64> = (0..m)
            .map(|i| {
                let g = sample_unitary(1, i as u64).unwrap();
                eigenangles(&g).unwrap().angles()[0] / TAU
            })
            .collect();
        phases.sort_by(f64::total_cmp);
        let mut d = 0.0f64;
        for (i, &u) in phases.iter().enumerate() {
            d = d.max(((i + 1) as f64 / m as f64 - u).abs());
            d = d.max((u - i as f64 / m as f64).abs());
        }
        // 1% critical value of the KS statistic is 1.63/sqrt(m)
        assert!(d < 1.63 / (m as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn trace_second_moment_matches_unitary_haar() {
        let m = 10_000;
        let values: Vec<f64> = (0..m)
            .map(|i| {
                let g = sample_unitary(8, 70_000 + i as u64).unwrap();
                let tr = (0..8).fold(c64::new(0.0, 0.0), |acc, k| acc + g.matrix()[(k, k)]);
                tr.norm_sqr()
            })
            .collect();
        let mean = values.iter().sum::<f64>() / m as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1) as f64;
        let se = (var / m as f64).sqrt();
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn orthogonal_cosets_have_requested_determinants() {
        for (dim, det_sign) in [(4u32, 1), (4, -1), (5, 1), (5, -1)] {
            for seed in 0..25u64 {
                let g = sample_orthogonal_coset(dim, det_sign, 1000 * seed + dim as u64).unwrap();
                let det = real_determinant(g.matrix());
                assert!((det - det_sign as f64).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn so3_always_carries_a_plus_one_eigenvalue() {
        for seed in 0..50 {
            let g = sample_orthogonal_coset(3, 1, seed).unwrap();
            let sample = eigenangles(&g).unwrap();
            assert_eq!(sample.count(), 1);
        }
    }

    #[test]
    fn symplectic_matrices_satisfy_j_identity() {
        for seed in 0..20 {
            let g = sample_symplectic(16, seed).unwrap();
            assert!(symplectic_residual(g.matrix()) <= 1e-10);
        }
    }

    #[test]
    fn symplectic_spectrum_is_conjugation_closed() {
        for seed in 0..10 {
            let g = sample_symplectic(12, 400 + seed).unwrap();
            let eigs = g.matrix().eigenvalues().unwrap();
            for l in &eigs {
                let partner = eigs.iter().map(|m| (m - l.conj()).norm()).fold(f64::MAX, f64::min);
                assert!(partner < 1e-8, "missing conjugate of {l}");
            }
        }
    }

    #[test]
    fn trivial_eigenvalue_removal_counts() {
        for seed in 0..20 {
            let g = sample_orthogonal_coset(6, -1, seed).unwrap();
            assert_eq!(eigenangles(&g).unwrap().count(), 2);
            let g = sample_orthogonal_coset(7, -1, 500 + seed).unwrap();
            assert_eq!(eigenangles(&g).unwrap().count(), 3);
            let g = sample_unitary(5, 900 + seed).unwrap();
            assert_eq!(eigenangles(&g).unwrap().count(), 5);
        }
        // O⁻(2) is the reflections: spectrum exactly {+1, -1}, nothing left
        let g = sample_orthogonal_coset(2, -1, 3).unwrap();
        assert_eq!(eigenangles(&g).unwrap().count(), 0);
    }

    #[test]
    fn planted_rotation_angle_is_recovered() {
        let theta = 0.7f64;
        let rot = Mat::from_fn(2, 2, |r, c| {
            let v = match (r, c) {
                (0, 0) | (1, 1) => theta.cos(),
                (0, 1) => -theta.sin(),
                _ => theta.sin(),
            };
            c64::new(v, 0.0)
        });
        let g = GroupElement::new(EnsembleId::SoEven, rot).unwrap();
        let sample = eigenangles(&g).unwrap();
        assert_eq!(sample.count(), 1);
        assert_relative_eq!(sample.angles()[0], theta, max_relative = 1e-12);
    }

    #[test]
    fn bulk_rescale_conventions() {
        let u = AngleSample::new(EnsembleId::U, 2, vec![0.0, PI]).unwrap();
        let xs = bulk_rescale(&u);
        assert_relative_eq!(xs[0], -1.0, max_relative = 1e-15); // θ=0 → -N/2
        assert!(xs[1].abs() < 1e-15); // θ=π → 0
        let so = AngleSample::new(EnsembleId::SoEven, 3, vec![PI / 2.0, 1.0, 2.0]).unwrap();
        assert!(bulk_rescale(&so)[0].abs() < 1e-15);
        assert!(AngleSample::new(EnsembleId::U, 1, vec![TAU]).is_err());
        assert!(AngleSample::new(EnsembleId::Sp, 1, vec![PI]).is_err());
    }

    #[test]
    fn group_element_rejects_defects() {
        let not_unitary = Mat::from_fn(3, 3, |r, c| c64::new((r + c) as f64, 0.0));
        assert!(GroupElement::new(EnsembleId::U, not_unitary).is_err());
        let g = sample_unitary(4, 1).unwrap();
        // generic unitary matrices are not real, so the orthogonal tag fails
        assert!(GroupElement::new(EnsembleId::SoEven, g.matrix().clone()).is_err());
        let rot = sample_orthogonal_coset(4, 1, 2).unwrap();
        assert!(GroupElement::new(EnsembleId::SoMinusEven, rot.matrix().clone()).is_err());
    }

    #[test]
    fn empirical_law_tracks_exact_law() {
        let n = 16u32;
        let (law, errors) = mc_count_law(EnsembleId::U, n, (-1.0, 1.0), 2000, 77).unwrap();
        assert_eq!(law.pmf().len(), errors.len());
        assert!((law.mean() - 2.0).abs() < 0.15, "mean {}", law.mean());
        let spec = KernelSpec::bulk(EnsembleId::U, n).unwrap();
        let (exact, _) = dpp_count_law(&spec, (-1.0, 1.0), 60).unwrap();
        let tv = tv_integer(&law, &exact);
        assert!(tv < 0.05, "TV {tv}");
    }

    #[test]
    fn zero_length_interval_gives_point_mass() {
        let (law, _) = mc_count_law(EnsembleId::SoOdd, 6, (0.25, 0.25), 50, 5).unwrap();
        assert_eq!(law.pmf(), &[1.0]);
        assert!(mc_count_law(EnsembleId::U, 6, (-4.0, 1.0), 10, 5).is_err());
        assert!(mc_count_law(EnsembleId::Sine, 6, (-1.0, 1.0), 10, 5).is_err());
    }

    #[test]
    fn counting_law_is_permutation_invariant() {
        let dim = 8usize;
        let perm = Mat::from_fn(dim, dim, |r, c| {
            c64::new(if r + c == dim - 1 { 1.0 } else { 0.0 }, 0.0)
        });
        let interval = (-1.0, 1.0);
        let mut counts_plain = vec![0u64; dim + 1];
        let mut counts_permuted = vec![0u64; dim + 1];
        for seed in 0..10_000u64 {
            let g = sample_unitary(dim as u32, 31_000 + seed).unwrap();
            let count = |m: Mat<c64>| {
                let e = GroupElement::new(EnsembleId::U, m).unwrap();
                let xs = bulk_rescale(&eigenangles(&e).unwrap());
                xs.into_iter()
                    .filter(|x| (interval.0..=interval.1).contains(x))
                    .count()
            };
            counts_plain[count(g.matrix().clone())] += 1;
            counts_permuted[count(&perm * g.matrix())] += 1;
        }
        let a = IntegerLaw::from_counts(&counts_plain).unwrap();
        let b = IntegerLaw::from_counts(&counts_permuted).unwrap();
        assert!(tv_integer(&a, &b) <= 0.03);
    }
}
