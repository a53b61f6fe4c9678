//! Pointwise kernel evaluation: the Dirichlet-type ratio, the ensemble
//! kernels and their bulk rescalings, the sine kernel, the C_j/S_j building
//! blocks, the A/A' kernels, and the four-way split of the even
//! special-orthogonal bulk kernel.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

use crate::series::{csc_coeff, rational_to_f64};
use crate::{Error, Result};

/// Which ensemble a kernel belongs to.
///
/// The `N` parameter attached to a [`KernelSpec`] always counts nontrivial
/// eigenangles: `U` is the unitary group U(N), `SoEven` is SO(2N), `SoOdd`
/// is SO(2N+1), `SoMinusOdd` is SO⁻(2N+1), `SoMinusEven` is SO⁻(2N+2), and
/// `Sp` is Sp(2N). `SoMinusEven` and `Sp` share one kernel formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleId {
    U,
    SoEven,
    SoOdd,
    SoMinusOdd,
    SoMinusEven,
    Sp,
    Sine,
}

impl EnsembleId {
    /// Every matrix ensemble (everything except the sine limit).
    pub const MATRIX_ENSEMBLES: [EnsembleId; 6] = [
        EnsembleId::U,
        EnsembleId::SoEven,
        EnsembleId::SoOdd,
        EnsembleId::SoMinusOdd,
        EnsembleId::SoMinusEven,
        EnsembleId::Sp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EnsembleId::U => "u",
            EnsembleId::SoEven => "so-even",
            EnsembleId::SoOdd => "so-odd",
            EnsembleId::SoMinusOdd => "so-minus-odd",
            EnsembleId::SoMinusEven => "so-minus-even",
            EnsembleId::Sp => "sp",
            EnsembleId::Sine => "sine",
        }
    }

    /// Matrix dimension of a group element carrying `n` nontrivial angles.
    pub fn matrix_dim(self, n: u32) -> Option<u32> {
        match self {
            EnsembleId::U => Some(n),
            EnsembleId::SoEven | EnsembleId::Sp => Some(2 * n),
            EnsembleId::SoOdd | EnsembleId::SoMinusOdd => Some(2 * n + 1),
            EnsembleId::SoMinusEven => Some(2 * n + 2),
            EnsembleId::Sine => None,
        }
    }

    /// Inverse of [`matrix_dim`](Self::matrix_dim): how many nontrivial
    /// angles a matrix of the given dimension carries, if the parity fits.
    pub fn angle_count_for_matrix_dim(self, dim: u32) -> Option<u32> {
        match self {
            EnsembleId::U if dim >= 1 => Some(dim),
            EnsembleId::SoEven | EnsembleId::Sp if dim >= 2 && dim % 2 == 0 => Some(dim / 2),
            EnsembleId::SoOdd | EnsembleId::SoMinusOdd if dim % 2 == 1 => Some((dim - 1) / 2),
            EnsembleId::SoMinusEven if dim >= 2 && dim % 2 == 0 => Some((dim - 2) / 2),
            _ => None,
        }
    }
}

impl fmt::Display for EnsembleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for EnsembleId {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let canon = raw.trim().to_ascii_lowercase().replace('_', "-");
        EnsembleId::MATRIX_ENSEMBLES
            .iter()
            .copied()
            .chain([EnsembleId::Sine])
            .find(|e| e.label() == canon)
            .ok_or_else(|| Error::Domain(format!("unknown ensemble `{raw}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    Raw,
    Bulk,
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scaling::Raw => "raw",
            Scaling::Bulk => "bulk",
        })
    }
}

impl FromStr for Scaling {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        match raw.trim().to_ascii_lowercase().as_str() {
            "raw" => Ok(Scaling::Raw),
            "bulk" => Ok(Scaling::Bulk),
            other => Err(Error::Domain(format!("unknown scaling `{other}`"))),
        }
    }
}

/// A fully specified kernel: ensemble, size parameter, and scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    ensemble: EnsembleId,
    n: u32,
    scaling: Scaling,
}

impl KernelSpec {
    pub fn new(ensemble: EnsembleId, n: u32, scaling: Scaling) -> Result<Self> {
        if ensemble == EnsembleId::Sine {
            if scaling == Scaling::Raw {
                return Err(Error::Domain(
                    "the sine kernel has no raw-angle form".into(),
                ));
            }
        } else if n == 0 {
            return Err(Error::Domain("size parameter must be positive".into()));
        }
        Ok(KernelSpec {
            ensemble,
            n,
            scaling,
        })
    }

    pub fn bulk(ensemble: EnsembleId, n: u32) -> Result<Self> {
        KernelSpec::new(ensemble, n, Scaling::Bulk)
    }

    pub fn ensemble(&self) -> EnsembleId {
        self.ensemble
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    /// Evaluate at a point, enforcing the domain of the chosen scaling.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self.scaling {
            Scaling::Raw => ensemble_kernel(self, x, y),
            Scaling::Bulk => bulk_kernel(self, x, y),
        }
    }

    /// Raw-angle domain: [0, 2π) for the unitary group, [0, π) otherwise.
    pub fn raw_domain_end(&self) -> f64 {
        match self.ensemble {
            EnsembleId::U => TAU,
            _ => PI,
        }
    }
}

/// Where the guarded Taylor branch of [`dirichlet_ratio`] takes over.
const DIRICHLET_GUARD: f64 = 1e-6;

/// sin(Nx/2)/sin(x/2) with the removable singularities filled in.
///
/// Near a multiple of 2π the ratio is evaluated by a fourth-order expansion
/// about the singular point; both branches agree to ~1e-12 where they meet.
pub fn dirichlet_ratio(n: u32, x: f64) -> f64 {
    let half_sin = (x / 2.0).sin();
    if half_sin.abs() >= DIRICHLET_GUARD {
        (n as f64 * x / 2.0).sin() / half_sin
    } else {
        let m = (x / TAU).round();
        let delta = x - TAU * m;
        let nf = n as f64;
        let n2 = nf * nf;
        let d2 = delta * delta;
        let taylor =
            nf * (1.0 - (n2 - 1.0) * d2 / 24.0 + (n2 - 1.0) * (3.0 * n2 - 7.0) * d2 * d2 / 5760.0);
        // S_N(2πm + δ) = (-1)^{m(N-1)} S_N(δ)
        if (m as i64 * (n as i64 - 1)) % 2 == 0 {
            taylor
        } else {
            -taylor
        }
    }
}

fn raw_eval(ensemble: EnsembleId, n: u32, x: f64, y: f64) -> f64 {
    match ensemble {
        EnsembleId::U => dirichlet_ratio(n, x - y) / TAU,
        EnsembleId::SoEven => {
            (dirichlet_ratio(2 * n - 1, x - y) + dirichlet_ratio(2 * n - 1, x + y)) / TAU
        }
        EnsembleId::SoOdd => {
            (dirichlet_ratio(2 * n, x - y) - dirichlet_ratio(2 * n, x + y)) / TAU
        }
        EnsembleId::SoMinusOdd => {
            (dirichlet_ratio(2 * n, x - y) + dirichlet_ratio(2 * n, x + y)) / TAU
        }
        EnsembleId::SoMinusEven | EnsembleId::Sp => {
            (dirichlet_ratio(2 * n + 1, x - y) - dirichlet_ratio(2 * n + 1, x + y)) / TAU
        }
        EnsembleId::Sine => unreachable!("sine kernel has no raw form"),
    }
}

/// Raw-angle kernel on the ensemble's Λ domain.
pub fn ensemble_kernel(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    if spec.ensemble == EnsembleId::Sine {
        return Err(Error::Domain("the sine kernel has no raw-angle form".into()));
    }
    if spec.scaling != Scaling::Raw {
        return Err(Error::Domain(
            "ensemble_kernel requires a raw-scaling spec".into(),
        ));
    }
    let end = spec.raw_domain_end();
    for v in [x, y] {
        if !(0.0..end).contains(&v) {
            return Err(Error::Domain(format!(
                "angle {v} outside [0, {end:.6})"
            )));
        }
    }
    Ok(raw_eval(spec.ensemble, spec.n, x, y))
}

/// Bulk-rescaled kernel; the domain is |x|, |y| < N/2, strictly.
pub fn bulk_kernel(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    if spec.ensemble == EnsembleId::Sine {
        return Ok(sine_kernel(x, y));
    }
    if spec.scaling != Scaling::Bulk {
        return Err(Error::Domain("bulk_kernel requires a bulk-scaling spec".into()));
    }
    let half = spec.n as f64 / 2.0;
    for v in [x, y] {
        if v.abs() >= half {
            return Err(Error::BulkDomain {
                value: v,
                half_width: half,
            });
        }
    }
    let nf = spec.n as f64;
    match spec.ensemble {
        EnsembleId::U => Ok(dirichlet_ratio(spec.n, TAU * (x - y) / nf) / nf),
        ensemble => Ok(
            raw_eval(ensemble, spec.n, PI * x / nf + PI / 2.0, PI * y / nf + PI / 2.0) * PI / nf,
        ),
    }
}

fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-7 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// sin(π(x-y)) / (π(x-y)), with value 1 on the diagonal.
pub fn sine_kernel(x: f64, y: f64) -> f64 {
    sinc(PI * (x - y))
}

/// C_j(x,y) = cos(πxy/s) (πxy/s)^j / √(2s).
pub fn cj_kernel(j: u32, s: f64, x: f64, y: f64) -> f64 {
    let arg = PI * x * y / s;
    arg.cos() * arg.powi(j as i32) / (2.0 * s).sqrt()
}

/// S_j(x,y) = sin(πxy/s) (πxy/s)^j / √(2s).
pub fn sj_kernel(j: u32, s: f64, x: f64, y: f64) -> f64 {
    let arg = PI * x * y / s;
    arg.sin() * arg.powi(j as i32) / (2.0 * s).sqrt()
}

/// A_{2k+1}(x,y) = (π(x-y))^{2k+1} sin(π(x-y)).
pub fn a_kernel(k: u32, x: f64, y: f64) -> f64 {
    let u = PI * (x - y);
    u.powi(2 * k as i32 + 1) * u.sin()
}

/// A'_{2k+1}(x,y) = (π(x+y))^{2k+1} sin(π(x+y)).
pub fn a_prime_kernel(k: u32, x: f64, y: f64) -> f64 {
    let u = PI * (x + y);
    u.powi(2 * k as i32 + 1) * u.sin()
}

/// The four pieces of the even special-orthogonal bulk kernel.
#[derive(Debug, Clone, Copy)]
pub struct SoEvenSplit {
    /// sin(π(x-y)) cot(π(x-y)/(2N)) / (2N); tends to the sine kernel.
    pub k1: f64,
    /// cos(π(x-y)) / (2N)
    pub k2: f64,
    /// cos(π(x+y)) / (2N)
    pub k3: f64,
    /// sin(π(x+y)) tan(π(x+y)/(2N)) / (2N)
    pub k4: f64,
}

impl SoEvenSplit {
    /// K1 - K2 - (-1)^N K3 - (-1)^N K4; equals the bulk kernel pointwise.
    pub fn recombined(&self, n: u32) -> f64 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        self.k1 - self.k2 - sign * self.k3 - sign * self.k4
    }
}

/// Split the SO(2N) bulk kernel into its difference/sum parts.
pub fn so_even_bulk_split(n: u32, x: f64, y: f64) -> SoEvenSplit {
    let two_n = 2.0 * n as f64;
    let diff = PI * (x - y);
    let u = diff / two_n;
    let k1 = if u.abs() < 1e-6 {
        // sinc(π(x-y)) · (u/sin u) · cos u, stable through the diagonal
        sinc(diff) * (1.0 + u * u / 6.0) * u.cos()
    } else {
        diff.sin() * (u.cos() / u.sin()) / two_n
    };
    let sum = PI * (x + y);
    let v = sum / two_n;
    SoEvenSplit {
        k1,
        k2: diff.cos() / two_n,
        k3: sum.cos() / two_n,
        k4: sum.sin() * v.tan() / two_n,
    }
}

static CSC_FLOATS: OnceLock<RwLock<Vec<f64>>> = OnceLock::new();

/// Float view of the k-th odd cosecant-series coefficient c_{2k+1}, cached.
pub fn csc_float(k: usize) -> f64 {
    let lock = CSC_FLOATS.get_or_init(|| RwLock::new(Vec::new()));
    {
        let cache = lock.read().unwrap();
        if k < cache.len() {
            return cache[k];
        }
    }
    let mut cache = lock.write().unwrap();
    while cache.len() <= k {
        let next = csc_coeff(cache.len());
        cache.push(rational_to_f64(&next));
    }
    cache[k]
}

/// Truncated series for (bulk unitary - sine): Σ_{k≤K} c_{2k+1}
/// (π(x-y))^{2k+1} sin(π(x-y)) / N^{2k+2}, convergent for |x-y| < N.
pub fn cue_difference_series(n: u32, k_max: usize, x: f64, y: f64) -> Result<f64> {
    let d = x - y;
    let nf = n as f64;
    if d.abs() >= nf {
        return Err(Error::Domain(format!(
            "|x-y| = {} is outside the series' radius N = {nf}",
            d.abs()
        )));
    }
    let base = PI * d;
    let sin_d = base.sin();
    let ratio = (base / nf) * (base / nf);
    let mut power = base / (nf * nf); // (πd)^{2k+1} / N^{2k+2} at k = 0
    let mut acc = 0.0;
    for k in 0..=k_max {
        acc += csc_float(k) * power;
        power *= ratio;
    }
    Ok(acc * sin_d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn dirichlet_ratio_fills_singularities() {
        assert_eq!(dirichlet_ratio(7, 0.0), 7.0);
        assert_relative_eq!(dirichlet_ratio(2, PI / 2.0), 2f64.sqrt(), max_relative = 1e-15);
        assert!(dirichlet_ratio(3, 2.0 * PI / 3.0).abs() < 1e-14);
        // periodicity sign at 2π: S_N(2π) = (-1)^{N-1} N
        assert_relative_eq!(dirichlet_ratio(4, TAU), -4.0, max_relative = 1e-9);
        assert_relative_eq!(dirichlet_ratio(5, TAU), 5.0, max_relative = 1e-9);
    }

    #[test]
    fn dirichlet_ratio_branches_agree_in_overlap() {
        // the guard trips at |x| ≈ 2e-6 near zero; compare both formulas
        // on a bracket around that point
        for n in [3u32, 16, 101] {
            for &x in &[1.5e-6, 1.9e-6, 2.1e-6, 3.0e-6] {
                let direct = (n as f64 * x / 2.0).sin() / (x / 2.0).sin();
                assert_relative_eq!(dirichlet_ratio(n, x), direct, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn dirichlet_ratio_taylor_continuity() {
        let eps = 1e-5;
        for n in [2u32, 8, 33] {
            let nf = n as f64;
            let approx2 = nf * (1.0 - (nf * nf - 1.0) * eps * eps / 24.0);
            assert!((dirichlet_ratio(n, eps) - approx2).abs() <= 1e-10);
        }
    }

    #[test]
    fn raw_kernel_diagonal_values() {
        let u = KernelSpec::new(EnsembleId::U, 9, Scaling::Raw).unwrap();
        assert_relative_eq!(
            ensemble_kernel(&u, 1.3, 1.3).unwrap(),
            9.0 / TAU,
            max_relative = 1e-14
        );
        let so_even = KernelSpec::new(EnsembleId::SoEven, 5, Scaling::Raw).unwrap();
        assert_relative_eq!(
            ensemble_kernel(&so_even, 0.0, 0.0).unwrap(),
             (2.0 * 5.0 - 1.0) / PI,
            max_relative = 1e-14
        );
        let sp = KernelSpec::new(EnsembleId::Sp, 5, Scaling::Raw).unwrap();
        assert!(ensemble_kernel(&sp, 0.0, 0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn raw_kernel_rejects_out_of_domain() {
        let u = KernelSpec::new(EnsembleId::U, 4, Scaling::Raw).unwrap();
        assert!(ensemble_kernel(&u, -0.1, 1.0).is_err());
        assert!(ensemble_kernel(&u, TAU, 1.0).is_err());
        let so = KernelSpec::new(EnsembleId::SoOdd, 4, Scaling::Raw).unwrap();
        assert!(ensemble_kernel(&so, 3.5, 1.0).is_err());
    }

    #[test]
    fn bulk_kernel_diagonal_is_one_for_unitary() {
        for n in [4u32, 17, 256] {
            let spec = KernelSpec::bulk(EnsembleId::U, n).unwrap();
            for &x in &[0.0, -0.7, 1.9] {
                assert_relative_eq!(bulk_kernel(&spec, x, x).unwrap(), 1.0, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn bulk_kernel_enforces_half_width() {
        let spec = KernelSpec::bulk(EnsembleId::U, 8).unwrap();
        assert!(bulk_kernel(&spec, 4.0, 0.0).is_err());
        assert!(bulk_kernel(&spec, 0.0, -4.2).is_err());
        assert!(bulk_kernel(&spec, 3.99, 0.0).is_ok());
    }

    #[test]
    fn sine_kernel_values() {
        assert_eq!(sine_kernel(0.0, 0.0), 1.0);
        assert!(sine_kernel(1.0, 0.0).abs() < 1e-15);
        assert_relative_eq!(sine_kernel(0.5, 0.0), 2.0 / PI, max_relative = 1e-15);
    }

    #[test]
    fn kernels_are_symmetric_at_random_points() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let x: f64 = rng.random_range(0.0..PI);
            let y: f64 = rng.random_range(0.0..PI);
            for ensemble in [
                EnsembleId::SoEven,
                EnsembleId::SoOdd,
                EnsembleId::SoMinusOdd,
                EnsembleId::Sp,
            ] {
                let spec = KernelSpec::new(ensemble, 6, Scaling::Raw).unwrap();
                let a = ensemble_kernel(&spec, x, y).unwrap();
                let b = ensemble_kernel(&spec, y, x).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-12);
            }
            let xs = x - PI / 2.0;
            let ys = y - PI / 2.0;
            assert_relative_eq!(
                sine_kernel(xs, ys),
                sine_kernel(ys, xs),
                max_relative = 1e-13,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn diagonal_positivity_on_grid() {
        for ensemble in EnsembleId::MATRIX_ENSEMBLES {
            let spec = KernelSpec::new(ensemble, 7, Scaling::Raw).unwrap();
            let end = spec.raw_domain_end();
            for i in 0..200 {
                let x = end * (i as f64 + 0.5) / 200.0;
                let k = ensemble_kernel(&spec, x, x).unwrap();
                assert!(k >= -1e-12, "{ensemble} diagonal at {x} gave {k}");
            }
        }
    }

    #[test]
    fn building_block_kernels() {
        assert_relative_eq!(cj_kernel(0, 2.0, 0.0, 1.7), 0.5, max_relative = 1e-15);
        assert_eq!(sj_kernel(3, 1.0, 0.0, 0.9), 0.0);
        assert_relative_eq!(
            cj_kernel(1, 1.0, 1.0, 1.0),
            -PI / 2f64.sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(a_kernel(4, 0.3, 0.3), 0.0);
        assert_relative_eq!(a_kernel(0, 0.5, 0.0), PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(a_prime_kernel(0, 0.25, 0.25), PI / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn so_even_split_identity_at_random_points() {
        let mut rng = StdRng::seed_from_u64(42);
        for n in [4u32, 9, 16] {
            let spec = KernelSpec::bulk(EnsembleId::SoEven, n).unwrap();
            let half = n as f64 / 2.0;
            for _ in 0..1000 {
                let x: f64 = rng.random_range(-half * 0.999..half * 0.999);
                let y: f64 = rng.random_range(-half * 0.999..half * 0.999);
                let split = so_even_bulk_split(n, x, y);
                let direct = bulk_kernel(&spec, x, y).unwrap();
                assert!(
                    (split.recombined(n) - direct).abs() < 1e-12,
                    "N={n} at ({x}, {y})"
                );
            }
        }
    }

    #[test]
    fn so_even_split_diagonal_pieces() {
        let split = so_even_bulk_split(6, 0.8, 0.8);
        assert_relative_eq!(split.k1, 1.0, max_relative = 1e-12);
        assert_relative_eq!(split.k2, 1.0 / 12.0, max_relative = 1e-15);
    }

    #[test]
    fn cue_series_matches_direct_difference() {
        let n = 16u32;
        let spec = KernelSpec::bulk(EnsembleId::U, n).unwrap();
        let (x, y) = (0.7, -0.3);
        let direct = bulk_kernel(&spec, x, y).unwrap() - sine_kernel(x, y);
        let series = cue_difference_series(n, 12, x, y).unwrap();
        assert_relative_eq!(series, direct, max_relative = 1e-14);
        assert_eq!(cue_difference_series(n, 12, 0.4, 0.4).unwrap(), 0.0);
        assert!(cue_difference_series(4, 3, 3.0, -1.5).is_err());
    }

    #[test]
    fn cue_series_truncation_shrinks_geometrically() {
        let n = 8u32;
        let spec = KernelSpec::bulk(EnsembleId::U, n).unwrap();
        let (x, y) = (1.2, -0.9);
        let direct = bulk_kernel(&spec, x, y).unwrap() - sine_kernel(x, y);
        let mut previous = f64::INFINITY;
        for k_max in 0..6 {
            let residual = (cue_difference_series(n, k_max, x, y).unwrap() - direct).abs();
            assert!(residual < previous);
            previous = residual;
        }
    }

    #[test]
    fn bulk_unitary_exceeds_sine_where_sin_positive() {
        // at (0.5, 0) the difference is +c₁(π/2)/N⁴ to leading order
        let spec = KernelSpec::bulk(EnsembleId::U, 64).unwrap();
        let diff = bulk_kernel(&spec, 0.5, 0.0).unwrap() - sine_kernel(0.5, 0.0);
        assert!(diff > 0.0);
        assert!((5e-5..8e-5).contains(&diff), "difference {diff}");
        let series = cue_difference_series(64, 8, 0.5, 0.0).unwrap();
        assert_relative_eq!(diff, series, max_relative = 1e-10);
    }

    #[test]
    fn ensemble_labels_round_trip() {
        for ensemble in EnsembleId::MATRIX_ENSEMBLES.into_iter().chain([EnsembleId::Sine]) {
            let parsed: EnsembleId = ensemble.label().parse().unwrap();
            assert_eq!(parsed, ensemble);
        }
        assert!("so_even".parse::<EnsembleId>().is_ok());
        assert!("banana".parse::<EnsembleId>().is_err());
        assert!(KernelSpec::new(EnsembleId::Sine, 0, Scaling::Raw).is_err());
        assert!(KernelSpec::new(EnsembleId::U, 0, Scaling::Raw).is_err());
    }
}
