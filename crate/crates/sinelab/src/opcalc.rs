//! Finite-rank operator calculus on Gauss–Legendre grids: kernel
//! discretization, composition, trace and Hilbert–Schmidt norms, and
//! numerical checks of the operator decompositions and norm bounds.

use std::sync::Arc;

use faer::{Mat, Side};

use crate::kernels::{a_kernel, a_prime_kernel, cj_kernel, sine_kernel, sj_kernel, KernelSpec};
use crate::{Error, Result};

/// Grid size used by the bound-check helpers when none is given.
pub const DEFAULT_GRID_SIZE: usize = 80;

/// Gauss–Legendre nodes and weights on [-s, s].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    s: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Quadrature of f over [-s, s].
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_with_deriv(n: usize, z: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = z;
    for j in 1..n {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * z * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (z * p - p_prev) / (z * z - 1.0);
    (p, dp)
}

/// Build an n-point Gauss–Legendre rule on [-s, s].
///
/// Nodes come out strictly increasing and the weights sum to 2s within
/// 1e-12; both are verified before returning.
pub fn gauss_legendre(n: usize, s: f64) -> Result<QuadratureGrid> {
    if n == 0 {
        return Err(Error::Config("quadrature grid needs at least one node".into()));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Config(format!("half-width s must be positive, got {s}")));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, z);
            dp = d;
            let dz = -p / d;
            z += dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // the initial guesses enumerate roots from the largest downwards
        nodes[i] = -z * s;
        nodes[n - 1 - i] = z * s;
        weights[i] = w * s;
        weights[n - 1 - i] = w * s;
    }
    if nodes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Invariant("quadrature nodes are not increasing".into()));
    }
    let (mut total, mut carry) = (0.0, 0.0);
    for &w in &weights {
        let y = w - carry;
        let t = total + y;
        carry = (t - total) - y;
        total = t;
    }
    if (total - 2.0 * s).abs() > 1e-12 {
        return Err(Error::Invariant(format!(
            "quadrature weights sum to {total}, expected {}",
            2.0 * s
        )));
    }
    Ok(QuadratureGrid { s, nodes, weights })
}

/// A kernel restricted to a grid, stored as the symmetrically weighted
/// Nyström matrix with entries √w_i K(x_i, x_j) √w_j.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    grid: Arc<QuadratureGrid>,
    matrix: Mat<f64>,
}

impl DiscretizedOperator {
    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    fn same_grid(&self, other: &DiscretizedOperator) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.grid.len(),
                right: other.grid.len(),
            })
        }
    }

    /// Operator composition; both operands must share the grid.
    pub fn compose(&self, other: &DiscretizedOperator) -> Result<DiscretizedOperator> {
        self.same_grid(other)?;
        Ok(DiscretizedOperator {
            grid: self.grid.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn add(&self, other: &DiscretizedOperator) -> Result<DiscretizedOperator> {
        self.same_grid(other)?;
        Ok(DiscretizedOperator {
            grid: self.grid.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &DiscretizedOperator) -> Result<DiscretizedOperator> {
        self.same_grid(other)?;
        Ok(DiscretizedOperator {
            grid: self.grid.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn scale(&self, factor: f64) -> DiscretizedOperator {
        DiscretizedOperator {
            grid: self.grid.clone(),
            matrix: Mat::from_fn(self.dim(), self.dim(), |i, j| factor * self.matrix[(i, j)]),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    fn asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max(self.matrix[(i, j)].abs());
            }
        }
        worst
    }

    /// Eigenvalues of the weighted matrix, for operators that are symmetric
    /// up to roundoff. The matrix is symmetrized first.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let sym = Mat::from_fn(n, n, |i, j| {
            0.5 * (self.matrix[(i, j)] + self.matrix[(j, i)])
        });
        sym.self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))
    }

    /// Trace norm: sum of |eigenvalues| when symmetric, otherwise sum of
    /// singular values.
    pub fn trace_norm(&self) -> Result<f64> {
        let tol = 1e-10 * self.max_abs().max(1.0);
        if self.asymmetry() <= tol {
            Ok(self.symmetric_eigenvalues()?.iter().map(|e| e.abs()).sum())
        } else {
            let sv = self
                .matrix
                .singular_values()
                .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
            Ok(sv.iter().sum())
        }
    }

    /// Hilbert–Schmidt norm, i.e. the Frobenius norm of the weighted matrix.
    pub fn hs_norm(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                acc += self.matrix[(i, j)] * self.matrix[(i, j)];
            }
        }
        acc.sqrt()
    }
}

/// Discretize a pointwise kernel on a grid. Rejects non-finite values.
pub fn discretize(
    kernel: impl Fn(f64, f64) -> f64,
    grid: &Arc<QuadratureGrid>,
) -> Result<DiscretizedOperator> {
    let n = grid.len();
    let sw: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let mut matrix = Mat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let v = kernel(grid.nodes()[i], grid.nodes()[j]);
            if !v.is_finite() {
                return Err(Error::NonFiniteKernel {
                    x: grid.nodes()[i],
                    y: grid.nodes()[j],
                    value: v,
                });
            }
            matrix[(i, j)] = sw[i] * v * sw[j];
        }
    }
    Ok(DiscretizedOperator {
        grid: grid.clone(),
        matrix,
    })
}

/// Discretize a kernel that can itself fail (domain checks and the like).
pub fn discretize_fallible(
    kernel: impl Fn(f64, f64) -> Result<f64>,
    grid: &Arc<QuadratureGrid>,
) -> Result<DiscretizedOperator> {
    let n = grid.len();
    let sw: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let mut matrix = Mat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let v = kernel(grid.nodes()[i], grid.nodes()[j])?;
            if !v.is_finite() {
                return Err(Error::NonFiniteKernel {
                    x: grid.nodes()[i],
                    y: grid.nodes()[j],
                    value: v,
                });
            }
            matrix[(i, j)] = sw[i] * v * sw[j];
        }
    }
    Ok(DiscretizedOperator {
        grid: grid.clone(),
        matrix,
    })
}

/// Discretize a domain-checked kernel spec, propagating its errors.
pub fn discretize_spec(spec: &KernelSpec, grid: &Arc<QuadratureGrid>) -> Result<DiscretizedOperator> {
    discretize_fallible(|x, y| spec.eval(x, y), grid)
}

/// Bulk kernel minus the sine kernel, as one discretized operator.
pub fn difference_from_sine(spec: &KernelSpec, grid: &Arc<QuadratureGrid>) -> Result<DiscretizedOperator> {
    let ensemble = discretize_spec(spec, grid)?;
    let sine = discretize(sine_kernel, grid)?;
    ensemble.sub(&sine)
}

/// The same difference restricted to an arbitrary interval [lo, hi]. The
/// returned operator lives on a grid over the centered interval of equal
/// width; both kernels are evaluated at the window coordinates, so its
/// spectrum (and trace norm) is that of the restriction to [lo, hi].
pub fn difference_from_sine_on(
    spec: &KernelSpec,
    interval: (f64, f64),
    grid_size: usize,
) -> Result<DiscretizedOperator> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Config(format!("bad interval [{lo}, {hi}]")));
    }
    let center = 0.5 * (lo + hi);
    let grid = Arc::new(gauss_legendre(grid_size, 0.5 * (hi - lo))?);
    discretize_fallible(
        |u, v| Ok(spec.eval(u + center, v + center)? - sine_kernel(u + center, v + center)),
        &grid,
    )
}

/// HS norm straight from kernel values: √(Σ_ij w_i w_j K(x_i,x_j)²).
pub fn hs_norm_kernel(kernel: impl Fn(f64, f64) -> f64, grid: &QuadratureGrid) -> f64 {
    let mut acc = 0.0;
    for (&xj, &wj) in grid.nodes().iter().zip(grid.weights()) {
        for (&xi, &wi) in grid.nodes().iter().zip(grid.weights()) {
            let v = kernel(xi, xj);
            acc += wi * wj * v * v;
        }
    }
    acc.sqrt()
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn axpy(acc: &mut Mat<f64>, coeff: f64, m: &Mat<f64>) {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc[(i, j)] += coeff * m[(i, j)];
        }
    }
}

fn max_abs_diff(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    worst
}

struct CsBlocks {
    c: Vec<Mat<f64>>,
    s: Vec<Mat<f64>>,
}

fn cs_blocks(max_index: u32, half_width: f64, grid: &Arc<QuadratureGrid>) -> Result<CsBlocks> {
    let mut c = Vec::with_capacity(max_index as usize + 1);
    let mut s = Vec::with_capacity(max_index as usize + 1);
    for j in 0..=max_index {
        c.push(discretize(|x, y| cj_kernel(j, half_width, x, y), grid)?.matrix.clone());
        s.push(discretize(|x, y| sj_kernel(j, half_width, x, y), grid)?.matrix.clone());
    }
    Ok(CsBlocks { c, s })
}

/// Rebuild the A (or A') operator from composed C/S blocks and report the
/// largest entrywise deviation from direct discretization.
pub fn verify_decomposition_a(k: u32, s: f64, n: usize, prime: bool) -> Result<f64> {
    let grid = Arc::new(gauss_legendre(n, s)?);
    let lhs = if prime {
        discretize(|x, y| a_prime_kernel(k, x, y), &grid)?
    } else {
        discretize(|x, y| a_kernel(k, x, y), &grid)?
    };
    let blocks = cs_blocks(2 * k + 2, s, &grid)?;
    let c = &blocks.c;
    let sb = &blocks.s;
    let dim = grid.len();
    let mut acc: Mat<f64> = Mat::zeros(dim, dim);
    let top = (2 * k + 2) as usize;
    // for the x+y kernel the sin·sin products flip sign (cos(a+b) = cc - ss),
    // mirroring the K3 decomposition below
    let ss_sign = if prime { -1.0 } else { 1.0 };
    for j in 0..=(k + 1) as usize {
        let sign = if prime || j % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * binomial(2 * k + 2, j as u32);
        axpy(&mut acc, coeff, &(&c[j] * &c[top - j]));
        axpy(&mut acc, coeff * ss_sign, &(&sb[j] * &sb[top - j]));
    }
    for j in 0..=k as usize {
        let sign = if prime || j % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * binomial(2 * k + 2, j as u32);
        axpy(&mut acc, coeff, &(&c[top - j] * &c[j]));
        axpy(&mut acc, coeff * ss_sign, &(&sb[top - j] * &sb[j]));
    }
    for j in 0..=k as usize {
        let sign = if prime || j % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * binomial(2 * k + 1, j as u32) * (2 * k + 2) as f64;
        let cross_sign = if prime { 1.0 } else { -1.0 };
        axpy(&mut acc, coeff, &(&sb[top - 1 - j] * &c[j]));
        axpy(&mut acc, coeff, &(&c[j] * &sb[top - 1 - j]));
        axpy(&mut acc, coeff * cross_sign, &(&c[top - 1 - j] * &sb[j]));
        axpy(&mut acc, coeff * cross_sign, &(&sb[j] * &c[top - 1 - j]));
    }
    Ok(max_abs_diff(lhs.matrix(), &acc))
}

/// Rebuild cos(π(x-y)) and cos(π(x+y)) from rank-one C/S compositions;
/// returns the two worst entrywise residuals.
pub fn verify_decomposition_k23(s: f64, n: usize) -> Result<(f64, f64)> {
    let grid = Arc::new(gauss_legendre(n, s)?);
    let blocks = cs_blocks(1, s, &grid)?;
    let (c0, c1) = (&blocks.c[0], &blocks.c[1]);
    let (s0, s1) = (&blocks.s[0], &blocks.s[1]);
    let dim = grid.len();

    let k2 = discretize(|x, y| (std::f64::consts::PI * (x - y)).cos(), &grid)?;
    let mut acc2: Mat<f64> = Mat::zeros(dim, dim);
    axpy(&mut acc2, 1.0, &(c0 * c0));
    axpy(&mut acc2, 1.0, &(s0 * s0));
    axpy(&mut acc2, -1.0, &(c0 * s1));
    axpy(&mut acc2, -1.0, &(s1 * c0));
    axpy(&mut acc2, 1.0, &(s0 * c1));
    axpy(&mut acc2, 1.0, &(c1 * s0));

    let k3 = discretize(|x, y| (std::f64::consts::PI * (x + y)).cos(), &grid)?;
    let mut acc3: Mat<f64> = Mat::zeros(dim, dim);
    axpy(&mut acc3, 1.0, &(c0 * c0));
    axpy(&mut acc3, -1.0, &(s0 * s0));
    axpy(&mut acc3, -1.0, &(c0 * s1));
    axpy(&mut acc3, -1.0, &(s1 * c0));
    axpy(&mut acc3, -1.0, &(s0 * c1));
    axpy(&mut acc3, -1.0, &(c1 * s0));

    Ok((
        max_abs_diff(k2.matrix(), &acc2),
        max_abs_diff(k3.matrix(), &acc3),
    ))
}

/// Measured two sides of ‖AB‖₁ ≤ ‖A‖₂‖B‖₂ for a pair of operators.
pub fn cauchy_schwarz_check(
    a: &DiscretizedOperator,
    b: &DiscretizedOperator,
) -> Result<(f64, f64)> {
    let lhs = a.compose(b)?.trace_norm()?;
    Ok((lhs, a.hs_norm() * b.hs_norm()))
}

/// Closed-form trace-norm bound for the degree-(2k+1) block:
/// 8s(2πs)^{2k+1} (2πs/(4k+5) + (2k+2)/(4k+3)).
pub fn a_trace_norm_bound(k: u32, s: f64) -> f64 {
    let kf = k as f64;
    let two_pi_s = std::f64::consts::TAU * s;
    8.0 * s
        * two_pi_s.powi(2 * k as i32 + 1)
        * (two_pi_s / (4.0 * kf + 5.0) + (2.0 * kf + 2.0) / (4.0 * kf + 3.0))
}

/// Trace norm of the A operator against [`a_trace_norm_bound`].
pub fn a_norm_bound_check(k: u32, s: f64) -> Result<(f64, f64)> {
    let grid = Arc::new(gauss_legendre(DEFAULT_GRID_SIZE, s)?);
    let measured = discretize(|x, y| a_kernel(k, x, y), &grid)?.trace_norm()?;
    let bound = a_trace_norm_bound(k, s);
    Ok((measured, bound))
}

/// HS norms of C_j and S_j against the shared bound √(2s)(πs)^j/(2j+1).
pub fn cs_block_bound_check(j: u32, s: f64) -> Result<(f64, f64, f64)> {
    let grid = gauss_legendre(DEFAULT_GRID_SIZE, s)?;
    let c = hs_norm_kernel(|x, y| cj_kernel(j, s, x, y), &grid);
    let sn = hs_norm_kernel(|x, y| sj_kernel(j, s, x, y), &grid);
    let bound = (2.0 * s).sqrt() * (std::f64::consts::PI * s).powi(j as i32) / (2.0 * j as f64 + 1.0);
    Ok((c, sn, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{EnsembleId, Scaling};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn tiny_rules_have_known_nodes() {
        let g1 = gauss_legendre(1, 2.5).unwrap();
        assert_eq!(g1.nodes(), &[0.0]);
        assert_eq!(g1.weights(), &[5.0]);
        let g2 = gauss_legendre(2, 1.0).unwrap();
        assert_relative_eq!(g2.nodes()[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(g2.weights()[0], 1.0, max_relative = 1e-15);
        assert!(gauss_legendre(0, 1.0).is_err());
        assert!(gauss_legendre(4, -1.0).is_err());
    }

    #[test]
    fn quadrature_is_exact_on_polynomials() {
        let s = 1.3;
        let grid = gauss_legendre(5, s).unwrap();
        for k in 0..=9u32 {
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 * s.powi(k as i32 + 1) / (k as f64 + 1.0)
            };
            let got = grid.integrate(|x| x.powi(k as i32));
            assert_relative_eq!(got, exact, max_relative = 1e-13, epsilon = 1e-13);
        }
    }

    #[test]
    fn weights_are_positive_and_nodes_interior() {
        let grid = gauss_legendre(80, 0.5).unwrap();
        assert!(grid.weights().iter().all(|&w| w > 0.0));
        assert!(grid.nodes().iter().all(|&x| x.abs() < 0.5));
    }

    #[test]
    fn trace_matches_diagonal_integral() {
        let grid = Arc::new(gauss_legendre(60, 0.5).unwrap());
        let spec = KernelSpec::new(EnsembleId::Sine, 0, Scaling::Bulk).unwrap();
        let op = discretize_spec(&spec, &grid).unwrap();
        assert_relative_eq!(op.trace(), 1.0, max_relative = 1e-13);
        let bulk = KernelSpec::bulk(EnsembleId::U, 32).unwrap();
        let op = discretize_spec(&bulk, &grid).unwrap();
        assert_relative_eq!(op.trace(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn constant_kernel_is_rank_one() {
        let s = 0.75;
        let grid = Arc::new(gauss_legendre(40, s).unwrap());
        let op = discretize(|_, _| 1.0, &grid).unwrap();
        assert_relative_eq!(op.trace_norm().unwrap(), 2.0 * s, max_relative = 1e-12);
        assert_relative_eq!(op.hs_norm(), 2.0 * s, max_relative = 1e-13);
        let eigs = op.symmetric_eigenvalues().unwrap();
        let big: Vec<&f64> = eigs.iter().filter(|e| e.abs() > 1e-10).collect();
        assert_eq!(big.len(), 1);
        assert_relative_eq!(*big[0], 2.0 * s, max_relative = 1e-12);
    }

    #[test]
    fn composition_matches_closed_form_integral() {
        // ∫_{-1}^{1} cos(xt)cos(ty) dt = sin(x-y)/(x-y) + sin(x+y)/(x+y)
        let grid = Arc::new(gauss_legendre(80, 1.0).unwrap());
        let m = discretize(|x, y| (x * y).cos(), &grid).unwrap();
        let mm = m.compose(&m).unwrap();
        let sincu = |t: f64| if t.abs() < 1e-8 { 1.0 } else { t.sin() / t };
        for (i, (&xi, &wi)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
            for (j, (&xj, &wj)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
                let expected = (wi * wj).sqrt() * (sincu(xi - xj) + sincu(xi + xj));
                assert!(
                    (mm.matrix()[(i, j)] - expected).abs() < 1e-9,
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        let grid = Arc::new(gauss_legendre(30, 1.0).unwrap());
        let a = discretize(|x, y| cj_kernel(0, 1.0, x, y), &grid).unwrap();
        let b = discretize(|x, y| sj_kernel(1, 1.0, x, y), &grid).unwrap();
        let c = discretize(sine_kernel, &grid).unwrap();
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert!(max_abs_diff(left.matrix(), right.matrix()) < 1e-13);
    }

    #[test]
    fn compose_rejects_mismatched_grids() {
        let g1 = Arc::new(gauss_legendre(20, 1.0).unwrap());
        let g2 = Arc::new(gauss_legendre(21, 1.0).unwrap());
        let a = discretize(sine_kernel, &g1).unwrap();
        let b = discretize(sine_kernel, &g2).unwrap();
        assert!(matches!(
            a.compose(&b),
            Err(Error::GridMismatch { left: 20, right: 21 })
        ));
    }

    #[test]
    fn discretize_rejects_non_finite_kernels() {
        let grid = Arc::new(gauss_legendre(10, 1.0).unwrap());
        let err = discretize(|x, y| 1.0 / (x - y), &grid).unwrap_err();
        assert!(matches!(err, Error::NonFiniteKernel { .. }));
    }

    #[test]
    fn hs_norm_two_routes_agree() {
        let grid = Arc::new(gauss_legendre(50, 1.5).unwrap());
        let spec = KernelSpec::bulk(EnsembleId::SoOdd, 12).unwrap();
        let op = discretize_spec(&spec, &grid).unwrap();
        let direct = hs_norm_kernel(|x, y| spec.eval(x, y).unwrap(), &grid);
        assert_relative_eq!(op.hs_norm(), direct, max_relative = 1e-12);
    }

    #[test]
    fn trace_norm_triangle_and_homogeneity() {
        let grid = Arc::new(gauss_legendre(40, 1.0).unwrap());
        let a = discretize(|x, y| cj_kernel(1, 1.0, x, y), &grid).unwrap();
        let b = discretize(sine_kernel, &grid).unwrap();
        let sum_tn = a.add(&b).unwrap().trace_norm().unwrap();
        assert!(sum_tn <= a.trace_norm().unwrap() + b.trace_norm().unwrap() + 1e-9);
        for alpha in [-2.0, 0.5] {
            assert_relative_eq!(
                a.scale(alpha).trace_norm().unwrap(),
                alpha.abs() * a.trace_norm().unwrap(),
                max_relative = 1e-11
            );
        }
        assert_relative_eq!(a.scale(0.0).trace_norm().unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn restricted_ensemble_spectrum_lies_in_unit_band() {
        let grid = Arc::new(gauss_legendre(DEFAULT_GRID_SIZE, 1.0).unwrap());
        for ensemble in [EnsembleId::U, EnsembleId::Sp, EnsembleId::Sine] {
            let spec = KernelSpec::bulk(ensemble, 32).unwrap();
            let eigs = discretize_spec(&spec, &grid)
                .unwrap()
                .symmetric_eigenvalues()
                .unwrap();
            for e in eigs {
                assert!((-1e-8..=1.0 + 1e-8).contains(&e), "{ensemble}: {e}");
            }
        }
    }

    #[test]
    fn trace_norm_stable_under_grid_refinement() {
        let spec = KernelSpec::bulk(EnsembleId::SoEven, 16).unwrap();
        let coarse = Arc::new(gauss_legendre(80, 1.0).unwrap());
        let fine = Arc::new(gauss_legendre(160, 1.0).unwrap());
        let tn_c = difference_from_sine(&spec, &coarse).unwrap().trace_norm().unwrap();
        let tn_f = difference_from_sine(&spec, &fine).unwrap().trace_norm().unwrap();
        assert_relative_eq!(tn_c, tn_f, max_relative = 1e-9);
    }

    #[test]
    fn c0_block_norm_matches_sine_integral_oracle() {
        // ‖C₀‖₂² = 1 + Si(2π)/(2π) at s = 1, with Si from its power series
        let z = 2.0 * PI;
        let mut si = 0.0;
        let mut term = z;
        let mut k = 0u32;
        loop {
            si += term / (2 * k + 1) as f64;
            term *= -z * z / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
            k += 1;
            if term.abs() < 1e-18 {
                break;
            }
        }
        let oracle = (1.0 + si / (2.0 * PI)).sqrt();
        let grid = gauss_legendre(400, 1.0).unwrap();
        let measured = hs_norm_kernel(|x, y| cj_kernel(0, 1.0, x, y), &grid);
        assert_relative_eq!(measured, oracle, max_relative = 1e-10);
    }

    #[test]
    fn a_decomposition_residuals_are_small() {
        assert!(verify_decomposition_a(0, 0.5, 60, false).unwrap() < 1e-9);
        assert!(verify_decomposition_a(0, 0.5, 60, true).unwrap() < 1e-9);
        assert!(verify_decomposition_a(1, 1.0, 60, false).unwrap() < 1e-8);
    }

    #[test]
    fn k23_decomposition_residuals_are_small() {
        let (r2, r3) = verify_decomposition_k23(1.0, 60).unwrap();
        assert!(r2 < 1e-12, "K2 residual {r2}");
        assert!(r3 < 1e-12, "K3 residual {r3}");
    }

    #[test]
    fn measured_norms_respect_bounds() {
        for k in 0..=3 {
            let (measured, bound) = a_norm_bound_check(k, 1.0).unwrap();
            assert!(measured <= bound, "k={k}: {measured} > {bound}");
        }
        for j in 0..=4 {
            let (c, s, bound) = cs_block_bound_check(j, 1.0).unwrap();
            assert!(c <= bound + 1e-12, "C_{j}: {c} > {bound}");
            assert!(s <= bound + 1e-12, "S_{j}: {s} > {bound}");
        }
        let grid = Arc::new(gauss_legendre(DEFAULT_GRID_SIZE, 1.0).unwrap());
        let a = discretize(|x, y| cj_kernel(1, 1.0, x, y), &grid).unwrap();
        let b = discretize(|x, y| sj_kernel(2, 1.0, x, y), &grid).unwrap();
        let (lhs, rhs) = cauchy_schwarz_check(&a, &b).unwrap();
        assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }
}
