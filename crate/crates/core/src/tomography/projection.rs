//! Nearest physical state to the ML estimate in the `C^-1` metric.
//!
//! Minimizes `(r - r_ML)^T C^-1 (r - r_ML)` over Bloch vectors whose
//! density matrix is PSD, by accelerated projected gradient. The projection
//! step clips the spectrum of `I/d + sum r_a E_a` onto the probability
//! simplex; since the basis is orthonormal this is the Euclidean projection in
//! Bloch coordinates. Momentum restarts whenever a step would raise the
//! objective, so accepted iterates are monotone.

use nalgebra::DVector;

use super::covariance::CovarianceData;
use crate::basis::{bloch_compose, BlochVector, HermitianBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, Operator};

#[derive(Debug, Clone)]
pub struct ProjectionOptions {
    /// Stop once an accepted step lowers the objective by less than this
    /// fraction.
    pub relative_tolerance: f64,
    /// Stop once the objective falls to this fraction of its value at the
    /// maximally mixed state. Consistent noiseless records drive it to zero,
    /// where relative changes stay large.
    pub residual_tolerance: f64,
    pub max_iterations: usize,
    /// Eigenvalues above `-psd_tolerance` count as non-negative when deciding
    /// whether `r_ML` is already physical.
    pub psd_tolerance: f64,
    /// Minimize in the regularized metric `C^-1 + shift I` instead of `C^-1`.
    pub regularized_objective: bool,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions {
            relative_tolerance: 1e-9,
            residual_tolerance: 1e-12,
            max_iterations: 1_000_000,
            psd_tolerance: 1e-12,
            regularized_objective: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhysicalEstimate {
    pub r_bar: BlochVector,
    pub rho_bar: Operator,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted iterate, starting point first.
    pub objective_history: Vec<f64>,
}

/// Nearest physical point to `r_ml`, starting the descent from `r_ml`.
pub fn project_physical(
    r_ml: &BlochVector,
    cov: &CovarianceData,
    basis: &HermitianBasis,
) -> Result<PhysicalEstimate> {
    project_physical_with(r_ml, cov, basis, None, &ProjectionOptions::default())
}

/// Projection onto the density matrices, in Bloch coordinates.
///
/// Returns the projected coordinates and the density matrix.
pub fn nearest_density(y: &[f64], basis: &HermitianBasis) -> (Vec<f64>, Operator, bool) {
    let r = BlochVector {
        dim: basis.dim(),
        components: y.to_vec(),
    };
    let rho = bloch_compose(&r, basis).expect("length checked by caller");
    let (values, vectors) = linalg::hermitian_eigen(&rho);
    if values[0] >= 0.0 {
        return (y.to_vec(), rho, false);
    }
    let clipped = linalg::project_to_simplex(&values);
    let rho = linalg::from_spectrum(&clipped, &vectors);
    let coeffs = basis.coefficients(&rho).expect("dimension matches basis");
    (coeffs, rho, true)
}

struct Metric<'a> {
    cov: &'a CovarianceData,
    shift: f64,
}

impl Metric<'_> {
    fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.shift > 0.0 {
            self.cov.apply(v) + v * self.shift
        } else {
            self.cov.apply(v)
        }
    }
}

/// Full-control variant: optional warm start (any Bloch vector; it is made
/// feasible first) and solver options.
pub fn project_physical_with(
    r_ml: &BlochVector,
    cov: &CovarianceData,
    basis: &HermitianBasis,
    warm_start: Option<&BlochVector>,
    options: &ProjectionOptions,
) -> Result<PhysicalEstimate> {
    let p = basis.len();
    if r_ml.dim != basis.dim() || r_ml.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: r_ml.len(),
        });
    }
    if cov.n_params() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: cov.n_params(),
        });
    }
    let dim = basis.dim();
    let rho_ml = bloch_compose(r_ml, basis)?;
    if linalg::hermitian_eigenvalues(&rho_ml)[0] >= -options.psd_tolerance {
        return Ok(PhysicalEstimate {
            r_bar: r_ml.clone(),
            rho_bar: rho_ml,
            objective: 0.0,
            iterations: 0,
            converged: true,
            objective_history: vec![0.0],
        });
    }

    let target = DVector::from_column_slice(&r_ml.components);
    let start = warm_start
        .filter(|w| w.dim == dim && w.len() == p)
        .map_or(&r_ml.components, |w| &w.components);
    let metric = Metric {
        cov,
        shift: if options.regularized_objective { cov.shift } else { 0.0 },
    };
    let (x0, mut rho_x, _) = nearest_density(start, basis);
    let mut x = DVector::from_vec(x0);
    // ax = A (x - r) is carried along; the extrapolated point's value is the
    // same combination of the iterates' values, so each iteration applies A once
    let mut ax = metric.apply(&(&x - &target));
    let mut fx = (&x - &target).dot(&ax);
    let mut history = vec![fx];
    let floor = options.residual_tolerance * target.dot(&metric.apply(&target));

    // gradient 2 A (x - r) is Lipschitz with constant 2 lambda_max(A); the
    // regularized maximum bounds both metrics
    let step = 1.0 / (2.0 * (cov.max_eigenvalue() + cov.shift));

    let mut y = x.clone();
    let mut ay = ax.clone();
    let mut t = 1.0f64;
    let mut restarted = true;
    for iteration in 1..=options.max_iterations {
        let trial = &y - &ay * (2.0 * step);
        let (z, rho_z, _) = nearest_density(trial.as_slice(), basis);
        let z = DVector::from_vec(z);
        let az = metric.apply(&(&z - &target));
        let fz = (&z - &target).dot(&az);
        if fz <= fx {
            let decrease = fx - fz;
            let f_prev = fx;
            let x_prev = std::mem::replace(&mut x, z);
            let ax_prev = std::mem::replace(&mut ax, az);
            fx = fz;
            rho_x = rho_z;
            history.push(fx);
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let momentum = (t - 1.0) / t_next;
            y = &x + (&x - &x_prev) * momentum;
            ay = &ax + (&ax - &ax_prev) * momentum;
            t = t_next;
            restarted = false;
            if decrease <= options.relative_tolerance * f_prev || fx <= floor {
                return Ok(finish(x, rho_x, fx, iteration, true, history, dim));
            }
        } else if restarted {
            // a plain projected-gradient step from x failed to descend:
            // x is stationary to working precision
            return Ok(finish(x, rho_x, fx, iteration, true, history, dim));
        } else {
            y = x.clone();
            ay = ax.clone();
            t = 1.0;
            restarted = true;
        }
    }
    let best = finish(x, rho_x, fx, options.max_iterations, false, history, dim);
    Err(Error::NotConverged { best: Box::new(best) })
}

fn finish(
    x: DVector<f64>,
    rho: Operator,
    objective: f64,
    iterations: usize,
    converged: bool,
    objective_history: Vec<f64>,
    dim: usize,
) -> PhysicalEstimate {
    PhysicalEstimate {
        r_bar: BlochVector {
            dim,
            components: x.iter().copied().collect(),
        },
        rho_bar: rho,
        objective,
        iterations,
        converged,
        objective_history,
    }
}
