//! Husimi Q function and Husimi (Wehrl) entropy of regularized operators.
//!
//! The sphere is integrated with Gauss-Legendre nodes in `cos(theta)` times
//! a uniform rule in `phi`. Q of a `(2j+1)`-dimensional operator is a
//! trigonometric polynomial in `phi` of degree at most `2j`, which the
//! entropy evaluator exploits: per latitude it collects the `phi` Fourier
//! coefficients once, then sums them at every longitude.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Operator};
use crate::spin::{coherent_amplitudes, Spin};

/// Nodes and weights of Gauss-Legendre quadrature on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            deriv = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        deriv = if dp != 0.0 { dp } else { deriv };
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNode {
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

/// Product quadrature covering the sphere, weights summing to `4 pi`.
#[derive(Debug, Clone)]
pub struct PhaseSpaceGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    thetas: Vec<f64>,
    theta_weights: Vec<f64>,
}

impl PhaseSpaceGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::invalid("quadrature needs at least one node per axis"));
        }
        let (xs, ws) = gauss_legendre(n_theta);
        Ok(PhaseSpaceGrid {
            n_theta,
            n_phi,
            thetas: xs.iter().map(|x| x.clamp(-1.0, 1.0).acos()).collect(),
            theta_weights: ws,
        })
    }

    /// `2j + 21` latitudes and `4j + 41` longitudes.
    pub fn for_spin(spin: Spin) -> Self {
        let twice = spin.twice_j() as usize;
        PhaseSpaceGrid::new(twice + 21, 2 * twice + 41).expect("positive sizes")
    }

    /// Spherical polynomials up to this degree integrate exactly.
    pub fn degree(&self) -> usize {
        (2 * self.n_theta - 1).min(self.n_phi - 1)
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_phi as f64
    }

    fn phi_weight(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = GridNode> + '_ {
        let wphi = self.phi_weight();
        self.thetas.iter().zip(&self.theta_weights).flat_map(move |(&theta, &wt)| {
            (0..self.n_phi).map(move |k| GridNode {
                theta,
                phi: self.phi(k),
                weight: wt * wphi,
            })
        })
    }

    /// Integral of `f(theta, phi)` over the sphere.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.nodes().map(|n| n.weight * f(n.theta, n.phi)).sum()
    }
}

/// Positive operator with the eigenvectors of `o` and eigenvalues `|lambda|`,
/// normalized to unit trace.
pub fn regularize_observable(o: &Operator) -> Result<Operator> {
    let defect = linalg::hermiticity_defect(o);
    if defect > 1e-10 {
        return Err(Error::invalid(format!("observable is not Hermitian (defect {defect:.3e})")));
    }
    let (values, vectors) = linalg::hermitian_eigen(o);
    let total: f64 = values.iter().map(|v| v.abs()).sum();
    if !(total > 0.0) {
        return Err(Error::invalid("cannot regularize the zero operator"));
    }
    let scaled: Vec<f64> = values.iter().map(|v| v.abs() / total).collect();
    Ok(linalg::from_spectrum(&scaled, &vectors))
}

fn check_density_like(o: &Operator) -> Result<Spin> {
    let spin = Spin::from_dim(o.nrows())?;
    if o.ncols() != o.nrows() {
        return Err(Error::invalid("operator is not square"));
    }
    if linalg::hermiticity_defect(o) > 1e-10 {
        return Err(Error::invalid("operator is not Hermitian"));
    }
    let tr = linalg::trace(o).re;
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("operator has trace {tr}, expected 1")));
    }
    let min = linalg::hermitian_eigenvalues(o)[0];
    if min < -1e-10 {
        return Err(Error::invalid(format!("operator has negative eigenvalue {min:.3e}")));
    }
    Ok(spin)
}

/// `Q(theta, phi) = <theta, phi| O |theta, phi>` for PSD unit-trace `O`.
pub fn husimi_q(o: &Operator, theta: f64, phi: f64) -> Result<f64> {
    let spin = check_density_like(o)?;
    let v = coherent_amplitudes(spin, theta, phi);
    Ok(v.dotc(&(o * &v)).re.clamp(0.0, 1.0))
}

/// Floor applied to Q before taking the logarithm.
const Q_FLOOR: f64 = 1e-300;

/// `-(2j+1)/(4 pi) * integral Q ln Q` on `grid`.
pub fn husimi_entropy(o: &Operator, grid: &PhaseSpaceGrid) -> Result<f64> {
    let spin = check_density_like(o)?;
    let twice = spin.twice_j() as usize;
    let required = 2 * twice + 2;
    if grid.degree() < required {
        return Err(Error::DegreeInsufficient {
            degree: grid.degree(),
            required,
        });
    }
    let d = spin.dim();
    let wphi = grid.phi_weight();
    let mut total = 0.0;
    let mut fourier = vec![Complex64::new(0.0, 0.0); d];
    let phases: Vec<Vec<Complex64>> = (0..grid.n_phi)
        .map(|k| {
            let phi = grid.phi(k);
            (0..d).map(|delta| Complex64::from_polar(1.0, delta as f64 * phi)).collect()
        })
        .collect();
    for (&theta, &wt) in grid.thetas.iter().zip(&grid.theta_weights) {
        // real amplitudes at phi = 0
        let a: Vec<f64> = coherent_amplitudes(spin, theta, 0.0).iter().map(|z| z.re).collect();
        for (delta, slot) in fourier.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..(d - delta) {
                acc += o[(k, k + delta)] * (a[k] * a[k + delta]);
            }
            *slot = acc;
        }
        let mut ring = 0.0;
        for phase in &phases {
            let mut q = fourier[0].re;
            for delta in 1..d {
                q += 2.0 * (fourier[delta] * phase[delta]).re;
            }
            let q = q.max(Q_FLOOR);
            ring -= q * q.ln();
        }
        total += wt * wphi * ring;
    }
    Ok(total * d as f64 / (4.0 * PI))
}
