use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dynamics::OperatorSequence;
use crate::error::{Error, Result};
use crate::linalg::{self, Operator};

/// Time series `M_k = Tr[O_k rho_0] + w_k`.
///
/// `noise_spread` is the standard deviation of `w_k` (the ratio sigma/N).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub values: Vec<f64>,
    pub noise_spread: f64,
    pub seed: u64,
}

impl MeasurementRecord {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn prefix(&self, k: usize) -> &[f64] {
        &self.values[..k.min(self.values.len())]
    }
}

pub(crate) fn check_density(rho: &Operator, dim: usize) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rho.nrows(),
        });
    }
    let defect = linalg::hermiticity_defect(rho);
    if defect > 1e-10 {
        return Err(Error::invalid(format!("density matrix is not Hermitian (defect {defect:.3e})")));
    }
    let tr = linalg::trace(rho);
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::invalid(format!("density matrix has trace {tr}")));
    }
    let min = linalg::hermitian_eigenvalues(rho)[0];
    if min < -1e-10 {
        return Err(Error::invalid(format!("density matrix has eigenvalue {min:.3e}")));
    }
    Ok(())
}

/// Noiseless expectation values `Tr[O_k rho_0]`.
pub fn expectations(rho0: &Operator, seq: &OperatorSequence) -> Vec<f64> {
    seq.ops.iter().map(|o| linalg::trace_product(o, rho0).re).collect()
}

/// Simulates the weak-measurement record of `rho0` with i.i.d. Gaussian noise.
pub fn simulate_record(
    rho0: &Operator,
    seq: &OperatorSequence,
    noise_spread: f64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if !(noise_spread >= 0.0 && noise_spread.is_finite()) {
        return Err(Error::invalid(format!("noise spread {noise_spread} must be finite and >= 0")));
    }
    check_density(rho0, seq.dim().max(rho0.nrows()))?;
    if !seq.is_empty() && seq.dim() != rho0.nrows() {
        return Err(Error::DimensionMismatch {
            expected: seq.dim(),
            found: rho0.nrows(),
        });
    }
    let clean = expectations(rho0, seq);
    Ok(add_noise(clean, noise_spread, seed))
}

/// Adds seeded Gaussian noise to precomputed expectation values.
pub fn add_noise(mut values: Vec<f64>, noise_spread: f64, seed: u64) -> MeasurementRecord {
    if noise_spread > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_spread).expect("finite positive spread");
        for v in values.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    MeasurementRecord {
        values,
        noise_spread,
        seed,
    }
}
