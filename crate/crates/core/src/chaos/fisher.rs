use crate::error::{Error, Result};
use crate::tomography::{CovarianceData, DesignMatrix};

/// Total Fisher information `J = 1 / Tr[(O~^T O~ + epsilon I)^-1]`, in units
/// where `N^2 / sigma^2 = 1`.
///
/// `epsilon` is absolute here; with no measurements `J = epsilon / (d^2 - 1)`.
pub fn fisher_information(design: &DesignMatrix, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("epsilon = {epsilon} must be > 0")));
    }
    let cov = CovarianceData::from_design(design, epsilon)?;
    let trace: f64 = cov.eigenvalues().iter().map(|g| 1.0 / (g + epsilon)).sum();
    Ok(1.0 / trace)
}

/// `J` after each of the listed kicks (record prefixes).
pub fn fisher_series(design: &DesignMatrix, epsilon: f64, kicks: &[usize]) -> Result<Vec<f64>> {
    kicks
        .iter()
        .map(|&k| fisher_information(&design.prefix(k), epsilon))
        .collect()
}
