//! Weak-measurement record simulation and state reconstruction.

mod covariance;
mod design;
mod metrics;
mod projection;
mod record;

pub use covariance::{ml_estimate, CovarianceData, PINV_RELATIVE_CUTOFF};
pub use design::{design_matrix, DesignMatrix};
pub use metrics::{reconstruction_metrics, ReconstructionMetrics};
pub use projection::{
    nearest_density, project_physical, project_physical_with, PhysicalEstimate, ProjectionOptions,
};
pub use record::{add_noise, expectations, simulate_record, MeasurementRecord};

use crate::basis::{BlochVector, HermitianBasis};
use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::spin::PureState;

/// Reconstruction quality after a given number of kicks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMetrics {
    pub kick: usize,
    pub fidelity: f64,
    pub hs_distance: f64,
}

/// Final estimates plus the per-kick history that led to them.
#[derive(Debug, Clone)]
pub struct TomographyResult {
    pub r_ml: BlochVector,
    pub r_bar: BlochVector,
    pub rho_bar: Operator,
    pub fidelity: f64,
    pub hs_distance: f64,
    pub history: Vec<StepMetrics>,
}

#[derive(Debug, Clone)]
pub struct ReconstructionSettings {
    pub epsilon: f64,
    pub projection: ProjectionOptions,
    /// Start each projection from the previous kick's physical estimate.
    pub warm_start: bool,
}

impl Default for ReconstructionSettings {
    fn default() -> Self {
        ReconstructionSettings {
            epsilon: 1e-3,
            projection: ProjectionOptions::default(),
            warm_start: true,
        }
    }
}

/// Reconstructs `psi0` from each record at each kick in `kicks`.
///
/// The estimate at kick `k` sees exactly the first `k` record entries. All
/// records share `design`, so covariance work is done once per kick. Returns
/// one result per record.
pub fn reconstruct_records(
    psi0: &PureState,
    design: &DesignMatrix,
    records: &[MeasurementRecord],
    basis: &HermitianBasis,
    kicks: &[usize],
    settings: &ReconstructionSettings,
) -> Result<Vec<TomographyResult>> {
    if design.dim != basis.dim() || psi0.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: design.dim,
        });
    }
    if let Some(rec) = records.iter().find(|r| r.len() != design.n_rows()) {
        return Err(Error::DimensionMismatch {
            expected: design.n_rows(),
            found: rec.len(),
        });
    }
    if kicks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("kicks must be strictly increasing"));
    }
    if let Some(&last) = kicks.last() {
        if last > design.n_rows() {
            return Err(Error::invalid(format!(
                "kick {last} exceeds the record length {}",
                design.n_rows()
            )));
        }
    }
    let dim = basis.dim();
    let mut state: Vec<Option<TomographyResult>> = vec![None; records.len()];
    for &kick in kicks {
        let prefix = design.prefix(kick);
        let cov = CovarianceData::from_design(&prefix, settings.epsilon)?;
        for (index, (slot, record)) in state.iter_mut().zip(records).enumerate() {
            let r_ml = BlochVector::new(dim, cov.ml_estimate(record.prefix(kick))?.iter().copied().collect())?;
            let warm = if settings.warm_start {
                slot.as_ref().map(|s| &s.r_bar)
            } else {
                None
            };
            let physical = project_physical_with(&r_ml, &cov, basis, warm, &settings.projection)
                .map_err(|e| Error::Task {
                    context: format!("record {index}, kick {kick}"),
                    source: Box::new(e),
                })?;
            let m = reconstruction_metrics(psi0, &physical.rho_bar)?;
            let mut history = slot.take().map(|s| s.history).unwrap_or_default();
            history.push(StepMetrics {
                kick,
                fidelity: m.fidelity,
                hs_distance: m.hs_distance,
            });
            *slot = Some(TomographyResult {
                r_ml,
                r_bar: physical.r_bar,
                rho_bar: physical.rho_bar,
                fidelity: m.fidelity,
                hs_distance: m.hs_distance,
                history,
            });
        }
    }
    state
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::invalid("no kicks requested")))
        .collect()
}
