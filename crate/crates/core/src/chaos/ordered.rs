use crate::basis::{bloch_decompose, HermitianBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, Operator};
use crate::spin::PureState;
use crate::tomography::{
    reconstruct_records, DesignMatrix, MeasurementRecord, ReconstructionSettings,
};

/// Order in which basis elements are measured, by `|r_alpha|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Descending,
    Ascending,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderedStep {
    /// Number of basis elements measured so far.
    pub k: usize,
    /// `1/d + sum_{i <= k} r_(i)^2`
    pub bloch_value: f64,
    pub fidelity: f64,
}

/// Measurement order of the basis for `rho0`; ties keep canonical order.
pub fn measurement_order(rho0: &Operator, basis: &HermitianBasis, order: Order) -> Result<Vec<usize>> {
    let r = bloch_decompose(rho0, basis)?;
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    // sort_by is stable, so equal magnitudes stay in index order
    idx.sort_by(|&a, &b| {
        let (x, y) = (r.components[a].abs(), r.components[b].abs());
        match order {
            Order::Descending => y.total_cmp(&x),
            Order::Ascending => x.total_cmp(&y),
        }
    });
    Ok(idx)
}

/// Measures basis elements one at a time, noiselessly, in the given order and
/// reconstructs after each step. Returns steps `k = 0..=d^2-1`.
pub fn ordered_basis_experiment(
    rho0: &Operator,
    basis: &HermitianBasis,
    order: Order,
) -> Result<Vec<OrderedStep>> {
    ordered_basis_experiment_with(rho0, basis, order, &ReconstructionSettings::default())
}

pub fn ordered_basis_experiment_with(
    rho0: &Operator,
    basis: &HermitianBasis,
    order: Order,
    settings: &ReconstructionSettings,
) -> Result<Vec<OrderedStep>> {
    let d = basis.dim();
    let r = bloch_decompose(rho0, basis)?;
    let purity = linalg::trace_product(rho0, rho0).re;
    if (purity - 1.0).abs() > 1e-8 {
        return Err(Error::invalid(format!(
            "ordered-basis experiment needs a pure state, Tr[rho^2] = {purity}"
        )));
    }
    let (values, vectors) = linalg::hermitian_eigen(rho0);
    debug_assert!(values[d - 1] > 0.5);
    let psi0 = PureState::new(vectors.column(d - 1).into_owned())?;

    let idx = measurement_order(rho0, basis, order)?;
    let design = DesignMatrix::unit_rows(d, &idx)?;
    let record = MeasurementRecord {
        values: idx.iter().map(|&a| r.components[a]).collect(),
        noise_spread: 0.0,
        seed: 0,
    };
    let kicks: Vec<usize> = (0..=idx.len()).collect();
    let result = reconstruct_records(&psi0, &design, &[record], basis, &kicks, settings)?;
    let mut bloch_value = 1.0 / d as f64;
    let mut steps = Vec::with_capacity(kicks.len());
    for step in &result[0].history {
        if step.kick > 0 {
            bloch_value += r.components[idx[step.kick - 1]].powi(2);
        }
        steps.push(OrderedStep {
            k: step.kick,
            bloch_value,
            fidelity: step.fidelity,
        });
    }
    Ok(steps)
}
