use crate::error::{Error, Result};
use crate::linalg::{self, Operator};
use crate::spin::PureState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionMetrics {
    /// `<psi0| rho_bar |psi0>`
    pub fidelity: f64,
    /// `Tr[(|psi0><psi0| - rho_bar)^2]`
    pub hs_distance: f64,
}

pub fn reconstruction_metrics(psi0: &PureState, rho_bar: &Operator) -> Result<ReconstructionMetrics> {
    let d = psi0.dim();
    if rho_bar.nrows() != d || rho_bar.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho_bar.nrows(),
        });
    }
    let overlap = psi0.expectation(rho_bar);
    if overlap.im.abs() > 1e-10 {
        return Err(Error::invalid(format!("fidelity has imaginary part {:.3e}", overlap.im)));
    }
    let mut fidelity = overlap.re;
    if (-1e-9..0.0).contains(&fidelity) {
        fidelity = 0.0;
    } else if fidelity > 1.0 && fidelity <= 1.0 + 1e-9 {
        fidelity = 1.0;
    }
    let diff = psi0.projector() - rho_bar;
    let hs_distance = linalg::trace_product(&diff, &diff).re;
    Ok(ReconstructionMetrics { fidelity, hs_distance })
}
