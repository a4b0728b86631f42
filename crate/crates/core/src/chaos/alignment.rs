use nalgebra::DMatrix;

use crate::basis::BlochVector;
use crate::error::{Error, Result};
use crate::tomography::DesignMatrix;

/// `S~_{k alpha} = r_alpha O~_{k alpha}` and `Tr[S~^T S~]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentMatrix {
    pub s_tilde: DMatrix<f64>,
    pub trace_t: f64,
}

/// Alignment matrix of the full design and the cumulative trace after each
/// kick; `series[k]` uses the first `k` rows, so `series[0] = 0`.
pub fn alignment_trace(
    design: &DesignMatrix,
    r_true: &BlochVector,
) -> Result<(AlignmentMatrix, Vec<f64>)> {
    if r_true.dim != design.dim || r_true.len() != design.n_params() {
        return Err(Error::invalid(format!(
            "Bloch vector of length {} does not match a design with {} columns",
            r_true.len(),
            design.n_params()
        )));
    }
    let mut s_tilde = design.rows.clone();
    for (mut col, &r) in s_tilde.column_iter_mut().zip(&r_true.components) {
        col *= r;
    }
    let mut series = Vec::with_capacity(s_tilde.nrows() + 1);
    let mut total = 0.0;
    series.push(total);
    for row in s_tilde.row_iter() {
        total += row.norm_squared();
        series.push(total);
    }
    Ok((AlignmentMatrix { s_tilde, trace_t: total }, series))
}
