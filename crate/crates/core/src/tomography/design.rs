use nalgebra::DMatrix;

use crate::basis::HermitianBasis;
use crate::dynamics::OperatorSequence;
use crate::error::{Error, Result};

/// `n x (d^2 - 1)` overlaps `Tr[O_k E_alpha]`, one row per kick.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    /// Hilbert-space dimension of the basis the columns refer to.
    pub dim: usize,
    pub rows: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn new(dim: usize, rows: DMatrix<f64>) -> Result<Self> {
        if rows.ncols() + 1 != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim - 1,
                found: rows.ncols(),
            });
        }
        Ok(DesignMatrix { dim, rows })
    }

    pub fn empty(dim: usize) -> Self {
        DesignMatrix {
            dim,
            rows: DMatrix::zeros(0, dim * dim - 1),
        }
    }

    /// Rows are the standard unit vectors `e_alpha` for the listed indices,
    /// i.e. the record of measuring those basis elements directly.
    pub fn unit_rows(dim: usize, indices: &[usize]) -> Result<Self> {
        let p = dim * dim - 1;
        let mut rows = DMatrix::zeros(indices.len(), p);
        for (k, &alpha) in indices.iter().enumerate() {
            if alpha >= p {
                return Err(Error::invalid(format!("basis index {alpha} out of range {p}")));
            }
            rows[(k, alpha)] = 1.0;
        }
        Ok(DesignMatrix { dim, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn n_params(&self) -> usize {
        self.rows.ncols()
    }

    /// The first `k` rows.
    pub fn prefix(&self, k: usize) -> DesignMatrix {
        let k = k.min(self.n_rows());
        DesignMatrix {
            dim: self.dim,
            rows: self.rows.rows(0, k).into_owned(),
        }
    }

    /// Rows reordered so that new row `i` is old row `order[i]`.
    pub fn permute_rows(&self, order: &[usize]) -> DesignMatrix {
        let p = self.n_params();
        let rows = DMatrix::from_fn(order.len(), p, |i, a| self.rows[(order[i], a)]);
        DesignMatrix { dim: self.dim, rows }
    }
}

/// Builds the design matrix of an observable sequence in `basis`.
pub fn design_matrix(seq: &OperatorSequence, basis: &HermitianBasis) -> Result<DesignMatrix> {
    let p = basis.len();
    if !seq.is_empty() && seq.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: seq.dim(),
        });
    }
    let mut rows = DMatrix::zeros(seq.len(), p);
    for (k, op) in seq.ops.iter().enumerate() {
        let scale = op.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        for alpha in 0..p {
            let t = basis.trace_with(alpha, op);
            if t.im.abs() > 1e-12 * scale {
                return Err(Error::invalid(format!(
                    "Tr[O_{k} E_{alpha}] has imaginary part {:.3e}",
                    t.im
                )));
            }
            rows[(k, alpha)] = t.re;
        }
    }
    Ok(DesignMatrix { dim: basis.dim(), rows })
}
