//! Inverse covariance `C^-1 = O~^T O~`, its pseudo-inverse, and the
//! maximum-likelihood Bloch vector.
//!
//! With fewer kicks than parameters the spectrum is taken from the small Gram
//! matrix `O~ O~^T`, whose nonzero eigenvalues coincide with those of `C^-1`.

use nalgebra::{DMatrix, DVector};

use super::design::DesignMatrix;
use super::record::MeasurementRecord;
use crate::basis::BlochVector;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;

/// Singular values of `C^-1` below this fraction of the largest are dropped.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone)]
enum Spectrum {
    /// Eigenpairs of `O~ O~^T` (`n x n`), used when `n <= p`.
    Gram { values: Vec<f64>, vectors: DMatrix<f64> },
    /// Eigenpairs of `O~^T O~` (`p x p`), used when `n > p`.
    Normal {
        c_inv: DMatrix<f64>,
        values: Vec<f64>,
        vectors: DMatrix<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct CovarianceData {
    design: DesignMatrix,
    spectrum: Spectrum,
    /// Relative regularization strength.
    pub epsilon: f64,
    /// Absolute shift `epsilon * mean diag(C^-1)` added in the projection metric.
    pub shift: f64,
    /// Numerical rank of `C^-1`.
    pub rank: usize,
    max_eigenvalue: f64,
}

impl CovarianceData {
    pub fn from_design(design: &DesignMatrix, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon = {epsilon} must be > 0")));
        }
        let n = design.n_rows();
        let p = design.n_params();
        let spectrum = if n == 0 {
            Spectrum::Gram {
                values: Vec::new(),
                vectors: DMatrix::zeros(0, 0),
            }
        } else if n <= p {
            let gram = &design.rows * design.rows.transpose();
            let (values, vectors) = symmetric_eigen(gram);
            Spectrum::Gram { values, vectors }
        } else {
            let c_inv = design.rows.transpose() * &design.rows;
            let (values, vectors) = symmetric_eigen(c_inv.clone());
            Spectrum::Normal { c_inv, values, vectors }
        };
        let values = match &spectrum {
            Spectrum::Gram { values, .. } | Spectrum::Normal { values, .. } => values,
        };
        let max_eigenvalue = values.last().copied().unwrap_or(0.0).max(0.0);
        let cutoff = PINV_RELATIVE_CUTOFF * max_eigenvalue;
        let rank = if max_eigenvalue > 0.0 {
            values.iter().filter(|&&v| v > cutoff).count()
        } else {
            0
        };
        let trace: f64 = design.rows.iter().map(|x| x * x).sum();
        let mean_diag = trace / p as f64;
        let shift = if mean_diag > 0.0 { epsilon * mean_diag } else { epsilon };
        Ok(CovarianceData {
            design: design.clone(),
            spectrum,
            epsilon,
            shift,
            rank,
            max_eigenvalue,
        })
    }

    pub fn design(&self) -> &DesignMatrix {
        &self.design
    }

    pub fn n_params(&self) -> usize {
        self.design.n_params()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.max_eigenvalue
    }

    /// All `p` eigenvalues of `C^-1`, ascending, zeros included.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let p = self.n_params();
        match &self.spectrum {
            Spectrum::Gram { values, .. } => {
                let mut all = vec![0.0; p - values.len()];
                all.extend(values.iter().map(|v| v.max(0.0)));
                all.sort_by(f64::total_cmp);
                all
            }
            Spectrum::Normal { values, .. } => values.iter().map(|v| v.max(0.0)).collect(),
        }
    }

    /// Dense `C^-1 = O~^T O~`.
    pub fn c_inv(&self) -> DMatrix<f64> {
        match &self.spectrum {
            Spectrum::Normal { c_inv, .. } => c_inv.clone(),
            Spectrum::Gram { .. } => self.design.rows.transpose() * &self.design.rows,
        }
    }

    /// `C^-1 v`.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.spectrum {
            Spectrum::Normal { c_inv, .. } => c_inv * v,
            Spectrum::Gram { .. } => {
                if self.design.n_rows() == 0 {
                    return DVector::zeros(v.len());
                }
                self.design.rows.tr_mul(&(&self.design.rows * v))
            }
        }
    }

    /// `(C^-1 + shift I) v`.
    pub fn apply_metric(&self, v: &DVector<f64>) -> DVector<f64> {
        self.apply(v) + v * self.shift
    }

    /// `pinv(C^-1) O~^T m`.
    pub fn ml_estimate(&self, m: &[f64]) -> Result<DVector<f64>> {
        let n = self.design.n_rows();
        if m.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.len(),
            });
        }
        let p = self.n_params();
        let cutoff = PINV_RELATIVE_CUTOFF * self.max_eigenvalue;
        let m = DVector::from_column_slice(m);
        match &self.spectrum {
            Spectrum::Gram { values, vectors } => {
                if n == 0 {
                    return Ok(DVector::zeros(p));
                }
                // O~^T V diag(1/g) V^T m over retained g
                let mut coeffs = vectors.tr_mul(&m);
                for (k, &g) in values.iter().enumerate() {
                    coeffs[k] = if g > cutoff { coeffs[k] / g } else { 0.0 };
                }
                let y = vectors * coeffs;
                Ok(self.design.rows.tr_mul(&y))
            }
            Spectrum::Normal { values, vectors, .. } => {
                let rhs = self.design.rows.tr_mul(&m);
                let mut coeffs = vectors.tr_mul(&rhs);
                for (k, &g) in values.iter().enumerate() {
                    coeffs[k] = if g > cutoff { coeffs[k] / g } else { 0.0 };
                }
                Ok(vectors * coeffs)
            }
        }
    }
}

/// Least-squares Bloch vector `r_ML = pinv(O~^T O~) O~^T M`.
pub fn ml_estimate(design: &DesignMatrix, record: &MeasurementRecord) -> Result<BlochVector> {
    if record.is_empty() {
        return Err(Error::invalid("measurement record is empty"));
    }
    let cov = CovarianceData::from_design(design, 1e-3)?;
    let r = cov.ml_estimate(&record.values)?;
    BlochVector::new(design.dim, r.iter().copied().collect())
}
