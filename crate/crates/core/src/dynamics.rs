//! Kicked-top Floquet map and Heisenberg-picture observable sequences.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, hermiticity_defect, Operator};
use crate::spin::{unitary_from_generator, AngularMomentum, Spin};

/// One period of the kicked top, `exp(-i lambda/(2j) Jz^2) exp(-i alpha Jx)`.
///
/// Time is measured in kicks, so the period is fixed to one.
#[derive(Debug, Clone)]
pub struct FloquetMap {
    pub spin: Spin,
    pub alpha: f64,
    pub lambda: f64,
    pub u: Operator,
}

pub fn build_floquet_map(j: f64, alpha: f64, lambda: f64) -> Result<FloquetMap> {
    FloquetMap::new(&AngularMomentum::new(Spin::new(j)?), alpha, lambda)
}

impl FloquetMap {
    pub fn new(am: &AngularMomentum, alpha: f64, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda = {lambda} must be finite and >= 0")));
        }
        if !alpha.is_finite() {
            return Err(Error::invalid("alpha must be finite"));
        }
        let spin = am.spin;
        let precession = unitary_from_generator(&am.jx, alpha)?;
        let strength = lambda / (2.0 * spin.j());
        // Jz^2 is diagonal: scale row i by exp(-i strength m_i^2)
        let mut u = precession;
        for i in 0..spin.dim() {
            let m = spin.m(i);
            let phase = Complex64::from_polar(1.0, -strength * m * m);
            u.row_mut(i).iter_mut().for_each(|z| *z *= phase);
        }
        Ok(FloquetMap { spin, alpha, lambda, u })
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// `u^dagger O u`, re-symmetrized.
    pub fn conjugate(&self, o: &Operator) -> Operator {
        let mut next = self.u.adjoint() * o * &self.u;
        linalg::symmetrize(&mut next);
        next
    }
}

/// Where an [`OperatorSequence`] came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceProvenance {
    pub observable: String,
    pub j: f64,
    pub alpha: f64,
    pub lambda: f64,
}

/// `O_k = (u^dagger)^k O_0 u^k` for `k = 0..n`.
#[derive(Debug, Clone)]
pub struct OperatorSequence {
    pub ops: Vec<Operator>,
    pub provenance: SequenceProvenance,
}

impl OperatorSequence {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops.first().map_or(0, |o| o.nrows())
    }
}

/// Generates `n` Heisenberg-evolved copies of `o0`, starting with `o0` itself.
pub fn heisenberg_sequence(map: &FloquetMap, o0: &Operator, n: usize) -> Result<OperatorSequence> {
    heisenberg_sequence_labeled(map, o0, n, "O0")
}

pub fn heisenberg_sequence_labeled(
    map: &FloquetMap,
    o0: &Operator,
    n: usize,
    label: &str,
) -> Result<OperatorSequence> {
    if o0.nrows() != map.dim() || o0.ncols() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: o0.nrows(),
        });
    }
    let defect = hermiticity_defect(o0);
    if defect > 1e-10 {
        return Err(Error::invalid(format!("initial observable is not Hermitian (defect {defect:.3e})")));
    }
    let mut ops = Vec::with_capacity(n);
    if n > 0 {
        let mut first = o0.clone();
        linalg::symmetrize(&mut first);
        ops.push(first);
    }
    while ops.len() < n {
        let next = map.conjugate(ops.last().expect("non-empty"));
        ops.push(next);
    }
    Ok(OperatorSequence {
        ops,
        provenance: SequenceProvenance {
            observable: label.to_string(),
            j: map.spin.j(),
            alpha: map.alpha,
            lambda: map.lambda,
        },
    })
}
