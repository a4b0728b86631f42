//! Orthonormal traceless Hermitian basis (generalized Gell-Mann matrices)
//! and Bloch-vector coordinates.
//!
//! Elements are ordered: symmetric pairs `(k, l)` with `k < l` in row-major
//! order, then antisymmetric pairs in the same order, then diagonal elements
//! of increasing rank. Each is normalized to `Tr[E_a E_b] = delta_ab`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, Operator, I};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// One basis element, stored by its sparsity pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisElement {
    /// `(|k><l| + |l><k|) / sqrt 2`
    Symmetric { k: usize, l: usize },
    /// `(-i|k><l| + i|l><k|) / sqrt 2`
    Antisymmetric { k: usize, l: usize },
    /// `(sum_{k<l} |k><k| - l |l><l|) / sqrt(l (l + 1))`, `1 <= l < d`
    Diagonal { l: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<BasisElement>,
}

/// Builds the canonical basis of `d^2 - 1` elements.
pub fn build_traceless_basis(d: usize) -> Result<HermitianBasis> {
    if d < 2 {
        return Err(Error::invalid(format!("basis dimension {d} is below 2")));
    }
    let mut elements = Vec::with_capacity(d * d - 1);
    for k in 0..d {
        for l in (k + 1)..d {
            elements.push(BasisElement::Symmetric { k, l });
        }
    }
    for k in 0..d {
        for l in (k + 1)..d {
            elements.push(BasisElement::Antisymmetric { k, l });
        }
    }
    for l in 1..d {
        elements.push(BasisElement::Diagonal { l });
    }
    Ok(HermitianBasis { dim: d, elements })
}

impl HermitianBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `d^2 - 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn kinds(&self) -> &[BasisElement] {
        &self.elements
    }

    /// Dense matrix of element `alpha`.
    pub fn element(&self, alpha: usize) -> Operator {
        let mut out = Operator::zeros(self.dim, self.dim);
        self.add_scaled(alpha, 1.0, &mut out);
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Operator> + '_ {
        (0..self.len()).map(|a| self.element(a))
    }

    /// `out += coeff * E_alpha`.
    pub fn add_scaled(&self, alpha: usize, coeff: f64, out: &mut Operator) {
        match self.elements[alpha] {
            BasisElement::Symmetric { k, l } => {
                let v = c(coeff * SQRT_HALF);
                out[(k, l)] += v;
                out[(l, k)] += v;
            }
            BasisElement::Antisymmetric { k, l } => {
                let v = coeff * SQRT_HALF;
                out[(k, l)] += -I * v;
                out[(l, k)] += I * v;
            }
            BasisElement::Diagonal { l } => {
                let norm = coeff / ((l * (l + 1)) as f64).sqrt();
                for k in 0..l {
                    out[(k, k)] += c(norm);
                }
                out[(l, l)] += c(-(l as f64) * norm);
            }
        }
    }

    /// `Tr[O E_alpha]`.
    pub fn trace_with(&self, alpha: usize, o: &Operator) -> Complex64 {
        match self.elements[alpha] {
            BasisElement::Symmetric { k, l } => (o[(l, k)] + o[(k, l)]) * SQRT_HALF,
            BasisElement::Antisymmetric { k, l } => (-I * o[(l, k)] + I * o[(k, l)]) * SQRT_HALF,
            BasisElement::Diagonal { l } => {
                let head: Complex64 = (0..l).map(|k| o[(k, k)]).sum();
                (head - o[(l, l)] * l as f64) / ((l * (l + 1)) as f64).sqrt()
            }
        }
    }

    /// Real coefficients `Tr[O E_alpha]` of a Hermitian `O`, all `alpha`.
    ///
    /// Runs in `O(d^2)` using running diagonal sums.
    pub fn coefficients(&self, o: &Operator) -> Result<Vec<f64>> {
        self.check_dim(o)?;
        let d = self.dim;
        let mut out = Vec::with_capacity(self.len());
        let mut prefix = 0.0;
        for (alpha, kind) in self.elements.iter().enumerate() {
            match *kind {
                BasisElement::Diagonal { l } => {
                    prefix += o[(l - 1, l - 1)].re;
                    out.push((prefix - o[(l, l)].re * l as f64) / ((l * (l + 1)) as f64).sqrt());
                }
                _ => out.push(self.trace_with(alpha, o).re),
            }
        }
        debug_assert_eq!(out.len(), d * d - 1);
        Ok(out)
    }

    /// `I/d + sum r_alpha E_alpha` (or without the identity part).
    fn assemble(&self, r: &[f64], with_identity: bool) -> Operator {
        let d = self.dim;
        let mut out = if with_identity {
            linalg::identity(d) * c(1.0 / d as f64)
        } else {
            Operator::zeros(d, d)
        };
        for (alpha, &coeff) in r.iter().enumerate() {
            if coeff != 0.0 {
                self.add_scaled(alpha, coeff, &mut out);
            }
        }
        out
    }

    fn check_dim(&self, o: &Operator) -> Result<()> {
        if o.nrows() != self.dim || o.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: o.nrows(),
            });
        }
        Ok(())
    }
}

/// Coordinates `r_alpha` of a density matrix in the canonical basis of
/// dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    pub dim: usize,
    pub components: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if components.len() + 1 != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim - 1,
                found: components.len(),
            });
        }
        Ok(BlochVector { dim, components })
    }

    /// The maximally mixed state.
    pub fn zero(dim: usize) -> Self {
        BlochVector {
            dim,
            components: vec![0.0; dim * dim - 1],
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum()
    }
}

/// `r_alpha = Tr[rho E_alpha]` for a Hermitian, unit-trace `rho`.
pub fn bloch_decompose(rho: &Operator, basis: &HermitianBasis) -> Result<BlochVector> {
    basis.check_dim(rho)?;
    let defect = linalg::hermiticity_defect(rho);
    if defect > 1e-10 {
        return Err(Error::invalid(format!("rho is not Hermitian (defect {defect:.3e})")));
    }
    let tr = linalg::trace(rho);
    if (tr - c(1.0)).norm() > 1e-10 {
        return Err(Error::invalid(format!("rho has trace {tr}, expected 1")));
    }
    Ok(BlochVector {
        dim: basis.dim,
        components: basis.coefficients(rho)?,
    })
}

/// `I/d + sum r_alpha E_alpha`; Hermitian with unit trace, not necessarily PSD.
pub fn bloch_compose(r: &BlochVector, basis: &HermitianBasis) -> Result<Operator> {
    if r.dim != basis.dim || r.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: r.len(),
        });
    }
    Ok(basis.assemble(&r.components, true))
}

/// `sum r_alpha E_alpha` for coefficients of a traceless operator.
pub fn traceless_part(coeffs: &[f64], basis: &HermitianBasis) -> Operator {
    basis.assemble(coeffs, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, hermitian_eigenvalues, trace_product};
    use crate::spin::random_pure_state;
    use proptest::prelude::*;

    #[test]
    fn qubit_basis_is_pauli_over_sqrt2() {
        let b = build_traceless_basis(2).unwrap();
        assert_eq!(b.len(), 3);
        let s = SQRT_HALF;
        let sx = b.element(0);
        let sy = b.element(1);
        let sz = b.element(2);
        assert!((sx[(0, 1)] - c(s)).norm() < 1e-15 && (sx[(1, 0)] - c(s)).norm() < 1e-15);
        assert!((sy[(0, 1)] + I * s).norm() < 1e-15 && (sy[(1, 0)] - I * s).norm() < 1e-15);
        assert!((sz[(0, 0)] - c(s)).norm() < 1e-15 && (sz[(1, 1)] + c(s)).norm() < 1e-15);
    }

    #[test]
    fn orthonormal_and_traceless_for_small_dims() {
        for d in 2..=6 {
            let b = build_traceless_basis(d).unwrap();
            let els: Vec<Operator> = b.elements().collect();
            assert_eq!(els.len(), d * d - 1);
            for (a, ea) in els.iter().enumerate() {
                assert!(linalg::hermiticity_defect(ea) < 1e-15);
                assert!(linalg::trace(ea).norm() < 1e-12);
                for (bb, eb) in els.iter().enumerate() {
                    let g = trace_product(ea, eb);
                    let want = if a == bb { 1.0 } else { 0.0 };
                    assert!((g - c(want)).norm() < 1e-12, "d={d} ({a},{bb}) {g}");
                }
            }
        }
    }

    #[test]
    fn trace_with_matches_dense_product() {
        let b = build_traceless_basis(4).unwrap();
        let o = Operator::from_fn(4, 4, |i, k| Complex64::new(i as f64 + 0.3 * k as f64, (i * k) as f64));
        for alpha in 0..b.len() {
            let dense = trace_product(&o, &b.element(alpha));
            assert!((dense - b.trace_with(alpha, &o)).norm() < 1e-12);
        }
    }

    #[test]
    fn largest_basis_is_traceless_and_orthonormal() {
        let b = build_traceless_basis(41).unwrap();
        assert_eq!(b.len(), 1680);
        let id = linalg::identity(41);
        let mut worst = 0.0f64;
        for alpha in 0..b.len() {
            assert!(b.trace_with(alpha, &id).norm() < 1e-12);
            let ea = b.element(alpha);
            for beta in 0..b.len() {
                let want = if alpha == beta { 1.0 } else { 0.0 };
                worst = worst.max((b.trace_with(beta, &ea) - c(want)).norm());
            }
        }
        assert!(worst < 1e-12, "max Gram deviation {worst}");
    }

    #[test]
    fn maximally_mixed_has_zero_vector() {
        let b = build_traceless_basis(5).unwrap();
        let r = bloch_decompose(&(linalg::identity(5) * c(0.2)), &b).unwrap();
        assert!(r.components.iter().all(|x| x.abs() < 1e-15));
        let back = bloch_compose(&BlochVector::zero(5), &b).unwrap();
        assert!(frobenius(&(back - linalg::identity(5) * c(0.2))) < 1e-15);
    }

    #[test]
    fn qubit_ground_state_vector() {
        let b = build_traceless_basis(2).unwrap();
        let mut rho = Operator::zeros(2, 2);
        rho[(0, 0)] = c(1.0);
        let r = bloch_decompose(&rho, &b).unwrap();
        assert!(r.components[0].abs() < 1e-15 && r.components[1].abs() < 1e-15);
        assert!((r.components[2] - SQRT_HALF).abs() < 1e-15);
    }

    #[test]
    fn pure_state_lies_on_bloch_sphere() {
        let b = build_traceless_basis(21).unwrap();
        for seed in 0..5 {
            let psi = random_pure_state(21, seed).unwrap();
            let r = bloch_decompose(&psi.projector(), &b).unwrap();
            assert!((r.norm_sqr() - (1.0 - 1.0 / 21.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let b = build_traceless_basis(3).unwrap();
        assert!(matches!(
            bloch_decompose(&(linalg::identity(2) * c(0.5)), &b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(bloch_compose(&BlochVector::zero(2), &b).is_err());
        assert!(BlochVector::new(3, vec![0.0; 7]).is_err());
    }

    #[test]
    fn non_unit_trace_is_rejected() {
        let b = build_traceless_basis(3).unwrap();
        assert!(bloch_decompose(&linalg::identity(3), &b).is_err());
    }

    #[test]
    fn outside_bloch_ball_loses_positivity() {
        // qubit: PSD iff |r| <= 1/sqrt 2
        let b = build_traceless_basis(2).unwrap();
        for (scale, want_psd) in [(0.99, true), (1.01, false)] {
            let r = BlochVector::new(2, vec![0.0, 0.6 * SQRT_HALF * scale, 0.8 * SQRT_HALF * scale]).unwrap();
            let min = hermitian_eigenvalues(&bloch_compose(&r, &b).unwrap())[0];
            assert_eq!(min >= 0.0, want_psd, "scale {scale}: min eig {min}");
        }
    }

    fn arbitrary_density(d: usize, weights: &[f64], seed: u64) -> Operator {
        let total: f64 = weights.iter().sum();
        let mut rho = Operator::zeros(d, d);
        for (k, w) in weights.iter().enumerate() {
            let psi = random_pure_state(d, seed.wrapping_add(k as u64)).unwrap();
            rho += psi.projector() * c(w / total);
        }
        rho
    }

    proptest! {
        #[test]
        fn compose_inverts_decompose(d in 2usize..8, seed in any::<u64>(), weights in prop::collection::vec(0.01f64..1.0, 1..4)) {
            let b = build_traceless_basis(d).unwrap();
            let rho = arbitrary_density(d, &weights, seed);
            let r = bloch_decompose(&rho, &b).unwrap();
            let back = bloch_compose(&r, &b).unwrap();
            prop_assert!(frobenius(&(back - rho)) < 1e-10);
        }
    }
}
