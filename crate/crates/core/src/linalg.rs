//! Dense complex/real matrix helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// A dense `d x d` complex matrix in the `|j, m>` basis.
pub type Operator = DMatrix<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest elementwise deviation `|A_ij - conj(A_ji)|`.
pub fn hermiticity_defect(a: &Operator) -> f64 {
    let n = a.nrows();
    if a.ncols() != n {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for k in i..n {
            let dev = (a[(i, k)] - a[(k, i)].conj()).norm();
            worst = worst.max(dev);
        }
    }
    worst
}

/// Replaces `a` with `(a + a^dagger) / 2`.
pub fn symmetrize(a: &mut Operator) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)] = c(a[(i, i)].re);
        for k in (i + 1)..n {
            let avg = (a[(i, k)] + a[(k, i)].conj()) * 0.5;
            a[(i, k)] = avg;
            a[(k, i)] = avg.conj();
        }
    }
}

pub fn frobenius(a: &Operator) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &Operator) -> Complex64 {
    a.diagonal().sum()
}

/// `Tr[A B]` without forming the product.
pub fn trace_product(a: &Operator, b: &Operator) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Column `k` of the returned matrix is the eigenvector for `values[k]`.
pub fn hermitian_eigen(a: &Operator) -> (Vec<f64>, Operator) {
    let eig = SymmetricEigen::new(a.clone());
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = Operator::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &Operator) -> Vec<f64> {
    let mut vals: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// `V diag(values) V^dagger`.
pub fn from_spectrum(values: &[f64], vectors: &Operator) -> Operator {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for (k, &v) in values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(v);
    }
    let mut out = scaled * vectors.adjoint();
    debug_assert_eq!(out.nrows(), n);
    symmetrize(&mut out);
    out
}

/// Real symmetric eigendecomposition, eigenvalues ascending.
pub fn symmetric_eigen(a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn identity(d: usize) -> Operator {
    Operator::identity(d, d)
}

/// `|v><v|`.
pub fn outer(v: &DVector<Complex64>) -> Operator {
    v * v.adjoint()
}

/// Euclidean projection of `values` onto the probability simplex.
///
/// Yields the fixed point of repeatedly clipping negatives and shifting all
/// eigenvalues uniformly until the sum is one.
pub fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (k as f64 + 1.0);
        if v - candidate > 0.0 {
            shift = candidate;
        }
    }
    values.iter().map(|&v| (v - shift).max(0.0)).collect()
}
