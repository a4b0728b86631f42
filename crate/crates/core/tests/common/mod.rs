//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's numerical routines: operators are
//! built from explicit formulas, exponentials come from a Taylor series,
//! pseudo-inverses from an SVD, and the physical projection from a
//! factorized gradient descent.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(Jx, Jy, Jz)` for spin `j` from the ladder formulas.
pub fn spin_matrices(j: f64) -> (CMat, CMat, CMat) {
    let d = (2.0 * j).round() as usize + 1;
    let m = |i: usize| j - i as f64;
    let mut jp = CMat::zeros(d, d);
    for i in 1..d {
        // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits one row up
        let mi = m(i);
        jp[(i - 1, i)] = c((j * (j + 1.0) - mi * (mi + 1.0)).sqrt());
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let jz = CMat::from_diagonal(&DVector::from_fn(d, |i, _| c(m(i))));
    (jx, jy, jz)
}

/// `exp(a)` by scaling and squaring a Taylor series.
pub fn expm(a: &CMat) -> CMat {
    let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a * c(0.5f64.powi(squarings as i32));
    let d = a.nrows();
    let mut term = CMat::identity(d, d);
    let mut sum = term.clone();
    for k in 1..40 {
        term = &term * &scaled * c(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Kicked-top Floquet unitary `exp(-i lambda/(2j) Jz^2) exp(-i alpha Jx)`.
pub fn floquet(j: f64, alpha: f64, lambda: f64) -> CMat {
    let (jx, _, jz) = spin_matrices(j);
    let kick = expm(&(&jz * &jz * Complex64::new(0.0, -lambda / (2.0 * j))));
    let turn = expm(&(jx * Complex64::new(0.0, -alpha)));
    kick * turn
}

/// Generalized Gell-Mann matrices, dense, in canonical order: symmetric
/// pairs, antisymmetric pairs (both row-major over k < l), then diagonal.
pub fn gell_mann(d: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    let s = 0.5f64.sqrt();
    for k in 0..d {
        for l in k + 1..d {
            let mut e = CMat::zeros(d, d);
            e[(k, l)] = c(s);
            e[(l, k)] = c(s);
            out.push(e);
        }
    }
    for k in 0..d {
        for l in k + 1..d {
            let mut e = CMat::zeros(d, d);
            e[(k, l)] = Complex64::new(0.0, -s);
            e[(l, k)] = Complex64::new(0.0, s);
            out.push(e);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut e = CMat::zeros(d, d);
        for i in 0..l {
            e[(i, i)] = c(norm);
        }
        e[(l, l)] = c(-(l as f64) * norm);
        out.push(e);
    }
    out
}

pub fn tr_prod(a: &CMat, b: &CMat) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// `I/d + sum r_a E_a` from dense basis matrices.
pub fn compose(r: &[f64], basis: &[CMat]) -> CMat {
    let d = basis[0].nrows();
    let mut rho = CMat::identity(d, d) * c(1.0 / d as f64);
    for (x, e) in r.iter().zip(basis) {
        rho += e * c(*x);
    }
    rho
}

/// Heisenberg rows `Tr[(U^dag)^k O U^k E_a]` for `k = 0..n`.
pub fn design_rows(u: &CMat, o0: &CMat, basis: &[CMat], n: usize) -> DMatrix<f64> {
    let mut rows = DMatrix::zeros(n, basis.len());
    let mut o = o0.clone();
    for k in 0..n {
        for (a, e) in basis.iter().enumerate() {
            rows[(k, a)] = tr_prod(&o, e).re;
        }
        o = u.adjoint() * &o * u;
    }
    rows
}

/// Least-squares solution of `rows * r = m` through an SVD pseudo-inverse.
pub fn pinv_solve(rows: &DMatrix<f64>, m: &[f64]) -> Vec<f64> {
    let svd = rows.clone().svd(true, true);
    let max = svd.singular_values.max();
    let pinv = svd
        .pseudo_inverse(1e-10f64.sqrt() * max)
        .expect("both factors requested");
    (pinv * DVector::from_column_slice(m)).iter().copied().collect()
}

/// Numerical rank of `rows^T rows` from singular values of `rows`.
pub fn rank(rows: &DMatrix<f64>) -> usize {
    let sv = rows.clone().svd(false, false).singular_values;
    let max = sv.max();
    sv.iter().filter(|&&s| s * s > 1e-10 * max * max).count()
}

/// Haar-random pure state from complex Gaussians.
pub fn haar_state(d: usize, rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    let v = DVector::from_fn(d, |_, _| {
        let (a, b): (f64, f64) = (gauss(rng), gauss(rng));
        Complex64::new(a, b)
    });
    let n = v.norm();
    v / c(n)
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Minimizes `(x - r)^T C (x - r)` over density matrices, with
/// `rho = A A^dag / Tr[A A^dag]` and gradient descent on `A` with Armijo
/// backtracking, keeping the best of several random starts.
pub fn projection_oracle(r: &[f64], metric: &DMatrix<f64>, basis: &[CMat], seed: u64) -> (f64, Vec<f64>) {
    descend(r, metric, &vec![0.0; r.len()], basis, seed)
}

/// Lower bound on `<psi|rho|psi>` over density matrices whose Bloch vector
/// satisfies `rows x = rows r`. The constraint is relaxed to the penalty
/// `penalty * |rows (x - r)|^2`, so the value never exceeds the true minimum.
pub fn min_fidelity_oracle(
    r: &[f64],
    rows: &DMatrix<f64>,
    psi: &DVector<Complex64>,
    basis: &[CMat],
    penalty: f64,
) -> f64 {
    let metric = rows.transpose() * rows * penalty;
    let lin: Vec<f64> = basis.iter().map(|e| (psi.adjoint() * e * psi)[(0, 0)].re).collect();
    let (value, x) = descend(r, &metric, &lin, basis, 1);
    let d = basis[0].nrows() as f64;
    let diff = DVector::from_iterator(r.len(), x.iter().zip(r).map(|(a, b)| a - b));
    // report the linear part only; the penalty is non-negative
    1.0 / d + value - diff.dot(&(&metric * &diff))
}

/// Minimizes `(x - r)^T C (x - r) + lin . x` over density matrices.
fn descend(r: &[f64], metric: &DMatrix<f64>, lin: &[f64], basis: &[CMat], seed: u64) -> (f64, Vec<f64>) {
    let lin = DVector::from_column_slice(lin);
    let d = basis[0].nrows();
    let target = DVector::from_column_slice(r);
    let bloch = |rho: &CMat| DVector::from_iterator(basis.len(), basis.iter().map(|e| tr_prod(rho, e).re));
    let objective = |a: &CMat| {
        let aa = a * a.adjoint();
        let s = aa.trace().re;
        let x = bloch(&(aa / c(s)));
        let diff = &x - &target;
        (diff.dot(&(metric * &diff)) + lin.dot(&x), x)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::INFINITY, Vec::new());
    for _ in 0..8 {
        let mut a = CMat::from_fn(d, d, |_, _| Complex64::new(gauss(&mut rng), gauss(&mut rng)));
        let (mut f, _) = objective(&a);
        let mut step = 1.0;
        for _ in 0..20_000 {
            let aa = &a * a.adjoint();
            let s = aa.trace().re;
            let rho = &aa / c(s);
            let x = bloch(&rho);
            let g = (metric * (&x - &target)) * 2.0 + &lin;
            let mut gm = CMat::zeros(d, d);
            for (ga, e) in g.iter().zip(basis) {
                gm += e * c(*ga);
            }
            let grho = tr_prod(&gm, &rho).re;
            let grad = (&gm * &a - &a * c(grho)) * c(2.0 / s);
            let gnorm: f64 = grad.iter().map(|z| z.norm_sqr()).sum();
            if gnorm < 1e-30 {
                break;
            }
            step *= 2.0;
            loop {
                let trial = &a - &grad * c(step);
                let (ft, _) = objective(&trial);
                if ft <= f - 0.25 * step * gnorm {
                    a = trial;
                    f = ft;
                    break;
                }
                step *= 0.5;
                if step < 1e-30 {
                    break;
                }
            }
            if step < 1e-30 {
                break;
            }
            // keep the scale of A near 1 so steps stay comparable
            let s = (&a * a.adjoint()).trace().re.sqrt();
            a /= c(s);
        }
        if f < best.0 {
            best = (f, objective(&a).1.iter().copied().collect());
        }
    }
    best
}

/// Spearman rank correlation of two samples without ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let ranks = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    };
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}
