//! Angular-momentum algebra for a single spin `j`.
//!
//! Everything is expressed in the `|j, m>` basis ordered `m = j, j-1, ..., -j`,
//! so basis index `i` carries `m = j - i`. `Jz` is diagonal and `J+` sits on
//! the first superdiagonal.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, c, hermiticity_defect, Operator, I};

/// A spin quantum number `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    /// `j` must be a positive half-integer.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "spin j = {j} is not a positive half-integer"
            )));
        }
        Ok(Spin {
            twice: twice.round() as u32,
        })
    }

    pub fn from_dim(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid(format!("dimension {d} is below 2")));
        }
        Ok(Spin {
            twice: (d - 1) as u32,
        })
    }

    pub fn j(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice_j(self) -> u32 {
        self.twice
    }

    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// `m` quantum number of basis index `i`.
    pub fn m(self, i: usize) -> f64 {
        self.j() - i as f64
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

/// The operators `Jx`, `Jy`, `Jz` for one spin.
#[derive(Debug, Clone)]
pub struct AngularMomentum {
    pub spin: Spin,
    pub jx: Operator,
    pub jy: Operator,
    pub jz: Operator,
}

impl AngularMomentum {
    pub fn new(spin: Spin) -> Self {
        let d = spin.dim();
        let j = spin.j();
        let mut j_plus = Operator::zeros(d, d);
        for i in 1..d {
            let m = spin.m(i);
            // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> has index i-1
            j_plus[(i - 1, i)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
        let j_minus = j_plus.adjoint();
        let jx = (&j_plus + &j_minus) * c(0.5);
        let jy = (&j_plus - &j_minus) * (-0.5 * I);
        let jz = Operator::from_fn(d, d, |r, k| if r == k { c(spin.m(r)) } else { c(0.0) });
        AngularMomentum { spin, jx, jy, jz }
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// `J- = Jx - i Jy`.
    pub fn lowering(&self) -> Operator {
        &self.jx - &self.jy * I
    }

    pub fn casimir(&self) -> Operator {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }
}

/// Builds `Jx`, `Jy`, `Jz` for spin `j`.
pub fn build_angular_momentum(j: f64) -> Result<AngularMomentum> {
    Ok(AngularMomentum::new(Spin::new(j)?))
}

/// `exp(-i angle H)` through the eigendecomposition of the Hermitian `H`.
pub fn unitary_from_generator(h: &Operator, angle: f64) -> Result<Operator> {
    if h.nrows() != h.ncols() {
        return Err(Error::invalid("generator is not square"));
    }
    let defect = hermiticity_defect(h);
    if defect > 1e-10 {
        return Err(Error::invalid(format!(
            "generator is not Hermitian (defect {defect:.3e})"
        )));
    }
    if angle == 0.0 {
        return Ok(linalg::identity(h.nrows()));
    }
    let (values, vectors) = linalg::hermitian_eigen(h);
    let mut scaled = vectors.clone();
    for (k, &v) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -angle * v);
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    Ok(scaled * vectors.adjoint())
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Normalizes `amplitudes`; rejects the zero vector.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid("state vector has zero or non-finite norm"));
        }
        Ok(PureState {
            amplitudes: amplitudes / c(norm),
        })
    }

    /// The `|j, m>` basis vector with index `i`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = DVector::zeros(d);
        v[i] = c(1.0);
        PureState { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn projector(&self) -> Operator {
        linalg::outer(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, a: &Operator) -> Complex64 {
        self.amplitudes.dotc(&(a * &self.amplitudes))
    }
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::invalid(format!("theta = {theta} outside [0, pi]")));
    }
    if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
        return Err(Error::invalid(format!("phi = {phi} outside [0, 2pi)")));
    }
    Ok(())
}

/// Spin coherent state `exp(i theta (Jx sin(phi) - Jy cos(phi))) |j, j>`.
pub fn spin_coherent_state(j: f64, theta: f64, phi: f64) -> Result<PureState> {
    let am = build_angular_momentum(j)?;
    coherent_state_by_rotation(&am, theta, phi)
}

/// Rotation form, reusing prebuilt operators.
pub fn coherent_state_by_rotation(am: &AngularMomentum, theta: f64, phi: f64) -> Result<PureState> {
    check_angles(theta, phi)?;
    if theta == 0.0 {
        return Ok(PureState::basis(am.dim(), 0));
    }
    // exp(i theta (Jx sin phi - Jy cos phi)) = exp(-i theta G) with G below
    let generator = &am.jy * c(phi.cos()) - &am.jx * c(phi.sin());
    let u = unitary_from_generator(&generator, theta)?;
    PureState::new(u.column(0).into_owned())
}

/// Lowering-operator form `(1 + |mu|^2)^(-j) exp(mu J-) |j, j>` with
/// `mu = e^{i phi} tan(theta / 2)`, written in closed form so `theta = pi`
/// needs no limit.
///
/// Amplitude on `|j, j-k>` is `sqrt(C(2j, k)) cos^(2j-k)(theta/2) sin^k(theta/2) e^{i k phi}`.
pub fn coherent_amplitudes(spin: Spin, theta: f64, phi: f64) -> DVector<Complex64> {
    let n = spin.twice_j() as usize;
    let (s, co) = (0.5 * theta).sin_cos();
    let mut out = DVector::zeros(n + 1);
    let mut binom = 1.0f64;
    for k in 0..=n {
        if k > 0 {
            binom *= (n - k + 1) as f64 / k as f64;
        }
        let mag = binom.sqrt() * co.powi((n - k) as i32) * s.powi(k as i32);
        out[k] = Complex64::from_polar(mag, k as f64 * phi);
    }
    out
}

/// Lowering-operator form as a [`PureState`].
pub fn coherent_state_by_lowering(spin: Spin, theta: f64, phi: f64) -> Result<PureState> {
    check_angles(theta, phi)?;
    PureState::new(coherent_amplitudes(spin, theta, phi))
}

/// Haar-random pure state from i.i.d. complex Gaussian amplitudes.
pub fn random_pure_state(d: usize, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pure_state_with(d, &mut rng)
}

pub fn random_pure_state_with<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension {d} is below 2")));
    }
    let v = DVector::from_fn(d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    PureState::new(v)
}
