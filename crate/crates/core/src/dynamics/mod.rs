//! Dynamics of the oscillator amplitude `u(t)`.
//!
//! For a coherent initial state and a vacuum bath the reduced state is fixed
//! by the single complex function `u(t)`, which obeys
//! `u̇ + iω₀u + ∫₀ᵗ μ(t-t') u(t') dt' = 0`, `u(0) = 1`.

mod oracle;
mod volterra;

use num_complex::Complex;

pub use oracle::{discretized_bath_oracle, BathOracleRun};
pub use volterra::{solve_amplitude, solve_amplitude_with, SolverOptions, StepSize};

use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::spectral::SpectralParams;

/// `|u|` below which `u̇/u` is no longer formed.
pub const COEFFICIENT_FLOOR: f64 = 1e-12;

/// `u(t)` and `u̇(t)` sampled on a uniform grid starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory<T> {
    step: T,
    t: Vec<T>,
    u: Vec<Complex<T>>,
    du: Vec<Complex<T>>,
}

impl<T: Real> AmplitudeTrajectory<T> {
    /// Builds a trajectory from samples at `t_i = i·step`.
    pub fn from_samples(step: T, u: Vec<Complex<T>>, du: Vec<Complex<T>>) -> Result<Self> {
        if !(step > T::zero()) || !step.is_finite() {
            return domain(format!("trajectory step must be > 0, got {step}"));
        }
        if u.len() != du.len() {
            return domain("u and du must have equal length");
        }
        if u.is_empty() {
            return domain("empty trajectory");
        }
        let t = (0..u.len())
            .map(|i| step * T::from_usize_lossy(i))
            .collect();
        Ok(Self { step, t, u, du })
    }

    pub fn step(&self) -> T {
        self.step
    }

    /// Number of grid points, including `t = 0`.
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn horizon(&self) -> T {
        *self.t.last().expect("non-empty")
    }

    pub fn times(&self) -> &[T] {
        &self.t
    }

    pub fn u(&self) -> &[Complex<T>] {
        &self.u
    }

    pub fn du(&self) -> &[Complex<T>] {
        &self.du
    }

    /// Grid index of time `t`, provided `t` lies on the grid.
    pub fn index_of(&self, t: T) -> Option<usize> {
        if t < T::zero() || t.is_nan() {
            return None;
        }
        let x = t / self.step;
        let i = x.round();
        let tol = T::lit(1e-6).max(T::epsilon() * T::lit(16.0) * x);
        if (x - i).abs() > tol {
            return None;
        }
        let i = i.to_usize()?;
        (i < self.len()).then_some(i)
    }

    /// Cubic Hermite interpolation of `u` using the stored derivatives.
    pub fn interpolate(&self, t: T) -> Result<Complex<T>> {
        if t.is_nan() || t < T::zero() || t > self.horizon() {
            return domain(format!(
                "time {t} outside trajectory [0, {}]",
                self.horizon()
            ));
        }
        let x = t / self.step;
        let i = x
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(self.len().saturating_sub(2));
        if self.len() == 1 {
            return Ok(self.u[0]);
        }
        let s = x - T::from_usize_lossy(i);
        let (one, two, three) = (T::one(), T::lit(2.0), T::lit(3.0));
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = two * s3 - three * s2 + one;
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        Ok(self.u[i] * h00
            + self.du[i] * (h10 * self.step)
            + self.u[i + 1] * h01
            + self.du[i + 1] * (h11 * self.step))
    }

    /// Largest `|u(t)|` on the grid.
    pub fn max_modulus(&self) -> T {
        self.u.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }
}

/// Renormalized frequency `Ω(t) = -Im[u̇/u]` and decay rate
/// `γ(t) = -Re[u̇/u]` of the exact master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterEquationCoefficients<T> {
    pub omega: Vec<T>,
    pub gamma: Vec<T>,
    /// First grid index at which `|u|` fell below [`COEFFICIENT_FLOOR`]; the
    /// series stop there.
    pub truncated_at: Option<usize>,
}

pub fn master_equation_coefficients<T: Real>(
    traj: &AmplitudeTrajectory<T>,
) -> MasterEquationCoefficients<T> {
    let floor = T::lit(COEFFICIENT_FLOOR);
    let mut omega = Vec::with_capacity(traj.len());
    let mut gamma = Vec::with_capacity(traj.len());
    let mut truncated_at = None;
    for (i, (u, du)) in traj.u.iter().zip(&traj.du).enumerate() {
        if u.norm() <= floor {
            truncated_at = Some(i);
            break;
        }
        let ratio = du / u;
        omega.push(-ratio.im);
        gamma.push(-ratio.re);
    }
    MasterEquationCoefficients {
        omega,
        gamma,
        truncated_at,
    }
}

/// Born–Markov amplitude `e^{-(κ + i[ω₀ + Δ(ω₀)]) t}`; `include_shift = false`
/// drops `Δ(ω₀)`.
pub fn markov_amplitude<T: Real>(
    p: &SpectralParams<T>,
    t: T,
    include_shift: bool,
) -> Result<Complex<T>> {
    if t.is_nan() || t < T::zero() {
        return domain(format!("time must be >= 0, got {t}"));
    }
    Ok((markov_exponent(p, include_shift)? * t).exp())
}

/// The rate `κ + i(ω₀ + Δ)` such that `u = e^{-rate·t}`.
pub fn markov_exponent<T: Real>(p: &SpectralParams<T>, include_shift: bool) -> Result<Complex<T>> {
    let shift = if include_shift {
        p.frequency_shift(p.omega_0())?
    } else {
        T::zero()
    };
    Ok(-Complex::new(p.markov_decay_rate(), p.omega_0() + shift))
}

/// Samples the Born–Markov amplitude on a uniform grid over `[0, tau]`.
pub fn markov_trajectory<T: Real>(
    p: &SpectralParams<T>,
    tau: T,
    step: T,
    include_shift: bool,
) -> Result<AmplitudeTrajectory<T>> {
    let n = grid_points(tau, step)?;
    let h = tau / T::from_usize_lossy(n);
    let rate = markov_exponent(p, include_shift)?;
    let u: Vec<_> = (0..=n)
        .map(|i| (rate * (h * T::from_usize_lossy(i))).exp())
        .collect();
    let du = u.iter().map(|z| rate * z).collect();
    AmplitudeTrajectory::from_samples(h, u, du)
}

/// Closed-system amplitude `e^{-iω₀t}` on a uniform grid.
pub fn free_trajectory<T: Real>(omega_0: T, tau: T, step: T) -> Result<AmplitudeTrajectory<T>> {
    let n = grid_points(tau, step)?;
    let h = tau / T::from_usize_lossy(n);
    let u: Vec<_> = (0..=n)
        .map(|i| Complex::new(T::zero(), -omega_0 * h * T::from_usize_lossy(i)).exp())
        .collect();
    let du = u
        .iter()
        .map(|z| z * Complex::new(T::zero(), -omega_0))
        .collect();
    AmplitudeTrajectory::from_samples(h, u, du)
}

/// Number of intervals for a grid of nominal `step` that ends exactly at `tau`.
pub(crate) fn grid_points<T: Real>(tau: T, step: T) -> Result<usize> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return domain(format!("horizon tau must be > 0, got {tau}"));
    }
    if !(step > T::zero()) || !step.is_finite() {
        return domain(format!("step must be > 0, got {step}"));
    }
    let n = (tau / step - T::lit(1e-9)).ceil().max(T::one());
    n.to_usize()
        .ok_or_else(|| crate::Error::Domain(format!("grid for tau={tau}, step={step} too large")))
}
