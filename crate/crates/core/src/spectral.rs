//! Ohmic-family bath: spectral density, memory kernel and the scalar bath
//! functions derived from it.
//!
//! Units: the bare oscillator frequency `ω₀` is the unit of frequency and
//! `1/ω₀` the unit of time.

use num_complex::Complex;

use crate::error::{domain, Result};
use crate::quadrature::{self, Tolerance};
use crate::scalar::Real;
use crate::special::gamma;

/// Low-frequency behaviour of the spectral density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathClass {
    SubOhmic,
    Ohmic,
    SuperOhmic,
}

/// Bath parameters of `J(ω) = η ω^s ω_c^{1-s} e^{-ω/ω_c}` together with the
/// system frequency `ω₀`, which is fixed to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams<T> {
    eta: T,
    s: T,
    omega_c: T,
    omega_0: T,
}

impl<T: Real> SpectralParams<T> {
    /// `eta = 0` is accepted and describes the closed oscillator.
    pub fn new(eta: T, s: T, omega_c: T) -> Result<Self> {
        if !eta.is_finite() || eta < T::zero() {
            return domain(format!("coupling eta must be finite and >= 0, got {eta}"));
        }
        if !s.is_finite() || s <= T::zero() {
            return domain(format!("ohmicity s must be finite and > 0, got {s}"));
        }
        if !omega_c.is_finite() || omega_c <= T::zero() {
            return domain(format!(
                "cutoff omega_c must be finite and > 0, got {omega_c}"
            ));
        }
        Ok(Self {
            eta,
            s,
            omega_c,
            omega_0: T::one(),
        })
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn omega_c(&self) -> T {
        self.omega_c
    }

    pub fn omega_0(&self) -> T {
        self.omega_0
    }

    /// Same bath shape with a different coupling.
    pub fn with_eta(&self, eta: T) -> Result<Self> {
        Self::new(eta, self.s, self.omega_c)
    }

    pub fn is_closed(&self) -> bool {
        self.eta == T::zero()
    }

    pub fn class(&self) -> BathClass {
        if self.s < T::one() {
            BathClass::SubOhmic
        } else if self.s > T::one() {
            BathClass::SuperOhmic
        } else {
            BathClass::Ohmic
        }
    }

    /// `J(ω)`. Rejects negative frequencies.
    pub fn spectral_density(&self, omega: T) -> Result<T> {
        if omega.is_nan() || omega < T::zero() {
            return domain(format!("spectral density needs omega >= 0, got {omega}"));
        }
        Ok(self.density(omega))
    }

    #[inline]
    pub(crate) fn density(&self, omega: T) -> T {
        if omega == T::zero() {
            return T::zero();
        }
        self.eta
            * omega.powf(self.s)
            * self.omega_c.powf(T::one() - self.s)
            * (-omega / self.omega_c).exp()
    }

    /// `dJ/dω` for `ω > 0`.
    pub(crate) fn density_derivative(&self, omega: T) -> T {
        self.density(omega) * (self.s / omega - self.omega_c.recip())
    }

    /// `J(ω)/ω`, evaluated without forming the quotient so that it stays
    /// finite near zero whenever `s >= 1`.
    pub(crate) fn density_over_omega(&self, omega: T) -> T {
        self.eta
            * omega.powf(self.s - T::one())
            * self.omega_c.powf(T::one() - self.s)
            * (-omega / self.omega_c).exp()
    }

    /// Memory kernel `μ(t) = ∫₀^∞ J(ω) e^{-iωt} dω`, in closed form
    /// `η ω_c^{1-s} Γ(s+1) (1/ω_c + i t)^{-(s+1)}` (principal branch).
    pub fn memory_kernel(&self, t: T) -> Result<Complex<T>> {
        if t.is_nan() || t < T::zero() {
            return domain(format!("memory kernel needs t >= 0, got {t}"));
        }
        Ok(self.kernel_shape(t) * self.kernel_prefactor())
    }

    pub(crate) fn kernel_prefactor(&self) -> T {
        self.eta * self.omega_c.powf(T::one() - self.s) * gamma(self.s + T::one())
    }

    #[inline]
    pub(crate) fn kernel_shape(&self, t: T) -> Complex<T> {
        Complex::new(self.omega_c.recip(), t).powf(-(self.s + T::one()))
    }

    /// `∫₀^∞ J(ω) dω = η ω_c² Γ(s+1)`, equal to `μ(0)`.
    pub fn total_weight(&self) -> T {
        self.eta * self.omega_c * self.omega_c * gamma(self.s + T::one())
    }

    /// `∫₀^∞ J(ω)/ω dω = η ω_c Γ(s)`, the zero-energy self-energy.
    pub fn zero_energy_shift(&self) -> T {
        self.eta * self.omega_c * gamma(self.s)
    }

    /// Coupling at which a bound state first appears: `ω₀ / (ω_c Γ(s))`.
    pub fn critical_coupling(&self) -> T {
        self.omega_0 / (self.omega_c * gamma(self.s))
    }

    /// Markovian decay rate `κ = π J(ω₀)`.
    pub fn markov_decay_rate(&self) -> T {
        T::PI() * self.density(self.omega_0)
    }

    /// Frequency shift `Δ(ω) = P∫₀^∞ J(ω')/(ω - ω') dω'` with default tolerance.
    pub fn frequency_shift(&self, omega: T) -> Result<T> {
        self.frequency_shift_with(omega, &Tolerance::default())
    }

    /// Principal value by singularity subtraction: on `[0, 2ω]` the constant
    /// `J(ω)` is removed (its principal value over a symmetric window is zero),
    /// the remainder is regular; `[2ω, ∞)` carries no singularity.
    pub fn frequency_shift_with(&self, omega: T, tol: &Tolerance<T>) -> Result<T> {
        if omega.is_nan() || omega <= T::zero() {
            return domain(format!("frequency shift needs omega > 0, got {omega}"));
        }
        if self.is_closed() {
            return Ok(T::zero());
        }
        let j0 = self.density(omega);
        let slope = self.density_derivative(omega);
        let regular = |x: T| {
            let gap = omega - x;
            if gap == T::zero() {
                -slope
            } else {
                (self.density(x) - j0) / gap
            }
        };
        let two = omega + omega;
        let near = quadrature::integrate(regular, T::zero(), omega, tol)?
            + quadrature::integrate(regular, omega, two, tol)?;
        let far = quadrature::integrate_semi_infinite(
            |x: T| self.density(x) / (omega - x),
            two,
            self.omega_c,
            tol,
        )?;
        Ok(near + far)
    }
}

/// Integrates `f` over `[0, ∞)` through the compactifying map
/// `ω = scale·x/(1-x)` with the default tolerance (1e-10 absolute).
pub fn semi_infinite_quadrature<T: Real, F: FnMut(T) -> T>(f: F, scale: T) -> Result<T> {
    quadrature::integrate_semi_infinite(f, T::zero(), scale, &Tolerance::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(eta: f64) -> SpectralParams<f64> {
        SpectralParams::new(eta, 1.0, 10.0).unwrap()
    }

    #[test]
    fn constructor_validation() {
        assert!(SpectralParams::new(-0.1, 1.0, 10.0).is_err());
        assert!(SpectralParams::new(0.1, 0.0, 10.0).is_err());
        assert!(SpectralParams::new(0.1, 1.0, -1.0).is_err());
        assert!(SpectralParams::new(f64::NAN, 1.0, 10.0).is_err());
        assert!(SpectralParams::new(0.0, 1.0, 10.0).unwrap().is_closed());
    }

    #[test]
    fn classification() {
        let c = |s| SpectralParams::new(0.1, s, 10.0).unwrap().class();
        assert_eq!(c(0.5), BathClass::SubOhmic);
        assert_eq!(c(1.0), BathClass::Ohmic);
        assert_eq!(c(2.0), BathClass::SuperOhmic);
    }

    #[test]
    fn density_values() {
        let p = ohmic(0.1);
        assert!((p.spectral_density(1.0).unwrap() - 0.1 * (-0.1f64).exp()).abs() < 1e-15);
        assert!((p.spectral_density(10.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(p.spectral_density(0.0).unwrap(), 0.0);
        assert!(p.spectral_density(1e4).unwrap() < 1e-300);
        assert!(matches!(
            p.spectral_density(-1.0),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn kernel_at_origin_is_real() {
        let p = ohmic(0.1);
        let mu0 = p.memory_kernel(0.0).unwrap();
        assert!((mu0.re - 10.0).abs() < 1e-12);
        assert!(mu0.im.abs() < 1e-15);
        assert!(p.memory_kernel(-1.0).is_err());
    }

    #[test]
    fn kernel_modulus_decreases() {
        for s in [0.5, 1.0, 2.0] {
            let p = SpectralParams::new(0.1, s, 10.0).unwrap();
            let mut prev = f64::INFINITY;
            for k in 0..200 {
                let m = p.memory_kernel(k as f64 * 0.05).unwrap().norm();
                assert!(m < prev);
                prev = m;
            }
        }
    }

    #[test]
    fn markov_rate() {
        assert!((ohmic(0.1).markov_decay_rate() - 0.284_263).abs() < 1e-6);
        assert_eq!(ohmic(0.0).markov_decay_rate(), 0.0);
        assert!(ohmic(0.2).markov_decay_rate() > ohmic(0.1).markov_decay_rate());
    }

    #[test]
    fn shift_of_closed_system_vanishes() {
        assert_eq!(ohmic(0.0).frequency_shift(1.0).unwrap(), 0.0);
        assert!(ohmic(0.1).frequency_shift(0.0).is_err());
    }

    #[test]
    fn ohmic_shift_is_negative_for_large_cutoff() {
        assert!(ohmic(0.1).frequency_shift(1.0).unwrap() < 0.0);
    }

    #[test]
    fn weight_integrals_match_closed_forms() {
        for s in [0.5, 1.0, 2.0, 3.0] {
            let p = SpectralParams::new(0.1f64, s, 10.0).unwrap();
            let w = semi_infinite_quadrature(|x| p.density(x), p.omega_c()).unwrap();
            assert!((w - p.total_weight()).abs() < 1e-9, "s={s}: {w}");
            let y0 = semi_infinite_quadrature(|x| p.density_over_omega(x), p.omega_c()).unwrap();
            assert!((y0 - p.zero_energy_shift()).abs() < 1e-9, "s={s}: {y0}");
        }
        assert!((ohmic(0.1).total_weight() - 10.0).abs() < 1e-12);
    }
}
