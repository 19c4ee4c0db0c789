//! Single-excitation spectrum of oscillator plus bath.
//!
//! Poles of the Laplace-transformed amplitude solve `y(ϖ) = ϖ` with
//! `y(ϖ) = ω₀ - ∫₀^∞ J(ω)/(ω - ϖ) dω`. Below the band (`ϖ < 0`) `y` is
//! smooth and decreasing, so there is at most one isolated root `E_b`, and it
//! exists exactly when `y(0⁻) = ω₀ - ηω_cΓ(s) < 0`.

use num_complex::Complex;

use crate::error::{domain, numeric, Result};
use crate::quadrature::{self, Tolerance};
use crate::scalar::Real;
use crate::spectral::SpectralParams;

/// Isolated eigenstate below the continuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState<T> {
    /// `E_b < 0`, in units of `ω₀`.
    pub energy: T,
    /// Residue `Z = [1 + ∫ J/(E_b - ω)² dω]⁻¹`, the weight of the pole in `u(t)`.
    pub residue: T,
}

impl<T: Real> BoundState<T> {
    /// `Z e^{-iE_b t}`.
    pub fn pole_term(&self, t: T) -> Complex<T> {
        Complex::new(T::zero(), -self.energy * t).exp() * self.residue
    }
}

/// Denominator convention for the continuum contribution to `u(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchCut {
    /// Pole term only.
    Off,
    /// `[ω - ω₀ - Δ(ω)]² + [πJ(ω)]²`, the resolvent spectral weight.
    Standard,
    /// `[ω - ω₀ - Δ(ω)]² + [2πJ(ω)]²`.
    DoubledWidth,
}

fn tight<T: Real>() -> Tolerance<T> {
    let t = Tolerance::default();
    let floor = T::epsilon() * T::lit(256.0);
    t.with_abs(T::lit(1e-13).max(floor))
}

/// `y(ϖ)` for `ϖ < 0`.
pub fn spectral_function_y<T: Real>(p: &SpectralParams<T>, varpi: T) -> Result<T> {
    if varpi.is_nan() || varpi >= T::zero() {
        return domain(format!(
            "y(varpi) is only regular below the band, got varpi = {varpi}"
        ));
    }
    y_below_band(p, varpi, &tight())
}

/// `∫₀^∞ f(ω) dω` in the variable `v = √ω`, which turns the `ω^{s-1}`
/// endpoint behaviour of the band integrands into `v^{2s-1}`, smooth for
/// `s ≥ ½`.
fn band_integral<T: Real, F: FnMut(T) -> T>(
    p: &SpectralParams<T>,
    mut f: F,
    tol: &Tolerance<T>,
) -> Result<T> {
    let two = T::lit(2.0);
    quadrature::integrate_semi_infinite(
        |v: T| two * v * f(v * v),
        T::zero(),
        p.omega_c().sqrt(),
        tol,
    )
}

fn y_below_band<T: Real>(p: &SpectralParams<T>, varpi: T, tol: &Tolerance<T>) -> Result<T> {
    if p.is_closed() {
        return Ok(p.omega_0());
    }
    let integral = band_integral(p, |w: T| p.density(w) / (w - varpi), tol)?;
    Ok(p.omega_0() - integral)
}

/// `y(0⁻) = ω₀ - ∫ J(ω)/ω dω`, evaluated by quadrature.
pub fn y_at_band_edge<T: Real>(p: &SpectralParams<T>) -> Result<T> {
    if p.is_closed() {
        return Ok(p.omega_0());
    }
    let integral = band_integral(p, |w: T| p.density_over_omega(w), &tight())?;
    Ok(p.omega_0() - integral)
}

/// `ω₀ - ηω_cΓ(s) < 0`.
pub fn bound_state_exists<T: Real>(p: &SpectralParams<T>) -> bool {
    p.omega_0() - p.zero_energy_shift() < T::zero()
}

/// Locates the bound state by bisection on `g(ϖ) = y(ϖ) - ϖ`, which is
/// strictly decreasing below the band.
pub fn find_bound_state<T: Real>(p: &SpectralParams<T>) -> Result<Option<BoundState<T>>> {
    if !bound_state_exists(p) {
        return Ok(None);
    }
    let tol = tight();
    let g = |v: T| -> Result<T> { Ok(y_below_band(p, v, &tol)? - v) };

    let mut hi = -T::lit(1e-14).max(T::epsilon() * T::lit(64.0));
    let mut g_hi = g(hi)?;
    let mut shrink = 0;
    while g_hi >= T::zero() {
        shrink += 1;
        if shrink > 6 || hi.abs() < T::min_positive_value() * T::lit(1e10) {
            return numeric(format!(
                "bound state predicted (y(0) = {}) but too shallow to bracket",
                (p.omega_0() - p.zero_energy_shift()).to_f64_lossy()
            ));
        }
        hi = hi * T::lit(1e-3);
        g_hi = g(hi)?;
    }

    let mut lo = -(p.omega_0() + p.zero_energy_shift());
    let mut doublings = 0;
    while g(lo)? <= T::zero() {
        doublings += 1;
        if doublings > 60 {
            return numeric("bound-state bracket expansion failed after 60 doublings");
        }
        lo = lo + lo;
    }

    let stop = T::lit(1e-12).max(T::epsilon() * T::lit(8.0) * lo.abs());
    let mut iterations = 0;
    while hi - lo > stop {
        iterations += 1;
        if iterations > 400 {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let energy = T::lit(0.5) * (lo + hi);
    let residue = residue_at(p, energy, &tol)?;
    Ok(Some(BoundState { energy, residue }))
}

fn residue_at<T: Real>(p: &SpectralParams<T>, energy: T, tol: &Tolerance<T>) -> Result<T> {
    let integral = band_integral(
        p,
        |w: T| {
            let d = energy - w;
            p.density(w) / (d * d)
        },
        tol,
    )?;
    Ok((T::one() + integral).recip())
}

/// Coupling at which the numerically evaluated `y(0⁻)` changes sign, found by
/// bisection in `η` for fixed `(s, ω_c)`; relative accuracy `rel_tol`.
pub fn numeric_critical_coupling<T: Real>(s: T, omega_c: T, rel_tol: T) -> Result<T> {
    let edge = |eta: T| -> Result<T> { y_at_band_edge(&SpectralParams::new(eta, s, omega_c)?) };
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut expansions = 0;
    while edge(hi)? >= T::zero() {
        expansions += 1;
        if expansions > 200 {
            return numeric("no bound-state threshold found");
        }
        lo = hi;
        hi = hi + hi;
    }
    while hi - lo > rel_tol * hi {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if edge(mid)? < T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(T::lit(0.5) * (lo + hi))
}

/// Long-time form of `u(τ)`: the pole term, plus optionally the continuum
/// integral `∫ J(ω) e^{-iωτ} / D(ω) dω` with `D` chosen by `branch_cut`.
///
/// The continuum integral uses fixed Gauss panels no wider than `π/τ` and
/// evaluates `Δ(ω)` at every node, so it is expensive for large `τ`.
pub fn asymptotic_amplitude<T: Real>(
    bound: Option<&BoundState<T>>,
    p: &SpectralParams<T>,
    tau: T,
    branch_cut: BranchCut,
) -> Result<Complex<T>> {
    if tau.is_nan() || tau <= T::zero() {
        return domain(format!("asymptotic amplitude needs tau > 0, got {tau}"));
    }
    let pole = bound.map_or(Complex::new(T::zero(), T::zero()), |b| b.pole_term(tau));
    let width_factor = match branch_cut {
        BranchCut::Off => return Ok(pole),
        BranchCut::Standard => T::PI(),
        BranchCut::DoubledWidth => T::TAU(),
    };
    if p.is_closed() {
        return Ok(pole);
    }
    let top = continuum_cutoff(p);
    let panel = (T::PI() / tau).min(T::lit(0.25));
    let panels = (top / panel).ceil().to_usize().unwrap_or(1);
    let tol = Tolerance::default();
    let mut failure = None;
    let continuum = quadrature::gauss_panels(
        |w: T| {
            let j = p.density(w);
            let shift = match p.frequency_shift_with(w, &tol) {
                Ok(d) => d,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            };
            let detune = w - p.omega_0() - shift;
            let width = width_factor * j;
            let weight = j / (detune * detune + width * width);
            Complex::new(T::zero(), -w * tau).exp() * weight
        },
        T::zero(),
        top,
        panels,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(pole + continuum)
}

/// Frequency beyond which `J` is below `1e-16` of its peak.
fn continuum_cutoff<T: Real>(p: &SpectralParams<T>) -> T {
    let peak = p.density(p.s() * p.omega_c());
    let mut top = p.omega_c() * (p.s() + T::one());
    while p.density(top) > T::lit(1e-16) * peak {
        top = top + p.omega_c();
    }
    top
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(eta: f64) -> SpectralParams<f64> {
        SpectralParams::new(eta, 1.0, 10.0).unwrap()
    }

    #[test]
    fn y_domain_and_limits() {
        let p = ohmic(0.12);
        assert!(spectral_function_y(&p, 0.0).is_err());
        assert!(spectral_function_y(&p, 0.3).is_err());
        let far = spectral_function_y(&p, -1e7).unwrap();
        assert!((far - 1.0).abs() < 1e-5);
        let edge = y_at_band_edge(&p).unwrap();
        assert!((edge + 0.2).abs() < 1e-10, "{edge}");
        let near = spectral_function_y(&p, -1e-9).unwrap();
        assert!((near + 0.2).abs() < 1e-6);
    }

    #[test]
    fn y_is_decreasing() {
        let p = ohmic(0.08);
        let mut prev = f64::INFINITY;
        for k in (1..60).rev() {
            let v = -0.1 * k as f64;
            let y = spectral_function_y(&p, v).unwrap();
            assert!(y < prev);
            prev = y;
        }
    }

    #[test]
    fn no_bound_state_below_threshold() {
        assert!(find_bound_state(&ohmic(0.06)).unwrap().is_none());
        assert!(find_bound_state(&ohmic(0.1 * (1.0 - 1e-9)))
            .unwrap()
            .is_none());
        assert!(find_bound_state(&ohmic(0.0)).unwrap().is_none());
    }

    #[test]
    fn bound_state_root_is_self_certifying() {
        let p = ohmic(0.12);
        let b = find_bound_state(&p).unwrap().unwrap();
        assert!(b.energy < 0.0);
        let residual = spectral_function_y(&p, b.energy).unwrap() - b.energy;
        assert!(residual.abs() < 1e-10, "{residual}");
        assert!(b.residue > 0.0 && b.residue < 1.0);
    }

    #[test]
    fn just_above_threshold() {
        let b = find_bound_state(&ohmic(0.1 * (1.0 + 1e-6)))
            .unwrap()
            .unwrap();
        assert!(b.energy < 0.0 && b.energy > -1e-5);
    }

    #[test]
    fn asymptote_without_bound_state_or_continuum_is_zero() {
        let p = ohmic(0.06);
        let u = asymptotic_amplitude(None, &p, 10.0, BranchCut::Off).unwrap();
        assert_eq!(u, Complex::new(0.0, 0.0));
        assert!(asymptotic_amplitude(None, &p, 0.0, BranchCut::Off).is_err());
    }

    #[test]
    fn pole_term_modulus_is_residue() {
        let p = ohmic(0.12);
        let b = find_bound_state(&p).unwrap().unwrap();
        let u = asymptotic_amplitude(Some(&b), &p, 400.0, BranchCut::Off).unwrap();
        assert!((u.norm() - b.residue).abs() < 1e-14);
    }
}
