//! Speed-limit figures of merit for a coherent state carried by `u(t)`.
//!
//! Fisher–Rao geometry: path length `ℓ = ½∫√F_Q dt = ∫|αu̇| dt`, Bures angle
//! `L_B = arccos√F(ρ₀, ρ_τ)`, `τ_QSL/τ = L_B/ℓ`.
//! Wigner geometry: in quadratures `x = (a + a†)/√2`, `p = (a - a†)/(√2 i)` the
//! state has mean `√2(Re αu, Im αu)` and covariance `½·1`, and
//! `W_t = e^{-½ΔᵀΣ⁻¹Δ}/(π√det Σ) = (2/π) e^{-|Δ|²}`. Its L2 distance from `W₀` is
//! `L_W = (2/√π) √(1 - e^{-|α|²|u-1|²})` and its speed is `(2/√π)|αu̇|`.

use num_complex::Complex;

use crate::dynamics::markov_exponent;
use crate::error::{domain, Result};
use crate::gaussian::{bures_angle, CoherentTrajectory, GaussianState};
use crate::scalar::Real;
use crate::spectral::SpectralParams;
use crate::spectrum::{asymptotic_amplitude, BoundState, BranchCut};

/// QSL quantities at one horizon `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslReport<T> {
    pub tau: T,
    /// Fisher–Rao path length `ℓ`.
    pub ell: T,
    pub l_b: T,
    /// `ℓ/τ`.
    pub v_bar: T,
    /// `L_B/ℓ`.
    pub ratio: T,
    pub v_bar_w: T,
    pub l_w: T,
    /// `L_W/(v̄_W τ)`.
    pub ratio_w: T,
}

/// One row of the Bures-vs-Wasserstein comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessRow<T> {
    pub tau: T,
    pub ratio: T,
    pub ratio_w: T,
}

fn two_over_sqrt_pi<T: Real>() -> T {
    T::FRAC_2_SQRT_PI()
}

/// Cumulative trapezoid of `|αu̇|` on the trajectory grid; entry `i` is the
/// path length on `[0, t_i]`.
pub fn cumulative_path_length<T: Real>(ct: &CoherentTrajectory<'_, T>) -> Vec<T> {
    let a = ct.alpha.norm();
    let h = ct.traj.step();
    let half = T::lit(0.5) * h * a;
    let mut out = Vec::with_capacity(ct.traj.len());
    let mut acc = T::zero();
    out.push(acc);
    for w in ct.traj.du().windows(2) {
        acc = acc + half * (w[0].norm() + w[1].norm());
        out.push(acc);
    }
    out
}

/// `v̄ = (1/τ)∫₀^τ |αu̇| dt` over the whole trajectory.
pub fn average_speed<T: Real>(ct: &CoherentTrajectory<'_, T>) -> Result<T> {
    if ct.traj.len() < 2 {
        return domain("average speed needs a trajectory with positive duration");
    }
    let ell = *cumulative_path_length(ct).last().expect("non-empty");
    Ok(ell / ct.traj.horizon())
}

/// `L_W = (2/√π) √(1 - e^{-|α|²|u-1|²})` for a given `u(τ)`.
pub fn wasserstein_from_amplitude<T: Real>(alpha: Complex<T>, u: Complex<T>) -> T {
    let x = alpha.norm_sqr() * (u - Complex::new(T::one(), T::zero())).norm_sqr();
    two_over_sqrt_pi::<T>() * (-(-x).exp_m1()).max(T::zero()).sqrt()
}

/// `L_W` between `W₀` and `W_τ`; off-grid `τ` is interpolated.
pub fn wasserstein_distance<T: Real>(ct: &CoherentTrajectory<'_, T>, tau: T) -> Result<T> {
    let u = match ct.traj.index_of(tau) {
        Some(i) => ct.traj.u()[i],
        None => ct.traj.interpolate(tau)?,
    };
    Ok(wasserstein_from_amplitude(ct.alpha, u))
}

fn report_from_parts<T: Real>(
    alpha: Complex<T>,
    u_tau: Complex<T>,
    tau: T,
    ell: T,
) -> Result<QslReport<T>> {
    if !(tau > T::zero()) {
        return domain(format!("QSL ratio needs tau > 0, got {tau}"));
    }
    if !(ell > T::zero()) {
        return domain("QSL ratio is undefined for a state that does not move (zero path length)");
    }
    let l_b = bures_angle(
        &GaussianState::coherent(alpha),
        &GaussianState::coherent(alpha * u_tau),
    );
    let v_bar = ell / tau;
    let v_bar_w = two_over_sqrt_pi::<T>() * v_bar;
    let l_w = wasserstein_from_amplitude(alpha, u_tau);
    Ok(QslReport {
        tau,
        ell,
        l_b,
        v_bar,
        ratio: l_b / ell,
        v_bar_w,
        l_w,
        ratio_w: l_w / (v_bar_w * tau),
    })
}

/// Full report at the trajectory horizon.
pub fn qsl_ratio<T: Real>(ct: &CoherentTrajectory<'_, T>) -> Result<QslReport<T>> {
    let v_bar = average_speed(ct)?;
    let tau = ct.traj.horizon();
    let last = *ct.traj.u().last().expect("non-empty");
    report_from_parts(ct.alpha, last, tau, v_bar * tau)
}

/// Reports at each `τ` of `taus`, all of which must be grid points.
pub fn qsl_series<T: Real>(
    ct: &CoherentTrajectory<'_, T>,
    taus: &[T],
) -> Result<Vec<QslReport<T>>> {
    let path = cumulative_path_length(ct);
    taus.iter()
        .map(|&tau| {
            let i = ct.traj.index_of(tau).ok_or_else(|| {
                crate::Error::Domain(format!("tau = {tau} is not a point of the trajectory grid"))
            })?;
            report_from_parts(ct.alpha, ct.traj.u()[i], ct.traj.times()[i], path[i])
        })
        .collect()
}

/// `(v̄_W, τ^W_QSL/τ)` at the trajectory horizon.
pub fn wigner_speed_and_ratio<T: Real>(ct: &CoherentTrajectory<'_, T>) -> Result<(T, T)> {
    let r = qsl_ratio(ct)?;
    Ok((r.v_bar_w, r.ratio_w))
}

/// `(τ, τ_QSL/τ, τ^W_QSL/τ)` on a grid of horizons.
pub fn tightness_compare<T: Real>(
    ct: &CoherentTrajectory<'_, T>,
    taus: &[T],
) -> Result<Vec<TightnessRow<T>>> {
    Ok(qsl_series(ct, taus)?
        .into_iter()
        .map(|r| TightnessRow {
            tau: r.tau,
            ratio: r.ratio,
            ratio_w: r.ratio_w,
        })
        .collect())
}

/// Report for the Born–Markov amplitude, with `v̄` in closed form
/// `|α|√(κ² + ω̃²)(1 - e^{-κτ})/(κτ)`, `ω̃ = ω₀ (+ Δ(ω₀) if included)`.
pub fn markov_report<T: Real>(
    p: &SpectralParams<T>,
    alpha: Complex<T>,
    tau: T,
    include_shift: bool,
) -> Result<QslReport<T>> {
    if !(tau > T::zero()) {
        return domain(format!("tau must be > 0, got {tau}"));
    }
    let rate = markov_exponent(p, include_shift)?;
    let kappa = -rate.re;
    let speed = alpha.norm() * rate.norm();
    let decay = if kappa > T::zero() {
        -(-kappa * tau).exp_m1() / (kappa * tau)
    } else {
        T::one()
    };
    let ell = speed * decay * tau;
    report_from_parts(alpha, (rate * tau).exp(), tau, ell)
}

/// Asymptotic report: speed `|αZE_b|` and `u(τ)` from [`asymptotic_amplitude`].
/// Without a bound state the limiting speed is zero and the report is a
/// domain error.
pub fn bound_state_report<T: Real>(
    bound: &BoundState<T>,
    p: &SpectralParams<T>,
    alpha: Complex<T>,
    tau: T,
    branch_cut: BranchCut,
) -> Result<QslReport<T>> {
    let u = asymptotic_amplitude(Some(bound), p, tau, branch_cut)?;
    report_from_parts(alpha, u, tau, bound_state_speed(bound, alpha.norm()) * tau)
}

/// `arccos(e^{-|α|²[1 - cos ω₀τ]}) / (|α|ω₀τ)` for the closed oscillator.
pub fn noiseless_ratio<T: Real>(alpha_abs: T, omega_0: T, tau: T) -> T {
    let x = alpha_abs * alpha_abs * (T::one() - (omega_0 * tau).cos());
    (-x).exp().acos() / (alpha_abs * omega_0 * tau)
}

/// Long-time Markov limit `κ arccos(e^{-|α|²/2}) / (|α|√(κ² + ω₀²))`.
pub fn markov_asymptotic_ratio<T: Real>(p: &SpectralParams<T>, alpha_abs: T) -> T {
    let k = p.markov_decay_rate();
    let w = p.omega_0();
    k * (-(alpha_abs * alpha_abs) / T::lit(2.0)).exp().acos() / (alpha_abs * (k * k + w * w).sqrt())
}

/// Limiting speed `|αZE_b|` when the amplitude settles on the pole term.
pub fn bound_state_speed<T: Real>(b: &BoundState<T>, alpha_abs: T) -> T {
    (alpha_abs * b.residue * b.energy).abs()
}

/// `arccos(e^{-|α|²[1 + Z² - 2Z cos E_bτ]/2}) / (|αZE_b| τ)`.
pub fn bound_state_asymptotic_ratio<T: Real>(b: &BoundState<T>, alpha_abs: T, tau: T) -> T {
    let z = b.residue;
    let x = alpha_abs * alpha_abs * (T::one() + z * z - T::lit(2.0) * z * (b.energy * tau).cos())
        / T::lit(2.0);
    (-x).exp().acos() / (bound_state_speed(b, alpha_abs) * tau)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() || x.len() < 2 {
        return domain("slope fit needs at least two paired points");
    }
    if x.iter().chain(y).any(|v| !(*v > T::zero())) {
        return domain("slope fit needs positive data");
    }
    let n = T::from_usize_lossy(x.len());
    let lx: Vec<T> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<T> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().fold(T::zero(), |s, &v| s + v) / n;
    let my = ly.iter().fold(T::zero(), |s, &v| s + v) / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (a, b) in lx.iter().zip(&ly) {
        sxy = sxy + (*a - mx) * (*b - my);
        sxx = sxx + (*a - mx) * (*a - mx);
    }
    if sxx == T::zero() {
        return domain("slope fit needs distinct abscissae");
    }
    Ok(sxy / sxx)
}

/// Log-log slope through the interior local maxima of `y`, which sit on the
/// upper envelope of an oscillating series.
pub fn envelope_slope<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return domain("envelope fit needs paired data");
    }
    let (mut px, mut py) = (Vec::new(), Vec::new());
    for i in 1..y.len().saturating_sub(1) {
        if y[i] >= y[i - 1] && y[i] > y[i + 1] {
            px.push(x[i]);
            py.push(y[i]);
        }
    }
    if px.len() < 2 {
        return domain(format!(
            "envelope fit found {} local maxima, need 2",
            px.len()
        ));
    }
    loglog_slope(&px, &py)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{free_trajectory, markov_trajectory};

    type C = Complex<f64>;

    #[test]
    fn noiseless_report_matches_closed_form() {
        let traj = free_trajectory(1.0, 7.3, 0.001).unwrap();
        let ct = CoherentTrajectory::new(C::new(0.0, 2.0), &traj);
        let r = qsl_ratio(&ct).unwrap();
        assert!((r.v_bar - 2.0).abs() < 1e-12);
        assert!((r.ratio - noiseless_ratio(2.0, 1.0, 7.3)).abs() < 1e-12);
        assert!((r.ratio * r.ell - r.l_b).abs() < 1e-14);
        assert!((r.v_bar_w - FRAC_2_SQRT_PI * r.v_bar).abs() < 1e-14);
    }

    const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

    #[test]
    fn zero_alpha_is_rejected() {
        let traj = free_trajectory(1.0, 1.0, 0.01).unwrap();
        let ct = CoherentTrajectory::new(C::new(0.0, 0.0), &traj);
        assert!(qsl_ratio(&ct).is_err());
    }

    #[test]
    fn wasserstein_limits() {
        let traj = free_trajectory(1.0, 4.0, 0.01).unwrap();
        let ct = CoherentTrajectory::new(C::new(10.0, 0.0), &traj);
        assert_eq!(wasserstein_distance(&ct, 0.0).unwrap(), 0.0);
        let sat = wasserstein_from_amplitude(C::new(10.0, 0.0), C::new(0.0, 0.0));
        assert!((sat - FRAC_2_SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn markov_report_agrees_with_sampled_trajectory() {
        let p = SpectralParams::new(0.1, 1.0, 10.0).unwrap();
        let alpha = C::new(10.0, 0.0);
        let closed = markov_report(&p, alpha, 20.0, true).unwrap();
        let traj = markov_trajectory(&p, 20.0, 0.001, true).unwrap();
        let sampled = qsl_ratio(&CoherentTrajectory::new(alpha, &traj)).unwrap();
        // trapezoid error on the sampled side is O(h²κ)
        assert!((closed.v_bar - sampled.v_bar).abs() < 1e-7);
        assert!((closed.l_b - sampled.l_b).abs() < 1e-12);
    }

    #[test]
    fn series_requires_grid_points() {
        let traj = free_trajectory(1.0, 10.0, 0.01).unwrap();
        let ct = CoherentTrajectory::new(C::new(1.0, 0.0), &traj);
        assert_eq!(qsl_series(&ct, &[2.0, 5.0, 10.0]).unwrap().len(), 3);
        assert!(qsl_series(&ct, &[2.005]).is_err());
    }

    #[test]
    fn slopes() {
        let x: Vec<f64> = (1..20).map(|k| k as f64 * 10.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 / v).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 1.0).abs() < 1e-12);
        let xs: Vec<f64> = (100..4000).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|t| (1.5 + (0.3 * t).cos()) / t).collect();
        let s = envelope_slope(&xs, &ys).unwrap();
        assert!((s + 1.0).abs() < 0.02, "{s}");
        assert!(loglog_slope(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn pole_only_report_is_the_asymptotic_ratio() {
        let p = SpectralParams::new(0.12, 1.0, 10.0).unwrap();
        let b = crate::spectrum::find_bound_state(&p).unwrap().unwrap();
        let r = bound_state_report(&b, &p, C::new(10.0, 0.0), 400.0, BranchCut::Off).unwrap();
        assert!((r.ratio - bound_state_asymptotic_ratio(&b, 10.0, 400.0)).abs() < 1e-12);
        assert!((r.v_bar - bound_state_speed(&b, 10.0)).abs() < 1e-14);
    }
}
