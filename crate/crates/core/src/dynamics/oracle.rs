//! Independent check on the amplitude solver: the single-excitation
//! Schrödinger equation of the oscillator coupled to a finite set of bath
//! modes.
//!
//! Modes sit at `ω_k = v_k²` with `v_k = (k + ½)Δv` uniform on `[0, √ω_max]`,
//! and couplings `g_k = √(J(ω_k)·2v_kΔv)`. Uniform spacing in `ω` converges
//! slowly for sub-Ohmic baths because `J` has a `√ω`-like cusp at the origin;
//! the squared grid is smooth there and packs modes near the band edge.
//! The widest gap is `2ω_max/n_modes`, so the closed system stays free of
//! recurrences up to `τ` when `n_modes ≥ ω_max·τ/π`.

use num_complex::Complex;

use super::{grid_points, AmplitudeTrajectory};
use crate::error::{domain, numeric, Result};
use crate::scalar::Real;
use crate::spectral::SpectralParams;

/// Oracle output: the oscillator amplitude `c₀(t)` (which plays the role of
/// `u(t)`) and the largest deviation of the total norm from one.
#[derive(Debug, Clone)]
pub struct BathOracleRun<T> {
    pub trajectory: AmplitudeTrajectory<T>,
    pub max_norm_deviation: T,
}

/// Integrates the discretized system with classic RK4 and samples `c₀` every
/// `output_step`. The internal step is at most `0.1/ω_max`, which keeps the
/// norm drift of RK4 below `1e-8` over a few thousand output steps.
pub fn discretized_bath_oracle<T: Real>(
    p: &SpectralParams<T>,
    tau: T,
    n_modes: usize,
    omega_max: T,
    output_step: T,
) -> Result<BathOracleRun<T>> {
    if n_modes < 100 {
        return domain(format!("need at least 100 bath modes, got {n_modes}"));
    }
    if !(omega_max > p.omega_0()) {
        return domain(format!("omega_max must exceed omega_0, got {omega_max}"));
    }
    let outputs = grid_points(tau, output_step)?;
    let h_out = tau / T::from_usize_lossy(outputs);
    let substeps = (h_out * omega_max / T::lit(0.1)).ceil().max(T::one());
    let substeps = substeps
        .to_usize()
        .ok_or_else(|| crate::Error::Domain("too many RK4 substeps".into()))?;
    let dt = h_out / T::from_usize_lossy(substeps);

    let dv = omega_max.sqrt() / T::from_usize_lossy(n_modes);
    let nodes: Vec<T> = (0..n_modes)
        .map(|k| (T::from_usize_lossy(k) + T::lit(0.5)) * dv)
        .collect();
    let freqs: Vec<T> = nodes.iter().map(|&v| v * v).collect();
    let couplings: Vec<T> = nodes
        .iter()
        .map(|&v| (p.density(v * v) * T::lit(2.0) * v * dv).sqrt())
        .collect();

    let sys = System {
        w0: p.omega_0(),
        freqs,
        couplings,
    };
    let mut state = State::initial(n_modes);
    let mut scratch = Scratch::new(n_modes);

    let mut u = Vec::with_capacity(outputs + 1);
    let mut du = Vec::with_capacity(outputs + 1);
    let mut max_dev = T::zero();
    let record = |s: &State<T>, sys: &System<T>, u: &mut Vec<_>, du: &mut Vec<_>, dev: &mut T| {
        u.push(Complex::new(s.c0_re, s.c0_im));
        du.push(sys.oscillator_rate(s));
        *dev = dev.max((s.norm_sqr() - T::one()).abs());
    };
    record(&state, &sys, &mut u, &mut du, &mut max_dev);
    for _ in 0..outputs {
        for _ in 0..substeps {
            sys.rk4_step(&mut state, &mut scratch, dt);
        }
        if !(state.c0_re.is_finite() && state.c0_im.is_finite()) {
            return numeric("bath oracle produced a non-finite amplitude");
        }
        record(&state, &sys, &mut u, &mut du, &mut max_dev);
    }
    Ok(BathOracleRun {
        trajectory: AmplitudeTrajectory::from_samples(h_out, u, du)?,
        max_norm_deviation: max_dev,
    })
}

#[derive(Clone)]
struct State<T> {
    c0_re: T,
    c0_im: T,
    re: Vec<T>,
    im: Vec<T>,
}

impl<T: Real> State<T> {
    fn initial(n: usize) -> Self {
        Self {
            c0_re: T::one(),
            c0_im: T::zero(),
            re: vec![T::zero(); n],
            im: vec![T::zero(); n],
        }
    }

    fn norm_sqr(&self) -> T {
        let bath = self
            .re
            .iter()
            .zip(&self.im)
            .fold(T::zero(), |acc, (&r, &i)| acc + r * r + i * i);
        self.c0_re * self.c0_re + self.c0_im * self.c0_im + bath
    }
}

struct Scratch<T> {
    k: [State<T>; 4],
    tmp: State<T>,
}

impl<T: Real> Scratch<T> {
    fn new(n: usize) -> Self {
        let z = State::initial(n);
        Self {
            k: [z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z,
        }
    }
}

struct System<T> {
    w0: T,
    freqs: Vec<T>,
    couplings: Vec<T>,
}

impl<T: Real> System<T> {
    /// `ċ₀ = -iω₀c₀ - iΣ g_k c_k`.
    fn oscillator_rate(&self, s: &State<T>) -> Complex<T> {
        let (mut sr, mut si) = (T::zero(), T::zero());
        for ((&g, &r), &i) in self.couplings.iter().zip(&s.re).zip(&s.im) {
            sr = sr + g * r;
            si = si + g * i;
        }
        // -i (w0 c0 + Σ g c) = (w0 c0_im + si) - i (w0 c0_re + sr)
        Complex::new(self.w0 * s.c0_im + si, -(self.w0 * s.c0_re + sr))
    }

    fn rhs(&self, s: &State<T>, out: &mut State<T>) {
        let rate = self.oscillator_rate(s);
        out.c0_re = rate.re;
        out.c0_im = rate.im;
        let (c0r, c0i) = (s.c0_re, s.c0_im);
        for k in 0..self.freqs.len() {
            let (w, g) = (self.freqs[k], self.couplings[k]);
            // ċ_k = -i (ω_k c_k + g_k c₀)
            let ar = w * s.re[k] + g * c0r;
            let ai = w * s.im[k] + g * c0i;
            out.re[k] = ai;
            out.im[k] = -ar;
        }
    }

    fn rk4_step(&self, s: &mut State<T>, sc: &mut Scratch<T>, dt: T) {
        let half = T::lit(0.5) * dt;
        let [k1, k2, k3, k4] = &mut sc.k;
        self.rhs(s, k1);
        axpy(s, k1, half, &mut sc.tmp);
        self.rhs(&sc.tmp, k2);
        axpy(s, k2, half, &mut sc.tmp);
        self.rhs(&sc.tmp, k3);
        axpy(s, k3, dt, &mut sc.tmp);
        self.rhs(&sc.tmp, k4);
        let sixth = dt / T::lit(6.0);
        let two = T::lit(2.0);
        let comb = |a: T, b: T, c: T, d: T| sixth * (a + two * (b + c) + d);
        s.c0_re = s.c0_re + comb(k1.c0_re, k2.c0_re, k3.c0_re, k4.c0_re);
        s.c0_im = s.c0_im + comb(k1.c0_im, k2.c0_im, k3.c0_im, k4.c0_im);
        for k in 0..s.re.len() {
            s.re[k] = s.re[k] + comb(k1.re[k], k2.re[k], k3.re[k], k4.re[k]);
            s.im[k] = s.im[k] + comb(k1.im[k], k2.im[k], k3.im[k], k4.im[k]);
        }
    }
}

/// `out = s + a·k`
fn axpy<T: Real>(s: &State<T>, k: &State<T>, a: T, out: &mut State<T>) {
    out.c0_re = s.c0_re + a * k.c0_re;
    out.c0_im = s.c0_im + a * k.c0_im;
    for i in 0..s.re.len() {
        out.re[i] = s.re[i] + a * k.re[i];
        out.im[i] = s.im[i] + a * k.im[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_system_rotates_freely() {
        let p = SpectralParams::new(0.0, 1.0, 10.0).unwrap();
        let run = discretized_bath_oracle(&p, 5.0, 100, 20.0, 0.05).unwrap();
        for (t, u) in run.trajectory.times().iter().zip(run.trajectory.u()) {
            assert!((u - Complex::new(0.0, -t).exp()).norm() < 1e-9);
        }
        assert!(run.max_norm_deviation < 1e-10);
    }

    #[test]
    fn argument_validation() {
        let p = SpectralParams::new(0.1, 1.0, 10.0).unwrap();
        assert!(discretized_bath_oracle(&p, 5.0, 10, 100.0, 0.01).is_err());
        assert!(discretized_bath_oracle(&p, 5.0, 200, 0.5, 0.01).is_err());
        assert!(discretized_bath_oracle(&p, -1.0, 200, 100.0, 0.01).is_err());
    }
}
