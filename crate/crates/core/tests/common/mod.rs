//! Reference computations shared by the integration tests. Nothing here calls
//! into the library's numerics.

#![allow(dead_code)]

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre rule with `panels` equal panels of `order` points.
pub fn composite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> f64 {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, w) in &rule {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

pub fn composite_c<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Complex64 {
    let re = composite(|x| f(x).re, a, b, panels, order);
    let im = composite(|x| f(x).im, a, b, panels, order);
    Complex64::new(re, im)
}

pub fn density(eta: f64, s: f64, wc: f64, w: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    eta * w.powf(s) * wc.powf(1.0 - s) * (-w / wc).exp()
}

/// `∫₀^∞ J(ω) e^{-iωt} dω` with `ω = v²`, which removes the `ω^s` endpoint
/// singularity, truncated where `J` is below 1e-20 of its scale.
pub fn kernel_by_quadrature(eta: f64, s: f64, wc: f64, t: f64) -> Complex64 {
    let top = (wc * (60.0 + 5.0 * s)).sqrt();
    let panels = ((top * top * t.max(1.0)) / 0.5).ceil() as usize + 200;
    composite_c(
        |v| {
            let w = v * v;
            Complex64::new(0.0, -w * t).exp() * (2.0 * v * density(eta, s, wc, w))
        },
        0.0,
        top,
        panels,
        10,
    )
}

/// Principal value `P∫₀^∞ J(x)/(ω - x) dx` by symmetric excision of
/// `(ω - ε, ω + ε)`. Near the pole `x = ω ∓ e^y` turns each side into a
/// smooth integral in `y`; `[0, ω/2]` uses `x = v²` for the `x^s` endpoint.
/// The excision error is `O(ε)`.
pub fn principal_value_by_excision(eta: f64, s: f64, wc: f64, w: f64, eps: f64) -> f64 {
    let j = |x: f64| density(eta, s, wc, x);
    let low = composite(
        |v| 2.0 * v * j(v * v) / (w - v * v),
        0.0,
        (0.5 * w).sqrt(),
        200,
        12,
    );
    let below = composite(|y| j(w - y.exp()), eps.ln(), (0.5 * w).ln(), 400, 12);
    let above = composite(|y| -j(w + y.exp()), eps.ln(), w.ln(), 400, 12);
    let far = composite(|x| j(x) / (w - x), 2.0 * w, 2.0 * w + 80.0 * wc, 2000, 12);
    low + below + above + far
}

/// Gaussian Wigner function with real mean and covariance in `(x, p)`,
/// `e^{-½ΔᵀΣ⁻¹Δ}/(π√det Σ)`.
pub fn wigner(mean: [f64; 2], cov: [[f64; 2]; 2], x: f64, p: f64) -> f64 {
    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    let inv = [
        [cov[1][1] / det, -cov[0][1] / det],
        [-cov[1][0] / det, cov[0][0] / det],
    ];
    let d = [x - mean[0], p - mean[1]];
    let q =
        d[0] * (inv[0][0] * d[0] + inv[0][1] * d[1]) + d[1] * (inv[1][0] * d[0] + inv[1][1] * d[1]);
    (-0.5 * q).exp() / (std::f64::consts::PI * det.sqrt())
}

/// `‖W_b - W_a‖₂` for two coherent states with complex amplitudes `a`, `b`, by
/// tensor-product Gauss–Legendre over a box that holds both Gaussians.
pub fn wigner_l2_distance(a: Complex64, b: Complex64) -> f64 {
    let r2 = std::f64::consts::SQRT_2;
    let ma = [r2 * a.re, r2 * a.im];
    let mb = [r2 * b.re, r2 * b.im];
    let cov = [[0.5, 0.0], [0.0, 0.5]];
    let pad = 9.0;
    let (x0, x1) = (ma[0].min(mb[0]) - pad, ma[0].max(mb[0]) + pad);
    let (p0, p1) = (ma[1].min(mb[1]) - pad, ma[1].max(mb[1]) + pad);
    let panels = |lo: f64, hi: f64| ((hi - lo) / 0.5).ceil() as usize;
    let (nx, np) = (panels(x0, x1), panels(p0, p1));
    let sq = composite(
        |x| {
            composite(
                |p| {
                    let d = wigner(mb, cov, x, p) - wigner(ma, cov, x, p);
                    d * d
                },
                p0,
                p1,
                np,
                8,
            )
        },
        x0,
        x1,
        nx,
        8,
    );
    sq.sqrt()
}

/// Fidelity test vector computed in a truncated Fock basis (dimension 80)
/// from the density matrices of two displaced squeezed thermal states.
/// Covariances use the `(a, a†)` ordering, `σ = [[2n+1, 2m], [2m*, 2n+1]]`.
pub struct FockFidelityCase {
    pub d0: Complex64,
    pub sigma0: [[Complex64; 2]; 2],
    pub d1: Complex64,
    pub sigma1: [[Complex64; 2]; 2],
    pub fidelity: f64,
}

pub fn fock_fidelity_case() -> FockFidelityCase {
    let c = Complex64::new;
    let off0 = c(-0.6539204401143012, -0.065610892928841924);
    let off1 = c(-0.2473645508750918, -0.13513587004215366);
    FockFidelityCase {
        d0: c(0.3, 0.0),
        sigma0: [
            [c(1.7297157949415283, 0.0), off0],
            [off0.conj(), c(1.7297157949415283, 0.0)],
        ],
        d1: c(0.1, 0.2),
        sigma1: [
            [c(1.4280934578667064, 0.0), off1],
            [off1.conj(), c(1.4280934578667064, 0.0)],
        ],
        fidelity: 0.9333075465984683,
    }
}

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    let rule = gauss_legendre(10);
    let s: f64 = rule.iter().map(|&(x, w)| w * x.powi(18)).sum();
    assert!((s - 2.0 / 19.0).abs() < 1e-14);
    let total: f64 = rule.iter().map(|&(_, w)| w).sum();
    assert!((total - 2.0).abs() < 1e-14);
}
