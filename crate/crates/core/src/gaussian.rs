//! Single-mode Gaussian states in the complex ordering `Â = (a, a†)`.
//!
//! The covariance is `σ^{ij} = Tr ρ{Â_i - d_i, Â_j† - d_j*}`, so the vacuum and
//! every coherent state have `σ = 1`, and a squeezed thermal state with
//! `n = ⟨δa†δa⟩`, `m = ⟨δa δa⟩` has `σ = [[2n+1, 2m], [2m*, 2n+1]]`.

use num_complex::Complex;

use crate::dynamics::AmplitudeTrajectory;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Tolerance on the smallest eigenvalue of `σ + K`.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// Relative singular-value cutoff of the pseudo-inverse used in the QFI.
pub const PINV_CUTOFF: f64 = 1e-12;

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[Complex<T>; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn identity() -> Self {
        let (o, z) = (c(T::one(), T::zero()), c(T::zero(), T::zero()));
        Self([[o, z], [z, o]])
    }

    pub fn zero() -> Self {
        let z = c(T::zero(), T::zero());
        Self([[z, z], [z, z]])
    }

    /// `K = diag(1, -1)`.
    pub fn k() -> Self {
        let (o, z) = (c(T::one(), T::zero()), c(T::zero(), T::zero()));
        Self([[o, z], [z, -o]])
    }

    pub fn det(&self) -> Complex<T> {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex<T> {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == T::zero() || !d.re.is_finite() || !d.im.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Self([
            [m[1][1] / d, -m[0][1] / d],
            [-m[1][0] / d, m[0][0] / d],
        ]))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0].conj(), m[0][1].conj()],
            [m[1][0].conj(), m[1][1].conj()],
        ])
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn apply(&self, v: &[Complex<T>; 2]) -> [Complex<T>; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise deviation from Hermiticity.
    fn hermitian_defect(&self) -> T {
        let m = &self.0;
        (m[0][0].im.abs())
            .max(m[1][1].im.abs())
            .max((m[0][1] - m[1][0].conj()).norm())
    }

    /// Smaller eigenvalue of the Hermitian part.
    fn min_eigenvalue(&self) -> T {
        let m = &self.0;
        let (a, d) = (m[0][0].re, m[1][1].re);
        let b = (m[0][1] + m[1][0].conj()) * T::lit(0.5);
        let half = T::lit(0.5);
        half * (a + d) - ((half * (a - d)).powi(2) + b.norm_sqr()).sqrt()
    }

    /// Kronecker product with row index `2i + j`.
    fn kron(&self, o: &Self) -> [[Complex<T>; 4]; 4] {
        let z = c(T::zero(), T::zero());
        let mut out = [[z; 4]; 4];
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        out[2 * i + j][2 * k + l] = self.0[i][k] * o.0[j][l];
                    }
                }
            }
        }
        out
    }

    /// Column-stacked entries `(m₀₀, m₁₀, m₀₁, m₁₁)`.
    fn vec(&self) -> [Complex<T>; 4] {
        [self.0[0][0], self.0[1][0], self.0[0][1], self.0[1][1]]
    }
}

/// Displacement `d = (⟨a⟩, ⟨a†⟩)` and covariance `σ` of a single mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState<T> {
    d: [Complex<T>; 2],
    sigma: Mat2<T>,
}

impl<T: Real> GaussianState<T> {
    /// Validates `d₁ = d₀*`, Hermiticity of `σ` and `σ + K ≥ 0`.
    pub fn new(d: [Complex<T>; 2], sigma: Mat2<T>) -> Result<Self> {
        let tol = T::lit(PHYSICALITY_TOL);
        let finite = d
            .iter()
            .chain(sigma.0.iter().flatten())
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return domain("non-finite Gaussian state entries");
        }
        if (d[1] - d[0].conj()).norm() > tol * (T::one() + d[0].norm()) {
            return domain("displacement must have the form (d, d*)");
        }
        if sigma.hermitian_defect() > tol * (T::one() + sigma.0[0][0].norm()) {
            return domain("covariance matrix is not Hermitian");
        }
        let lam = sigma.add(&Mat2::k()).min_eigenvalue();
        if lam < -tol {
            return domain(format!(
                "covariance violates the uncertainty relation: min eig(sigma + K) = {:.3e}",
                lam.to_f64_lossy()
            ));
        }
        Ok(Self { d, sigma })
    }

    /// Coherent state `|α⟩`: `d = (α, α*)`, `σ = 1`.
    pub fn coherent(alpha: Complex<T>) -> Self {
        Self {
            d: [alpha, alpha.conj()],
            sigma: Mat2::identity(),
        }
    }

    /// Displaced squeezed thermal state with `n = ⟨δa†δa⟩ ≥ 0` and
    /// `m = ⟨δa δa⟩`, `|m|² ≤ n(n+1)`.
    pub fn squeezed_thermal(alpha: Complex<T>, n: T, m: Complex<T>) -> Result<Self> {
        let two = T::lit(2.0);
        let diag = c(two * n + T::one(), T::zero());
        let sigma = Mat2([[diag, m * two], [m.conj() * two, diag]]);
        Self::new([alpha, alpha.conj()], sigma)
    }

    pub fn displacement(&self) -> [Complex<T>; 2] {
        self.d
    }

    pub fn covariance(&self) -> &Mat2<T> {
        &self.sigma
    }

    /// `det(σ + K) = 0` up to rounding.
    pub fn is_pure(&self) -> bool {
        self.sigma.add(&Mat2::k()).det().norm() <= T::lit(PHYSICALITY_TOL)
    }
}

/// Squared Uhlmann fidelity `F = (Tr√(√ρ₀ ρ₁ √ρ₀))²`.
///
/// With `Π = det(σ₀+σ₁)`, `Γ = det(1 + Kσ₀Kσ₁)`, `Λ = det(σ₀+K)det(σ₁+K)`
/// and `δ = d₁ - d₀`:
/// `F = 2 exp(-δ†(σ₀+σ₁)⁻¹δ) / (√Γ - √Λ)`. For single-mode states
/// `Γ = Π + Λ`, and when either state is pure (`Λ = 0`) the denominator is `√Π`.
pub fn fidelity<T: Real>(a: &GaussianState<T>, b: &GaussianState<T>) -> T {
    let k = Mat2::<T>::k();
    let sum = a.sigma.add(&b.sigma);
    let pi = sum.det().re;
    let gamma = Mat2::identity()
        .add(&k.mul(&a.sigma).mul(&k).mul(&b.sigma))
        .det()
        .re;
    let lambda = (a.sigma.add(&k).det() * b.sigma.add(&k).det())
        .re
        .max(T::zero());
    let delta = [b.d[0] - a.d[0], b.d[1] - a.d[1]];
    let exponent = match sum.inverse() {
        Some(inv) => {
            let w = inv.apply(&delta);
            (delta[0].conj() * w[0] + delta[1].conj() * w[1]).re
        }
        None => return T::zero(),
    };
    let denom = gamma.max(pi).sqrt() - lambda.sqrt();
    if !(denom > T::zero()) {
        return T::zero();
    }
    let f = T::lit(2.0) * (-exponent).exp() / denom;
    f.max(T::zero()).min(T::one())
}

/// Bures angle `arccos √F`.
pub fn bures_angle<T: Real>(a: &GaussianState<T>, b: &GaussianState<T>) -> T {
    fidelity(a, b).sqrt().min(T::one()).acos()
}

/// `F_Q = ½ Vec[σ̇]† M⁺ Vec[σ̇] + 2 ḋ†σ⁻¹ḋ` with `M = σ*⊗σ - K⊗K`.
///
/// `M` is singular for pure states; the pseudo-inverse is used, and `σ̇` with
/// a component outside the range of `M` is rejected.
pub fn quantum_fisher_information<T: Real>(
    state: &GaussianState<T>,
    d_dot: [Complex<T>; 2],
    sigma_dot: &Mat2<T>,
) -> Result<T> {
    let tol = T::lit(PHYSICALITY_TOL);
    if (d_dot[1] - d_dot[0].conj()).norm() > tol * (T::one() + d_dot[0].norm()) {
        return domain("displacement derivative must have the form (x, x*)");
    }
    let inv = state
        .sigma
        .inverse()
        .ok_or_else(|| crate::Error::Domain("singular covariance matrix".into()))?;
    let w = inv.apply(&d_dot);
    let displacement_term = T::lit(2.0) * (d_dot[0].conj() * w[0] + d_dot[1].conj() * w[1]).re;

    let v = sigma_dot.vec();
    let scale = v.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if scale == T::zero() {
        return Ok(displacement_term.max(T::zero()));
    }
    let kk = Mat2::<T>::k().kron(&Mat2::k());
    let mut m = state.sigma.conj().kron(&state.sigma);
    for (row, krow) in m.iter_mut().zip(&kk) {
        for (x, y) in row.iter_mut().zip(krow) {
            *x = *x - *y;
        }
    }
    let quad = pinv_quadratic_form(&m, &v)?;
    Ok((T::lit(0.5) * quad + displacement_term).max(T::zero()))
}

/// `v† M⁺ v` for Hermitian `M`, through the real symmetric embedding
/// `[[A, -B], [B, A]]` of `M = A + iB`.
fn pinv_quadratic_form<T: Real>(m: &[[Complex<T>; 4]; 4], v: &[Complex<T>; 4]) -> Result<T> {
    let mut e = [[T::zero(); 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let (a, b) = (m[i][j].re, m[i][j].im);
            e[i][j] = a;
            e[i + 4][j + 4] = a;
            e[i][j + 4] = -b;
            e[i + 4][j] = b;
        }
    }
    let (vals, vecs) = jacobi_eigen(e);
    let x: [T; 8] = std::array::from_fn(|i| if i < 4 { v[i].re } else { v[i - 4].im });
    let x_norm = x.iter().fold(T::zero(), |s, &y| s + y * y).sqrt();
    let top = vals.iter().fold(T::zero(), |m, l| m.max(l.abs()));
    let cut = top * T::lit(PINV_CUTOFF);
    let mut form = T::zero();
    let mut null_sq = T::zero();
    for k in 0..8 {
        let proj = (0..8).fold(T::zero(), |s, i| s + vecs[i][k] * x[i]);
        if vals[k].abs() > cut {
            form = form + proj * proj / vals[k];
        } else {
            null_sq = null_sq + proj * proj;
        }
    }
    let range_tol = T::lit(1e-8).max(T::epsilon().sqrt());
    if null_sq.sqrt() > range_tol * x_norm {
        return domain("covariance derivative lies outside the range of the metric matrix");
    }
    Ok(form)
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric 8×8 matrix.
/// Returns eigenvalues and the matrix whose columns are eigenvectors.
fn jacobi_eigen<T: Real>(mut a: [[T; 8]; 8]) -> ([T; 8], [[T; 8]; 8]) {
    const N: usize = 8;
    let mut v = [[T::zero(); N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    for _sweep in 0..100 {
        let off = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[i][j] * a[i][j]);
        let diag = (0..N).fold(T::zero(), |s, i| s + a[i][i] * a[i][i]);
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..N - 1 {
            for q in p + 1..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = (t * t + T::one()).sqrt().recip();
                let sn = t * cs;
                for k in 0..N {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = cs * vp - sn * vq;
                    row[q] = sn * vp + cs * vq;
                }
            }
        }
    }
    (std::array::from_fn(|i| a[i][i]), v)
}

/// Coherent initial state `|α⟩` carried along an amplitude trajectory:
/// `d_t = (αu(t), α*u(t)*)`, `σ_t = 1`.
#[derive(Debug, Clone, Copy)]
pub struct CoherentTrajectory<'a, T> {
    pub alpha: Complex<T>,
    pub traj: &'a AmplitudeTrajectory<T>,
}

impl<'a, T: Real> CoherentTrajectory<'a, T> {
    pub fn new(alpha: Complex<T>, traj: &'a AmplitudeTrajectory<T>) -> Self {
        Self { alpha, traj }
    }

    /// State at grid index `i`.
    pub fn state(&self, i: usize) -> GaussianState<T> {
        GaussianState::coherent(self.alpha * self.traj.u()[i])
    }

    pub fn initial_state(&self) -> GaussianState<T> {
        GaussianState::coherent(self.alpha)
    }

    /// `ḋ_t = (αu̇, α*u̇*)` at grid index `i`.
    pub fn d_dot(&self, i: usize) -> [Complex<T>; 2] {
        let x = self.alpha * self.traj.du()[i];
        [x, x.conj()]
    }

    /// QFI along the trajectory at grid index `i` (`σ̇ = 0`).
    pub fn fisher_information(&self, i: usize) -> Result<T> {
        quantum_fisher_information(&self.state(i), self.d_dot(i), &Mat2::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn coherent_fidelity_closed_form() {
        let a = C::new(1.3, -0.4);
        let u = C::new(0.2, 0.7);
        let f = fidelity(&GaussianState::coherent(a), &GaussianState::coherent(a * u));
        let expect = (-(a * (C::new(1.0, 0.0) - u)).norm_sqr()).exp();
        assert!((f - expect).abs() < 1e-14);
    }

    #[test]
    fn identical_states() {
        let s = GaussianState::squeezed_thermal(C::new(0.5, 0.1), 0.7, C::new(0.2, -0.3)).unwrap();
        assert!((fidelity(&s, &s) - 1.0).abs() < 1e-12);
        assert!(bures_angle(&s, &s) < 1e-6);
    }

    #[test]
    fn thermal_states_fidelity() {
        // Two thermal states: F = 1/(√((n₀+1)(n₁+1)) - √(n₀n₁))²
        let (n0, n1) = (0.3, 1.1);
        let z = C::new(0.0, 0.0);
        let a = GaussianState::squeezed_thermal(z, n0, z).unwrap();
        let b = GaussianState::squeezed_thermal(z, n1, z).unwrap();
        let expect = 1.0 / (((n0 + 1.0) * (n1 + 1.0)).sqrt() - (n0 * n1).sqrt()).powi(2);
        assert!((fidelity(&a, &b) - expect).abs() < 1e-13);
    }

    #[test]
    fn construction_rejects_unphysical_input() {
        let z = C::new(0.0, 0.0);
        assert!(GaussianState::squeezed_thermal(z, -0.1, z).is_err());
        assert!(GaussianState::squeezed_thermal(z, 0.5, C::new(1.0, 0.0)).is_err());
        let bad_d = GaussianState::new([C::new(1.0, 1.0), C::new(1.0, 1.0)], Mat2::identity());
        assert!(bad_d.is_err());
        let mut m = Mat2::<f64>::identity();
        m.0[0][1] = C::new(0.1, 0.0);
        assert!(GaussianState::new([z, z], m).is_err());
        assert!(GaussianState::coherent(C::new(2.0, 0.0)).is_pure());
    }

    #[test]
    fn qfi_of_coherent_motion() {
        let s = GaussianState::coherent(C::new(3.0, 1.0));
        let x = C::new(0.4, -1.2);
        let q = quantum_fisher_information(&s, [x, x.conj()], &Mat2::zero()).unwrap();
        assert!((q - 4.0 * x.norm_sqr()).abs() < 1e-12);
        let zero = quantum_fisher_information(&s, [C::new(0.0, 0.0); 2], &Mat2::zero()).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn qfi_rejects_derivative_outside_range() {
        let s = GaussianState::coherent(C::new(1.0, 0.0));
        let z = C::new(0.0, 0.0);
        // Growing thermal occupation from a pure state is not in the range of M.
        let sd = Mat2([[C::new(1.0, 0.0), z], [z, C::new(1.0, 0.0)]]);
        assert!(quantum_fisher_information(&s, [z, z], &sd).is_err());
    }

    #[test]
    fn qfi_of_thermal_occupation_change() {
        let (n, dn) = (0.8, 0.3);
        let z = C::new(0.0, 0.0);
        let s = GaussianState::squeezed_thermal(z, n, z).unwrap();
        let sd = Mat2([[C::new(2.0 * dn, 0.0), z], [z, C::new(2.0 * dn, 0.0)]]);
        let q = quantum_fisher_information(&s, [z, z], &sd).unwrap();
        assert!((q - dn * dn / (n * (n + 1.0))).abs() < 1e-12);
    }

    #[test]
    fn jacobi_diagonalizes() {
        let mut a = [[0.0f64; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                a[i][j] = 1.0 / (1.0 + i as f64 + j as f64);
            }
        }
        let (vals, vecs) = jacobi_eigen(a);
        for k in 0..8 {
            for i in 0..8 {
                let av: f64 = (0..8).map(|j| a[i][j] * vecs[j][k]).sum();
                assert!((av - vals[k] * vecs[i][k]).abs() < 1e-12);
            }
        }
    }
}
