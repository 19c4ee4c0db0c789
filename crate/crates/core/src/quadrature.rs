//! Adaptive Gauss–Kronrod quadrature.
//!
//! Global adaptive bisection with the 7/15-point Gauss–Kronrod pair. The
//! segment with the largest error estimate is split until the summed estimate
//! meets the tolerance. Semi-infinite ranges are compactified with
//! `x = a + scale * t / (1 - t)`, `t in [0, 1)`; the open rule never touches
//! the endpoint `t = 1`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::{numeric, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and refinement limits for [`integrate`] and friends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
    /// Maximum number of bisections applied to any one segment.
    pub max_depth: u32,
    pub max_segments: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        let floor = T::epsilon() * T::lit(64.0);
        Self {
            abs: T::lit(1e-10).max(floor),
            rel: floor,
            max_depth: 60,
            max_segments: 20_000,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn with_abs(mut self, abs: T) -> Self {
        self.abs = abs;
        self
    }

    pub fn with_rel(mut self, rel: T) -> Self {
        self.rel = rel;
        self
    }
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    depth: u32,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T: Real> Eq for Segment<T> {}

impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// One application of the 15-point Kronrod rule with its embedded Gauss rule.
/// Returns `(kronrod, |kronrod - gauss|, sum |w f|)`.
fn kronrod15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Result<(T, T, T)> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    let mut abs_sum = fc.abs() * T::lit(WGK[7]);
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = radius * T::lit(x);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        kronrod = kronrod + T::lit(w) * pair;
        abs_sum = abs_sum + T::lit(w) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    let kronrod = kronrod * radius;
    let gauss = gauss * radius;
    if !kronrod.is_finite() {
        return numeric(format!(
            "non-finite integrand on [{}, {}]",
            a.to_f64_lossy(),
            b.to_f64_lossy()
        ));
    }
    Ok((kronrod, (kronrod - gauss).abs(), abs_sum * radius.abs()))
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<T, F>(mut f: F, a: T, b: T, tol: &Tolerance<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if a == b {
        return Ok(T::zero());
    }
    let roundoff = T::epsilon() * T::lit(50.0);
    let (value, error, abs_sum) = kronrod15(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value,
        error,
        depth: 0,
    });
    let mut total = value;
    let mut total_err = error;
    let mut total_abs = abs_sum;
    loop {
        let target = tol.abs.max(tol.rel * total.abs()).max(roundoff * total_abs);
        if total_err <= target {
            break;
        }
        let worst = heap.pop().expect("heap never empty");
        if worst.depth >= tol.max_depth {
            return numeric(format!(
                "quadrature did not converge on [{}, {}]: error {:.3e} at refinement depth {} (target {:.3e})",
                a.to_f64_lossy(),
                b.to_f64_lossy(),
                total_err.to_f64_lossy(),
                worst.depth,
                target.to_f64_lossy()
            ));
        }
        if heap.len() + 2 > tol.max_segments {
            return numeric(format!(
                "quadrature exceeded {} segments on [{}, {}] with error {:.3e}",
                tol.max_segments,
                a.to_f64_lossy(),
                b.to_f64_lossy(),
                total_err.to_f64_lossy()
            ));
        }
        let mid = T::lit(0.5) * (worst.a + worst.b);
        let (v1, e1, s1) = kronrod15(&mut f, worst.a, mid)?;
        let (v2, e2, s2) = kronrod15(&mut f, mid, worst.b)?;
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        total_abs = total_abs + s1 + s2;
        let depth = worst.depth + 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            depth,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            depth,
        });
    }
    // Re-sum to shed the drift of the running update.
    Ok(heap.iter().fold(T::zero(), |acc, s| acc + s.value))
}

/// Integrates `f` over `[a, ∞)` after the substitution
/// `x = a + scale * t / (1 - t)`.
///
/// `f` must decay at least exponentially beyond a few multiples of `scale`.
pub fn integrate_semi_infinite<T, F>(mut f: F, a: T, scale: T, tol: &Tolerance<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let one = T::one();
    integrate(
        |t: T| {
            let gap = one - t;
            let fx = f(a + scale * t / gap);
            if fx == T::zero() {
                T::zero()
            } else {
                fx * scale / (gap * gap)
            }
        },
        T::zero(),
        one,
        tol,
    )
}

/// Fixed composite 7-point Gauss–Legendre rule for complex integrands on
/// `[a, b]` split into `panels` equal panels. Used where the integrand
/// oscillates on a known scale and adaptivity buys nothing.
pub fn gauss_panels<T, F>(mut f: F, a: T, b: T, panels: usize) -> Complex<T>
where
    T: Real,
    F: FnMut(T) -> Complex<T>,
{
    let width = (b - a) / T::from_usize_lossy(panels.max(1));
    let half = T::lit(0.5) * width;
    let mut acc = Complex::new(T::zero(), T::zero());
    for p in 0..panels.max(1) {
        let center = a + width * T::from_usize_lossy(p) + half;
        let mut panel = f(center) * T::lit(WG[3]);
        for k in 0..3 {
            let dx = half * T::lit(XGK[2 * k + 1]);
            panel = panel + (f(center - dx) + f(center + dx)) * T::lit(WG[k]);
        }
        acc = acc + panel * half;
    }
    acc
}

/// Nodes and weights of the 7-point Gauss rule mapped to `[0, 1]`.
pub(crate) fn gauss7_unit<T: Real>() -> [(T, T); 7] {
    let half = T::lit(0.5);
    let mut out = [(T::zero(), T::zero()); 7];
    for k in 0..3 {
        let x = T::lit(XGK[2 * k + 1]);
        let w = T::lit(WG[k]) * half;
        out[2 * k] = (half * (T::one() - x), w);
        out[2 * k + 1] = (half * (T::one() + x), w);
    }
    out[6] = (half, T::lit(WG[3]) * half);
    out
}
