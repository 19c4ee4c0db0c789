//! Special functions.

use crate::scalar::Real;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's gamma function for real arguments.
///
/// Uses the reflection formula below 1/2. Poles at the non-positive integers
/// return infinity.
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        if x == x.floor() {
            return T::infinity();
        }
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    (T::TAU()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}
