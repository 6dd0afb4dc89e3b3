//! Euler gamma function.
//!
//! Lanczos approximation with g = 7 and the standard nine-term coefficient
//! set; reflection for arguments below 1/2. Small integers are exact.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
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

/// Largest argument for which Γ(x) is finite in f64.
pub const GAMMA_MAX_ARG: f64 = 171.0;

/// Γ(x) for 0 < x ≤ 171.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= GAMMA_MAX_ARG) {
        return Err(Error::Domain {
            function: "gamma",
            value: x,
        });
    }
    Ok(gamma_unchecked(x))
}

/// Γ(x) without the domain check. Callers guarantee 0 < x ≤ 171.
pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x == x.floor() && x <= 23.0 {
        // (x-1)! is exact in f64 up to here
        return (2..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * lanczos(1.0 - x))
    } else {
        lanczos(x)
    }
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    // split the power so w^(z+1/2) cannot overflow before exp(-w) is applied
    let half = w.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * ((-w).exp() * half) * series
}

/// 1/Γ(x), extended by continuity to the poles at 0, −1, −2, …
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 0.0 {
        if x > GAMMA_MAX_ARG {
            return 0.0;
        }
        return 1.0 / gamma_unchecked(x);
    }
    // x < 0, non-integer: 1/Γ(x) = sin(πx) Γ(1−x) / π
    (PI * x).sin() * gamma_unchecked(1.0 - x) / PI
}
