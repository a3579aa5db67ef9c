use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos series, g = 7, nine terms.
const G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function for positive arguments.
pub fn gamma(y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!(
            "gamma is defined here only for y > 0, got {y}"
        )));
    }
    Ok(gamma_unchecked(y))
}

pub(crate) fn gamma_unchecked(y: f64) -> f64 {
    if y < 0.5 {
        // Reflection keeps the series in its accurate range.
        return PI / ((PI * y).sin() * gamma_unchecked(1.0 - y));
    }
    let z = y - 1.0;
    let mut sum = COEFFS[0];
    for (i, c) in COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum
}
