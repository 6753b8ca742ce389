use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Gamma(x + 1) form).
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// `sin(pi x)` with exact zeros at the integers and without the loss of
/// accuracy of `(PI * x).sin()` for large `|x|`.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    let s = if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    };
    s
}

pub(crate) fn is_pole(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Euler's Gamma function on the real line.
///
/// Lanczos approximation for `x >= 1/2`, reflection below.
///
/// ```
/// let g = fracdrift::specfun::gamma_real(0.5).unwrap();
/// assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-14);
/// assert!(fracdrift::specfun::gamma_real(-2.0).is_err());
/// ```
pub fn gamma_real(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unchecked(1.0 - x));
    }
    if x == x.floor() && x <= 23.0 {
        // Exact factorials keep integer arguments clean.
        let mut p = 1.0;
        let mut k = 2.0;
        while k < x {
            p *= k;
            k += 1.0;
        }
        return p;
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    let a = lanczos_sum(xm);
    // Split the power so that t^(x - 1/2) does not overflow before e^-t.
    let half = t.powf(0.5 * (xm + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * a
}

/// `1 / Gamma(x)`, an entire function: exactly zero at the poles of Gamma.
///
/// ```
/// use fracdrift::specfun::reciprocal_gamma;
/// assert_eq!(reciprocal_gamma(0.0), 0.0);
/// assert_eq!(reciprocal_gamma(-3.0), 0.0);
/// assert!((reciprocal_gamma(0.5) - 0.5641895835477563).abs() < 1e-15);
/// ```
pub fn reciprocal_gamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi, no division by sin.
        return sin_pi(x) * gamma_unchecked(1.0 - x) / PI;
    }
    if x > 171.7 {
        return (-ln_gamma(x)).exp();
    }
    1.0 / gamma_unchecked(x)
}

/// `ln |Gamma(x)|`; infinite at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if is_pole(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return (PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x);
    }
    if x < 20.0 {
        return gamma_unchecked(x).abs().ln();
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln()
}

/// Sign of `Gamma(x)` (zero at the poles).
pub fn gamma_sign(x: f64) -> f64 {
    if is_pole(x) {
        0.0
    } else if x > 0.0 {
        1.0
    } else if (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Euler Beta function for positive arguments.
pub fn beta(a: f64, b: f64) -> f64 {
    if a + b < 150.0 {
        gamma_unchecked(a) * gamma_unchecked(b) / gamma_unchecked(a + b)
    } else {
        (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
    }
}
