use std::f64::consts::PI;

use super::gamma::{gamma_real, sin_pi};
use crate::error::{domain, Result};

/// `B_{2j} / (2j)!` for `j = 1..=7`.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
];

/// Riemann zeta function for real `s != 1`.
///
/// Euler-Maclaurin summation for `s > 1/2`, the functional equation below.
///
/// ```
/// use fracdrift::specfun::zeta;
/// assert!((zeta(2.0).unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
/// assert!((zeta(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-15);
/// ```
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(crate::Error::Pole(1.0));
    }
    if !s.is_finite() {
        return Err(domain(format!("zeta argument must be finite, got {s}")));
    }
    if s >= 0.5 {
        return Ok(zeta_em(s));
    }
    // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    let sin = sin_pi(0.5 * s);
    if s == 0.0 {
        return Ok(-0.5);
    }
    if sin == 0.0 {
        return Ok(0.0); // trivial zeros
    }
    Ok(2f64.powf(s) * PI.powf(s - 1.0) * sin * gamma_real(1.0 - s)? * zeta_em(1.0 - s))
}

fn zeta_em(s: f64) -> f64 {
    const N: usize = 12;
    let n = N as f64;
    let mut sum: f64 = (1..N).rev().map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // Rising factorial s (s+1) ... (s+2j-2) times N^(-s-2j+1).
    let mut rising = s;
    let mut p = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += b * rising * p;
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        p /= n * n;
    }
    sum
}
