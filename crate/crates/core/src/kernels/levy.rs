//! Symmetric stable profile with characteristic function `exp(-|k|^a / 2)`,
//! `a = 1/g` in `(1, 2]`:
//! `rho(1, z) = (1/pi) int_0^inf exp(-k^a / 2) cos(k z) dk`.

use std::f64::consts::PI;

use crate::numeric::{integrate_breaks, CompensatedSum, Tolerance};
use crate::specfun::ln_gamma;

/// Below this |z| the algebraic tail series is not even tried.
const ASYMPTOTIC_FROM: f64 = 8.0;
/// exp(-K^a/2) < e^-45 beyond K = 90^(1/a).
const ENVELOPE_LOG: f64 = 90.0;

/// Coefficients `(a_n, p_n)` of the large-|z| expansion
/// `rho(1, z) ~ sum_n a_n |z|^{-p_n}`, `p_n = n a + 1`.
pub fn tail_terms(gamma: f64, n_terms: usize) -> Vec<(f64, f64)> {
    let a = 1.0 / gamma;
    (1..=n_terms)
        .map(|n| {
            let nf = n as f64;
            let mag = (nf * 0.5f64.ln() + ln_gamma(nf * a + 1.0) - ln_gamma(nf + 1.0)).exp() / PI;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            (sign * mag * (0.5 * PI * nf * a).sin(), nf * a + 1.0)
        })
        .collect()
}

/// `rho(1, z)` for the Levy family, valid for `g` in `[1/2, 1)`.
pub fn density(gamma: f64, z: f64) -> f64 {
    let z = z.abs();
    if z >= ASYMPTOTIC_FROM {
        if let Some(v) = asymptotic(gamma, z) {
            return v;
        }
    }
    quadrature(gamma, z)
}

fn asymptotic(gamma: f64, z: f64) -> Option<f64> {
    let a = 1.0 / gamma;
    let lz = z.ln();
    let mut s = CompensatedSum::new();
    let mut prev = f64::INFINITY;
    for n in 1..60 {
        let nf = n as f64;
        let sn = (0.5 * PI * nf * a).sin();
        let mag = (nf * 0.5f64.ln() + ln_gamma(nf * a + 1.0) - ln_gamma(nf + 1.0) - (nf * a + 1.0) * lz).exp() / PI;
        if mag > prev {
            return None;
        }
        let term = if n % 2 == 1 { mag * sn } else { -mag * sn };
        s.add(term);
        if mag <= 1e-16 * s.value().abs() {
            return (s.value() > 0.0).then_some(s.value());
        }
        prev = mag;
    }
    None
}

fn quadrature(gamma: f64, z: f64) -> f64 {
    let a = 1.0 / gamma;
    let k_max = ENVELOPE_LOG.powf(gamma);
    let mut pts = vec![0.0, k_max];
    let mut s = 0.125;
    while s < k_max {
        pts.push(s);
        s *= 2.0;
    }
    if z > 0.0 {
        let period = PI / z;
        let mut k = 0.5 * period;
        while k < k_max {
            pts.push(k);
            k += period;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let tol = Tolerance::new(1e-16, 1e-14).with_max_intervals(pts.len() + 4000);
    let q = integrate_breaks(|k: f64| (-0.5 * k.powf(a)).exp() * (k * z).cos(), &pts, tol);
    q.value / PI
}
