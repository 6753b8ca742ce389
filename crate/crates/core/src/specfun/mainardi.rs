use std::f64::consts::PI;

use super::gamma::{ln_gamma, reciprocal_gamma, sin_pi};
use super::{series_error_estimate, SeriesPolicy};
use crate::error::{domain, Error, Result};
use crate::numeric::{integrate_breaks, linear_fit, CompensatedSum, Tolerance};

/// The Mainardi function
/// `M(z, g) = sum_k (-z)^k / (k! Gamma(1 - g (k + 1)))` for `z >= 0`,
/// `g` in `(0, 1)`.
///
/// The compensated series is used while it keeps `policy.rel_tol`; past
/// that (or past an explicit `asymptotic_crossover_z`) the function is
/// computed from Kanter's positive integral representation, which holds
/// full relative accuracy deep into the stretched-exponential tail.
///
/// ```
/// use fracdrift::specfun::{mainardi, SeriesPolicy};
/// let p = SeriesPolicy::default();
/// // At g = 1/2 the function is a Gaussian: exp(-z^2/4)/sqrt(pi).
/// let m = mainardi(1.0, 0.5, &p).unwrap();
/// assert!((m - (-0.25f64).exp() / std::f64::consts::PI.sqrt()).abs() < 1e-13);
/// ```
pub fn mainardi(z: f64, gamma: f64, policy: &SeriesPolicy) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain(format!("Mainardi order must lie in (0, 1), got {gamma}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain(format!("Mainardi argument must be finite and >= 0, got {z}")));
    }
    policy.validate()?;
    if z == 0.0 {
        return Ok(reciprocal_gamma(1.0 - gamma));
    }
    match policy.asymptotic_crossover_z {
        Some(zc) if z <= zc => {
            let (v, est) = series(z, gamma, policy.max_terms);
            if est > policy.rel_tol {
                return Err(Error::Precision(format!(
                    "Mainardi series at z={z}, g={gamma} keeps only {:.1} digits; \
                     asymptotic_crossover_z={zc} is too large",
                    -est.log10()
                )));
            }
            Ok(v)
        }
        Some(_) => kanter(z, gamma, policy.rel_tol),
        None => {
            let (v, est) = series(z, gamma, policy.max_terms);
            if est <= policy.rel_tol {
                Ok(v)
            } else {
                kanter(z, gamma, policy.rel_tol)
            }
        }
    }
}

/// Returns the series value and its estimated relative error.
fn series(z: f64, gamma: f64, max_terms: usize) -> (f64, f64) {
    // Reflection turns each term into
    // (-z)^k Gamma(g (k+1)) sin(pi g (k+1)) / (pi k!),
    // which is evaluated in log form so that no factor overflows.
    let lz = z.ln();
    let mut s = CompensatedSum::new();
    s.add(reciprocal_gamma(1.0 - gamma));
    let mut prev = f64::INFINITY;
    for k in 1..max_terms {
        let kf = k as f64;
        let a = gamma * (kf + 1.0);
        let sp = sin_pi(a);
        let mag = (kf * lz + ln_gamma(a) - ln_gamma(kf + 1.0)).exp() / PI;
        let term = if k % 2 == 0 { mag * sp } else { -mag * sp };
        s.add(term);
        if mag < prev && mag <= 0.25 * f64::EPSILON * s.value().abs() {
            let v = s.value();
            return (v, series_error_estimate(s.abs_total(), v));
        }
        prev = mag;
    }
    (s.value(), f64::INFINITY)
}

/// `ln A(phi)` for Kanter's function
/// `A(phi) = [sin(g phi)^g sin((1-g) phi)^(1-g) / sin(phi)]^(1/(1-g))`.
fn ln_kanter_a(phi: f64, gamma: f64) -> f64 {
    let g1 = 1.0 - gamma;
    (gamma * (gamma * phi).sin().ln() + g1 * (g1 * phi).sin().ln() - phi.sin().ln()) / g1
}

fn kanter(z: f64, gamma: f64, rel_tol: f64) -> Result<f64> {
    let g1 = 1.0 - gamma;
    let w = z.powf(1.0 / g1);
    let f = |phi: f64| {
        let la = ln_kanter_a(phi, gamma);
        let a = la.exp();
        let e = a * w;
        if !e.is_finite() || e > 745.0 {
            0.0
        } else {
            (la - e).exp()
        }
    };
    // The mass concentrates near phi = 0 with width ~ w^{-1/2} once w is large.
    let mut pts = vec![0.0, PI];
    let width = 1.0 / w.max(1e-300).sqrt();
    for p in [0.25 * width, width, 4.0 * width, 0.5 * PI, 0.9 * PI] {
        if p > 0.0 && p < PI {
            pts.push(p);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let q = integrate_breaks(f, &pts, Tolerance::new(0.0, 0.05 * rel_tol).with_max_intervals(4000));
    if !q.converged && q.error > rel_tol * q.value.abs() {
        return Err(Error::Convergence(format!(
            "Mainardi tail integral at z={z}, g={gamma}: error {:e} on value {:e}",
            q.error, q.value
        )));
    }
    // z^{g/(1-g)} may overflow only for absurd z; the integral is then 0.
    let pre = (gamma / g1 * z.ln()).exp() / (PI * g1);
    Ok(if q.value == 0.0 { 0.0 } else { pre * q.value })
}

/// The largest `z` (on a 0.05 grid) where the compensated series still
/// holds 6 significant digits: the classical crossover point.
pub fn mainardi_crossover(gamma: f64, policy: &SeriesPolicy) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain(format!("Mainardi order must lie in (0, 1), got {gamma}")));
    }
    let mut last_ok = 0.0;
    let mut z: f64 = 0.05;
    while z < 200.0 {
        let (_, est) = series(z, gamma, policy.max_terms);
        if est > 1e-6 {
            break;
        }
        last_ok = z;
        z += 0.05;
    }
    Ok(last_ok)
}

/// Stretched-exponential tail `M(z) ~ A z^{(2g-1)/(2-2g)} exp(-B z^{1/(1-g)})`
/// with `A`, `B` calibrated by a log-linear least-squares fit on the decade
/// below the series crossover. Kept as a diagnostic: the calibrated `B`
/// can be compared with the saddle-point value `(1-g) g^{g/(1-g)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainardiTail {
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub z_star: f64,
}

impl MainardiTail {
    pub fn calibrate(gamma: f64, policy: &SeriesPolicy) -> Result<Self> {
        let z_star = mainardi_crossover(gamma, policy)?;
        if z_star <= 0.0 {
            return Err(Error::InsufficientData("series never reaches 6 digits".into()));
        }
        let p = (2.0 * gamma - 1.0) / (2.0 - 2.0 * gamma);
        let q = 1.0 / (1.0 - gamma);
        let n = 40;
        let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for i in 0..n {
            let z = z_star * 10f64.powf(-1.0 + i as f64 / (n - 1) as f64);
            let (m, _) = series(z, gamma, policy.max_terms);
            if m > 0.0 {
                xs.push(z.powf(q));
                ys.push(m.ln() - p * z.ln());
            }
        }
        let fit = linear_fit(&xs, &ys)?;
        Ok(Self { gamma, a: fit.intercept.exp(), b: -fit.slope, z_star })
    }

    pub fn eval(&self, z: f64) -> f64 {
        let g = self.gamma;
        self.a * z.powf((2.0 * g - 1.0) / (2.0 - 2.0 * g)) * (-self.b * z.powf(1.0 / (1.0 - g))).exp()
    }

    /// Saddle-point exponent `(1-g) g^{g/(1-g)}` for comparison.
    pub fn saddle_b(gamma: f64) -> f64 {
        (1.0 - gamma) * gamma.powf(gamma / (1.0 - gamma))
    }
}
