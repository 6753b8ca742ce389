use std::f64::consts::PI;

use super::gamma::{ln_gamma, reciprocal_gamma};
use super::{series_error_estimate, SeriesPolicy};
use crate::error::{domain, Error, Result};
use crate::numeric::{integrate_breaks, CompensatedSum, Tolerance};

/// One-parameter Mittag-Leffler function `E_a(x) = sum x^k / Gamma(a k + 1)`
/// for `a` in `(0, 1]` and `x <= 0`.
///
/// Small `|x|` uses the compensated power series. Once the series starts
/// losing digits to cancellation, the real-line integral representation
/// takes over, and far out the algebraic asymptotic expansion.
///
/// ```
/// use fracdrift::specfun::{mittag_leffler, SeriesPolicy};
/// let p = SeriesPolicy::default();
/// assert!((mittag_leffler(1.0, -2.0, &p).unwrap() - (-2f64).exp()).abs() < 1e-15);
/// // E_{1/2}(-1) = e erfc(1)
/// assert!((mittag_leffler(0.5, -1.0, &p).unwrap() - 0.4275835762).abs() < 1e-10);
/// ```
pub fn mittag_leffler(alpha: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain(format!("Mittag-Leffler order must lie in (0, 1], got {alpha}")));
    }
    if !(x <= 0.0) {
        return Err(domain(format!("Mittag-Leffler argument must be <= 0, got {x}")));
    }
    policy.validate()?;
    ml_negative(alpha, -x, policy)
}

/// Same as [`mittag_leffler`] but admitting orders in `(0, 2)`; needed for
/// the Fourier transform of the superdiffusive Mainardi kernel.
pub(crate) fn mittag_leffler_ext(alpha: f64, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) || !(x <= 0.0) {
        return Err(domain(format!("E_a(x) needs a in (0,2), x <= 0; got a={alpha}, x={x}")));
    }
    ml_negative(alpha, -x, policy)
}

fn ml_negative(alpha: f64, y: f64, policy: &SeriesPolicy) -> Result<f64> {
    if y == 0.0 {
        return Ok(1.0);
    }
    if alpha == 1.0 {
        return Ok((-y).exp());
    }
    let scale = y.powf(1.0 / alpha);
    // The largest series term is about exp(y^(1/a)); beyond this the series
    // cannot deliver rel_tol and is not even attempted.
    let hopeless = scale > (policy.rel_tol / f64::EPSILON).ln() + 4.0;
    if !hopeless {
        if let Some(v) = series(alpha, y, policy) {
            return Ok(v);
        }
    }
    if alpha < 1.0 && y > 1.0 {
        if let Some(v) = asymptotic(alpha, y, policy) {
            return Ok(v);
        }
    }
    integral(alpha, y, policy)
}

fn series(alpha: f64, y: f64, policy: &SeriesPolicy) -> Option<f64> {
    let ly = y.ln();
    let mut s = CompensatedSum::new();
    let mut prev = f64::INFINITY;
    for k in 0..policy.max_terms {
        let kf = k as f64;
        let mag = (kf * ly - ln_gamma(alpha * kf + 1.0)).exp();
        let term = if k % 2 == 0 { mag } else { -mag };
        s.add(term);
        if k > 2 && mag < prev && mag <= 0.25 * f64::EPSILON * s.value().abs() {
            let v = s.value();
            let est = series_error_estimate(s.abs_total(), v);
            // Past order one the function oscillates through zero, so the
            // error budget is absolute there.
            let ok = if alpha < 1.0 {
                est <= policy.rel_tol
            } else {
                est * v.abs() <= policy.rel_tol
            };
            return ok.then_some(v);
        }
        prev = mag;
    }
    None
}

fn asymptotic(alpha: f64, y: f64, policy: &SeriesPolicy) -> Option<f64> {
    // E_a(-y) ~ sum_{k>=1} (-1)^(k+1) y^-k / Gamma(1 - a k)
    let mut s = CompensatedSum::new();
    let mut yk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..=30 {
        yk /= y;
        let term = yk * reciprocal_gamma(1.0 - alpha * k as f64);
        let signed = if k % 2 == 1 { term } else { -term };
        if term.abs() > last && term != 0.0 {
            // Divergence has set in before reaching the tolerance.
            return None;
        }
        if term != 0.0 && k > 1 && term.abs() <= 0.1 * policy.rel_tol * s.value().abs() {
            return Some(s.value());
        }
        s.add(signed);
        if term != 0.0 {
            last = term.abs();
        }
    }
    None
}

fn integral(alpha: f64, y: f64, policy: &SeriesPolicy) -> Result<f64> {
    // E_a(-y) = sin(a pi)/(a pi) int_0^inf exp(-(v y)^(1/a)) / (v^2 + 2 v cos(a pi) + 1) dv,
    // folded onto [0, 1] with v -> 1/v on the outer half.
    let (s, c) = (PI * alpha).sin_cos();
    let inv = 1.0 / alpha;
    let f = |v: f64| {
        let d = v * v + 2.0 * v * c + 1.0;
        let e1 = (-(v * y).powf(inv)).exp();
        let e2 = if v == 0.0 { 0.0 } else { (-(y / v).powf(inv)).exp() };
        (e1 + e2) / d
    };
    let mut pts = vec![0.0, 1.0];
    let reach = 40f64.powf(alpha);
    for p in [0.1 / y, 1.0 / y, 3f64.powf(alpha) / y, reach / y, y / reach, y, -c] {
        if p > 0.0 && p < 1.0 {
            pts.push(p);
        }
    }
    if c < 0.0 {
        let w = s.abs();
        for p in [-c - w, -c + w] {
            if p > 0.0 && p < 1.0 {
                pts.push(p);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let tol = Tolerance::new(1e-17, 0.05 * policy.rel_tol).with_max_intervals(4000);
    let q = integrate_breaks(f, &pts, tol);
    let mut v = s / (alpha * PI) * q.value;
    let mut scale = (s / (alpha * PI) * q.value).abs();
    if alpha > 1.0 {
        let t = y.powf(inv);
        let (si, ci) = (PI / alpha).sin_cos();
        let r = 2.0 / alpha * (t * ci).exp() * (t * si).cos();
        v += r;
        scale = scale.max(r.abs()).max(1e-300);
    }
    if !q.converged && q.error > 10.0 * policy.rel_tol * scale {
        return Err(Error::Convergence(format!(
            "Mittag-Leffler integral for a={alpha}, x={}: error estimate {:e}",
            -y, q.error
        )));
    }
    Ok(v)
}
