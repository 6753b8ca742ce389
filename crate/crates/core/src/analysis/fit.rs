use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::linear_fit;

/// Least-squares power law `v = prefactor * t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Fewest samples [`fit_power_law`] accepts inside the window.
pub const MIN_FIT_POINTS: usize = 8;

/// Fits `log v` against `log t` over the samples with `t` in `window`.
///
/// ```
/// use fracdrift::analysis::fit_power_law;
/// let ts: Vec<f64> = (1..=20).map(|i| i as f64).collect();
/// let vs: Vec<f64> = ts.iter().map(|t| 3.0 * t * t).collect();
/// let fit = fit_power_law(&ts, &vs, (1.0, 20.0)).unwrap();
/// assert!((fit.exponent - 2.0).abs() < 1e-12);
/// assert!((fit.prefactor - 3.0).abs() < 1e-10);
/// ```
pub fn fit_power_law(ts: &[f64], vs: &[f64], window: (f64, f64)) -> Result<PowerLawFit> {
    if ts.len() != vs.len() {
        return Err(Error::InsufficientData(format!("{} times but {} values", ts.len(), vs.len())));
    }
    let (lo, hi) = window;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (&t, &v) in ts.iter().zip(vs) {
        if t >= lo && t <= hi {
            if !(v > 0.0) || !(t > 0.0) {
                return Err(Error::InsufficientData(format!("nonpositive sample ({t}, {v}) in the window")));
            }
            xs.push(t.ln());
            ys.push(v.ln());
        }
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} points in [{lo}, {hi}], need at least {MIN_FIT_POINTS}",
            xs.len()
        )));
    }
    let line = linear_fit(&xs, &ys)?;
    Ok(PowerLawFit { exponent: line.slope, prefactor: line.intercept.exp(), r_squared: line.r_squared })
}

/// `n` logarithmically spaced points covering `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| if i == 0 { lo } else if i + 1 == n { hi } else { (a + (b - a) * i as f64 / (n - 1) as f64).exp() }).collect()
}
