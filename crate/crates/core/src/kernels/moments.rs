use serde::Serialize;

use super::{levy, rho1, Family, KernelSpec};
use crate::error::{domain, Result};
use crate::numeric::{integrate_breaks, linear_fit, Tolerance};

/// Absolute moment `int |x|^n rho(t, x) dx`, or the marker that it diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Moment {
    Finite { value: f64 },
    /// The Levy profile decays like `|x|^-p`; `tail_exponent` is `p` as
    /// fitted from the evaluated density on `[1e2, 1e4]`.
    Divergent { tail_exponent: f64 },
}

impl Moment {
    pub fn value(&self) -> Option<f64> {
        match self {
            Moment::Finite { value } => Some(*value),
            Moment::Divergent { .. } => None,
        }
    }
}

/// ```
/// use fracdrift::kernels::{moment, KernelSpec, Moment};
/// // Heat kernel with variance 2t.
/// let m = moment(&KernelSpec::mainardi(0.5).unwrap(), 1.0, 2.0).unwrap();
/// assert!((m.value().unwrap() - 2.0).abs() < 1e-9);
/// let d = moment(&KernelSpec::levy(0.75).unwrap(), 1.0, 2.0).unwrap();
/// assert!(matches!(d, Moment::Divergent { .. }));
/// ```
pub fn moment(spec: &KernelSpec, t: f64, n: f64) -> Result<Moment> {
    if !(t > 0.0) {
        return Err(domain(format!("time must be > 0, got {t}")));
    }
    if !(n >= 0.0) {
        return Err(domain(format!("moment order must be >= 0, got {n}")));
    }
    let scale = t.powf(n * spec.gamma());
    match spec.family() {
        Family::Mainardi => {
            let v = profile_moment(spec, n, mainardi_cutoff(spec, n)?)?;
            Ok(Moment::Finite { value: scale * v })
        }
        Family::Levy => {
            let alpha = 1.0 / spec.gamma();
            if n >= alpha {
                return Ok(Moment::Divergent { tail_exponent: fitted_tail_exponent(spec)? });
            }
            // Beyond z_tail the algebraic expansion is integrated term by term.
            let z_tail = 40.0;
            let body = profile_moment(spec, n, z_tail)?;
            let tail: f64 = levy::tail_terms(spec.gamma(), 12)
                .iter()
                .map(|&(a, p)| 2.0 * a * z_tail.powf(n + 1.0 - p) / (p - n - 1.0))
                .sum();
            Ok(Moment::Finite { value: scale * (body + tail) })
        }
    }
}

/// `2 int_0^z_end z^n rho(1, z) dz`.
fn profile_moment(spec: &KernelSpec, n: f64, z_end: f64) -> Result<f64> {
    let mut pts = vec![0.0];
    let mut z = 0.5;
    while z < z_end {
        pts.push(z);
        z *= 2.0;
    }
    pts.push(z_end);
    let mut err = None;
    let q = integrate_breaks(
        |z: f64| match rho1(spec, z) {
            Ok(r) => 2.0 * z.powf(n) * r,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        &pts,
        Tolerance::new(1e-15, 1e-12),
    );
    match err {
        Some(e) => Err(e),
        None => Ok(q.value),
    }
}

fn mainardi_cutoff(spec: &KernelSpec, n: f64) -> Result<f64> {
    let mut z: f64 = 1.0;
    while z.powf(n + 1.0) * rho1(spec, z)? > 1e-19 && z < 1e4 {
        z *= 1.25;
    }
    Ok(z)
}

fn fitted_tail_exponent(spec: &KernelSpec) -> Result<f64> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in 0..41 {
        let z = 10f64.powf(2.0 + 2.0 * i as f64 / 40.0);
        xs.push(z.ln());
        ys.push(rho1(spec, z)?.ln());
    }
    Ok(-linear_fit(&xs, &ys)?.slope)
}

/// `max_x rho(t, x) / rho(t, 0)` (independent of `t` by self-similarity)
/// together with the maximizing `z = x t^-g`. Scans `z` in `[0, z_max]`.
pub fn bounded_ratio(spec: &KernelSpec, z_max: f64) -> Result<(f64, f64)> {
    let r0 = rho1(spec, 0.0)?;
    let mut best = (1.0, 0.0);
    let steps = (z_max / 0.005).ceil() as usize;
    for i in 1..=steps {
        let z = i as f64 * 0.005;
        let r = rho1(spec, z)? / r0;
        if r > best.0 {
            best = (r, z);
        }
    }
    Ok(best)
}
