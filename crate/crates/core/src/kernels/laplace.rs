use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Mainardi kernel recovered by numerically inverting its Laplace transform
/// in time, `rho#(x, mu) = mu^{g-1} exp(-mu^g |x|) / 2`, along a deformed
/// Bromwich contour. Independent of the series code path, so it serves as
/// an oracle for [`super::rho`].
///
/// The contour is the hyperbola `mu(u) = m (1 - sin(a - i u))`. Its opening
/// half-angle `pi/2 + a` is kept below `pi/(2g)`, beyond which
/// `exp(-mu^g |x|)` would grow; the classical Talbot cotangent contour
/// wraps around the negative axis and fails for `g > 1/2`.
///
/// ```
/// use fracdrift::kernels::rho_laplace_oracle;
/// let v = rho_laplace_oracle(0.5, 1.0, 0.0).unwrap();
/// assert!((v - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
/// ```
pub fn rho_laplace_oracle(gamma: f64, t: f64, x: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if !(t > 0.0) {
        return Err(domain(format!("time must be > 0, got {t}")));
    }
    let fine = hyperbola(gamma, t, x, 30.0);
    let coarse = hyperbola(gamma, t, x, 22.0);
    if !fine.is_finite() || (fine - coarse).abs() > 1e-8 {
        return Err(Error::Convergence(format!(
            "contour inversion unstable at g={gamma}, t={t}, x={x}: {fine} vs {coarse}"
        )));
    }
    Ok(fine)
}

/// Trapezoid rule on the hyperbola with step chosen so the discretization
/// error is about `exp(-digits)`.
fn hyperbola(gamma: f64, t: f64, x: f64, digits: f64) -> f64 {
    let b_max = (0.5 * PI).min(0.5 * PI / gamma - 0.5 * PI);
    let a = 0.5 * b_max;
    let d = 0.9 * a;
    let h = 2.0 * PI * d / digits;
    let m = 4.0 / t;
    let u_max = ((45.0 + m * t) / (m * t * a.sin())).acosh();
    let n = (u_max / h).ceil() as i64;
    let ax = x.abs();
    let i = Complex64::i();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in -n..=n {
        let u = j as f64 * h;
        let w = Complex64::new(a, -u);
        let mu = m * (1.0 - w.sin());
        let dmu = m * i * w.cos();
        let f = 0.5 * mu.powf(gamma - 1.0) * (-mu.powf(gamma) * ax).exp();
        acc += (mu * t).exp() * f * dmu;
    }
    (acc * h / (2.0 * PI * i)).re
}
