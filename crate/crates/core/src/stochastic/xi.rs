use std::f64::consts::PI;

use rayon::prelude::*;

use super::ensemble::PathEnsemble;
use super::rng::{normal_increments, RngSpec};
use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::kernels::{KernelSpec, SingularKernel};
use crate::numeric::{convolve, integrate_breaks, Tolerance};
use crate::specfun::reciprocal_gamma;
use crate::volterra::green_ml;

const QUAD_TOL: Tolerance = Tolerance::new(1e-13, 1e-11);

/// Break points `0, 2^-k t, ..., t/2, t` so the adaptive rule sees the
/// `t^{1-g}` behaviour of `F` at the origin and its slow decay.
fn log_breaks(t: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut x = t;
    let mut rev = Vec::new();
    while x > 1e-6 * t.min(1.0) && rev.len() < 80 {
        rev.push(x);
        x *= 0.5;
    }
    pts.extend(rev.into_iter().rev());
    pts
}

fn green(kernel: &SingularKernel) -> impl Fn(f64) -> f64 + '_ {
    move |t| green_ml(kernel, t).expect("time is in range")
}

/// `E xi(t)^2 = int_0^t F(s)^2 ds` for the kernel of `spec`.
///
/// ```
/// use fracdrift::kernels::KernelSpec;
/// use fracdrift::stochastic::xi_variance_exact;
/// let spec = KernelSpec::mainardi(0.25).unwrap();
/// assert_eq!(xi_variance_exact(&spec, 0.0).unwrap(), 0.0);
/// assert!(xi_variance_exact(&spec, 1.0).unwrap() < 1.0);
/// ```
pub fn xi_variance_exact(spec: &KernelSpec, t: f64) -> Result<f64> {
    xi_variance_for(&spec.singular_kernel(), t)
}

/// [`xi_variance_exact`] for an arbitrary kernel.
pub fn xi_variance_for(kernel: &SingularKernel, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = green(kernel);
    Ok(integrate_breaks(|s| f(s).powi(2), &log_breaks(t), QUAD_TOL).value)
}

/// `E xi(s) xi(t) = int_0^{min(s,t)} F(t-u) F(s-u) du` (Ito isometry).
pub fn xi_covariance_exact(spec: &KernelSpec, s: f64, t: f64) -> Result<f64> {
    xi_covariance_for(&spec.singular_kernel(), s, t)
}

/// [`xi_covariance_exact`] for an arbitrary kernel.
pub fn xi_covariance_for(kernel: &SingularKernel, s: f64, t: f64) -> Result<f64> {
    if !(s >= 0.0 && t >= 0.0) || !(s.is_finite() && t.is_finite()) {
        return Err(domain(format!("times must be finite and >= 0, got ({s}, {t})")));
    }
    let (lo, d) = (s.min(t), (s - t).abs());
    if lo == 0.0 {
        return Ok(0.0);
    }
    let f = green(kernel);
    Ok(integrate_breaks(|v| f(v) * f(v + d), &log_breaks(lo), QUAD_TOL).value)
}

/// Large-time expansion `F(t) ~ sum_k a_k t^{-k a}`, `a = 1 - g`, from the
/// Mittag-Leffler asymptotics `E_a(-x) ~ sum_k (-1)^{k+1} x^-k / Gamma(1 - k a)`.
fn green_tail_coefficients(kernel: &SingularKernel, terms: usize) -> Vec<f64> {
    let c = kernel.laplace_constant();
    let a = 1.0 - kernel.exponent;
    (1..=terms)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * c.powi(-(k as i32)) * reciprocal_gamma(1.0 - k as f64 * a)
        })
        .collect()
}

/// Subdiffusive plateau `lim_t E xi(t)^2 = int_0^inf F^2`: quadrature up to
/// a horizon where the asymptotic series of `F` is accurate, then the tail
/// of the squared series integrated term by term.
pub fn xi_variance_limit(spec: &KernelSpec) -> Result<f64> {
    let g = spec.gamma();
    if !(g < 0.5) {
        return Err(domain(format!("int F^2 diverges unless gamma < 1/2, got {g}")));
    }
    let kernel = spec.singular_kernel();
    let a = 1.0 - g;
    // x = c Gamma(1-g) t^a >= 1e3 makes six asymptotic terms exact to roundoff.
    let horizon = (1e3 / kernel.laplace_constant()).powf(1.0 / a).max(100.0);
    let body = xi_variance_for(&kernel, horizon)?;
    let coef = green_tail_coefficients(&kernel, 6);
    let mut tail = 0.0;
    for (i, ai) in coef.iter().enumerate() {
        for (j, aj) in coef.iter().enumerate() {
            let p = a * (i + j + 2) as f64;
            tail += ai * aj * horizon.powf(1.0 - p) / (p - 1.0);
        }
    }
    Ok(body + tail)
}

/// Covariance of the Gaussian limit `Z` of `eps^{g-1/2} xi(./eps)`:
/// `sin^2(pi g) / (pi^2 c^2) int_0^{min(s,t)} (t-u)^{g-1} (s-u)^{g-1} du`.
///
/// ```
/// use fracdrift::stochastic::z_covariance;
/// let c: f64 = 0.37;
/// let v = z_covariance(0.75, c, 1.0, 1.0).unwrap();
/// let expected = 1.0 / (std::f64::consts::PI.powi(2) * c * c);
/// assert!((v - expected).abs() < 1e-14 * expected);
/// ```
pub fn z_covariance(gamma: f64, c: f64, s: f64, t: f64) -> Result<f64> {
    if !(gamma > 0.5 && gamma < 1.0) {
        return Err(domain(format!("the limit process needs gamma in (1/2, 1), got {gamma}")));
    }
    if !(c > 0.0) {
        return Err(domain(format!("c must be > 0, got {c}")));
    }
    if !(s >= 0.0 && t >= 0.0) {
        return Err(domain(format!("times must be >= 0, got ({s}, {t})")));
    }
    let pref = (PI * gamma).sin().powi(2) / (PI * PI * c * c);
    let (lo, d) = (s.min(t), (s - t).abs());
    if lo == 0.0 {
        return Ok(0.0);
    }
    if d == 0.0 {
        return Ok(pref * lo.powf(2.0 * gamma - 1.0) / (2.0 * gamma - 1.0));
    }
    // int_0^lo v^{g-1} (v+d)^{g-1} dv with v = w^{1/g}: the integrand
    // becomes bounded, (w^{1/g} + d)^{g-1} / g.
    let q = integrate_breaks(
        |w| (w.powf(1.0 / gamma) + d).powf(gamma - 1.0) / gamma,
        &[0.0, 0.5 * lo.powf(gamma), lo.powf(gamma)],
        Tolerance::new(1e-15, 1e-13),
    );
    Ok(pref * q.value)
}

/// Midpoint weights `F((k + 1/2) dt)`, `k = 0..n`.
fn midpoint_kernel(kernel: &SingularKernel, grid: &TimeGrid) -> Result<Vec<f64>> {
    let dt = grid.dt();
    (0..grid.n_steps()).map(|k| green_ml(kernel, (k as f64 + 0.5) * dt)).collect()
}

/// Sample paths of `xi(t) = int_0^t F(t-s) db(s)`:
/// `xi_i = sum_{j<i} F((i-j-1/2) dt) db_j`, with `F` from the
/// Mittag-Leffler closed form and the sums done by FFT convolution.
pub fn sample_xi_paths(spec: &KernelSpec, grid: &TimeGrid, n_paths: usize, rng: &RngSpec) -> Result<PathEnsemble> {
    let mut ens = sample_xi_paths_for(&spec.singular_kernel(), grid, n_paths, rng)?;
    ens.label = format!("xi {spec}");
    Ok(ens)
}

/// [`sample_xi_paths`] for an arbitrary kernel; a zero kernel (`F = 1`)
/// returns the Brownian paths themselves.
pub fn sample_xi_paths_for(
    kernel: &SingularKernel,
    grid: &TimeGrid,
    n_paths: usize,
    rng: &RngSpec,
) -> Result<PathEnsemble> {
    let weights = if kernel.coefficient == 0.0 { None } else { Some(midpoint_kernel(kernel, grid)?) };
    let n = grid.n_steps();
    let dt = grid.dt();
    let paths = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let db = normal_increments(&mut rng.path_rng(p), n, dt);
            let mut path = Vec::with_capacity(n + 1);
            path.push(0.0);
            match &weights {
                None => {
                    let mut acc = 0.0;
                    for d in &db {
                        acc += d;
                        path.push(acc);
                    }
                }
                Some(w) => path.extend(convolve(w, &db)),
            }
            path
        })
        .collect();
    Ok(PathEnsemble {
        grid: *grid,
        paths,
        rng: *rng,
        label: format!("xi c={} g={}", kernel.coefficient, kernel.exponent),
    })
}
