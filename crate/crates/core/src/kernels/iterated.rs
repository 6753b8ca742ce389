use serde::Serialize;

use super::SingularKernel;
use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::numeric::product::ProductWeights;
use crate::numeric::quad::gauss_legendre;
use crate::specfun::reciprocal_gamma;

/// `K^{*(n+1)}(t) = k_(n) t^{n - (n+1) g}`: the kernel convolved with
/// itself `n` times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IteratedKernel {
    pub gamma: f64,
    pub n: usize,
    pub coefficient: f64,
    pub exponent: f64,
}

impl IteratedKernel {
    /// `k_(n) = (c Gamma(1-g))^{n+1} / Gamma((n+1)(1-g))`.
    pub fn new(kernel: &SingularKernel, n: usize) -> Result<Self> {
        let g = kernel.exponent;
        let n1 = (n + 1) as f64;
        let exponent = n as f64 - n1 * g;
        if !(exponent > -1.0) {
            return Err(domain(format!(
                "iterate n={n} with g={g} has exponent {exponent} <= -1 and is not integrable"
            )));
        }
        let coefficient = kernel.laplace_constant().powi(n as i32 + 1) * reciprocal_gamma(n1 * (1.0 - g));
        Ok(Self { gamma: g, n, coefficient, exponent })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficient * t.powf(self.exponent)
    }
}

/// Closed form of the `n`-fold self-convolution at time `t`.
///
/// ```
/// use fracdrift::kernels::{iterated_kernel_closed, KernelSpec};
/// let k = KernelSpec::mainardi(0.5).unwrap().singular_kernel();
/// assert!((iterated_kernel_closed(&k, 1, 1.0).unwrap() - 0.25).abs() < 1e-15);
/// ```
pub fn iterated_kernel_closed(kernel: &SingularKernel, n: usize, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("time must be > 0, got {t}")));
    }
    Ok(IteratedKernel::new(kernel, n)?.eval(t))
}

/// Number of cells next to the origin treated by the power-law-aware rule.
const NEAR: usize = 32;

/// The `n`-fold self-convolution computed by product integration on `grid`
/// and read off at `t` (linear interpolation between nodes).
///
/// Each convolution `g -> int_0^T K(T - s) g(s) ds` integrates
/// `(T - s)^-g` exactly. Away from the origin `g` is taken piecewise
/// linear; on the first cells, where the previous iterate behaves like
/// `s^beta`, the smooth factor `g / s^beta` is interpolated instead, with
/// `beta` read off the data. Cells touching a singularity use convergent
/// binomial expansions.
pub fn iterated_kernel_numeric(kernel: &SingularKernel, n: usize, t: f64, grid: &TimeGrid) -> Result<f64> {
    let g = kernel.exponent;
    if !(g < 1.0) {
        return Err(domain(format!("kernel exponent must be < 1, got {g}")));
    }
    IteratedKernel::new(kernel, n)?;
    if !(t > 0.0 && t <= grid.t_end() * (1.0 + 1e-12)) {
        return Err(domain(format!("t = {t} must lie in (0, {}]", grid.t_end())));
    }
    let nn = grid.n_steps();
    let dt = grid.dt();
    let c = kernel.coefficient;
    let weights = ProductWeights::new(g, nn);
    let scale = c * dt.powf(1.0 - g);

    // Level 0 is the kernel itself: exactly c s^-g.
    let mut beta = -g;
    let mut vals: Vec<f64> = (0..=nn).map(|i| if i == 0 { f64::INFINITY } else { kernel.eval(grid.t(i)) }).collect();
    let (gx, gw) = gauss_legendre(8);
    for _ in 0..n {
        let psi: Vec<f64> = {
            let mut p: Vec<f64> = (0..=nn)
                .map(|j| if j == 0 { 0.0 } else { vals[j] / grid.t(j).powf(beta) })
                .collect();
            p[0] = 2.0 * p[1] - p[2];
            p
        };
        let mut next = vec![0.0; nn + 1];
        for i in 1..=nn {
            let tt = grid.t(i);
            let mut acc = 0.0;
            let near_end = NEAR.min(i);
            for j in 0..near_end {
                acc += near_cell(j, i, tt, dt, g, beta, psi[j], psi[j + 1], &gx, &gw);
            }
            let far = if i > NEAR {
                let mut s = 0.0;
                for j in NEAR..i {
                    let m = i - j;
                    s += weights.left[m] * vals[j] + weights.right[m] * vals[j + 1];
                }
                scale * s
            } else {
                0.0
            };
            next[i] = c * acc + far;
        }
        // Read the new power from the first nodes: exact for pure powers.
        beta = (next[2] / next[1]).ln() / 2f64.ln();
        next[0] = if beta > 0.0 { 0.0 } else if beta == 0.0 { next[1] } else { f64::INFINITY };
        vals = next;
    }
    let s = t / dt;
    let i = (s.floor() as usize).min(nn - 1);
    let frac = s - i as f64;
    if i == 0 {
        // Use the power law between 0 and the first node.
        return Ok(vals[1] * (t / dt).powf(beta));
    }
    Ok(vals[i] * (1.0 - frac) + vals[i + 1] * frac)
}

/// `int_{t_j}^{t_j+1} (T - s)^-g s^beta psi(s) ds` with `psi` linear
/// between `pj` and `pj1`.
#[allow(clippy::too_many_arguments)]
fn near_cell(j: usize, i: usize, tt: f64, dt: f64, g: f64, beta: f64, pj: f64, pj1: f64, gx: &[f64], gw: &[f64]) -> f64 {
    let q = (pj1 - pj) / dt;
    let a = j as f64 * dt;
    if j == 0 && i == 1 {
        // Both ends singular: split at the midpoint.
        let half = 0.5 * dt;
        return origin_expansion(tt, half, g, beta, pj, q) + end_expansion(tt, half, g, beta, pj1, q);
    }
    if j == 0 {
        return origin_expansion(tt, dt, g, beta, pj, q);
    }
    if j + 1 == i {
        return end_expansion(tt, dt, g, beta, pj1, q);
    }
    let mut s = 0.0;
    for (x, w) in gx.iter().zip(gw) {
        let u = a + 0.5 * dt * (x + 1.0);
        s += w * (tt - u).powf(-g) * u.powf(beta) * (pj + q * (u - a));
    }
    0.5 * dt * s
}

/// `int_0^L (T - s)^-g s^beta (p + q s) ds` for `L <= T/2`, expanding
/// `(1 - s/T)^-g` in powers of `s/T`.
fn origin_expansion(tt: f64, l: f64, g: f64, beta: f64, p: f64, q: f64) -> f64 {
    let r = l / tt;
    let mut coef = 1.0; // (g)_k / k!
    let mut rk = 1.0;
    let mut sum = 0.0;
    for k in 0..200 {
        let kf = k as f64;
        let term = coef * rk * (p * l.powf(beta + 1.0) / (beta + kf + 1.0) + q * l.powf(beta + 2.0) / (beta + kf + 2.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 2 {
            break;
        }
        coef *= (g + kf) / (kf + 1.0);
        rk *= r;
    }
    tt.powf(-g) * sum
}

/// `int_0^L v^-g (T - v)^beta (p - q v) dv` for `L <= T/2`: the cell that
/// touches `T`, with `v = T - s` and `psi(T - v) = p - q v`.
fn end_expansion(tt: f64, l: f64, g: f64, beta: f64, p: f64, q: f64) -> f64 {
    let r = l / tt;
    let mut coef = 1.0; // binom(beta, k) (-1)^k
    let mut rk = 1.0;
    let mut sum = 0.0;
    let a = 1.0 - g;
    for k in 0..200 {
        let kf = k as f64;
        let term = coef * rk * (p * l.powf(a) / (a + kf) - q * l.powf(a + 1.0) / (a + kf + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 2 {
            break;
        }
        coef *= (kf - beta) / (kf + 1.0);
        rk *= r;
    }
    tt.powf(beta) * sum
}
