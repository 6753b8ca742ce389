use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::kernels::SingularKernel;
use crate::numeric::conv::convolve;
use crate::numeric::linalg::solve_dense;
use crate::numeric::product::ProductWeights;
use crate::numeric::sum::dot;
use crate::specfun::{beta, zeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `h(t) + sign int_0^t c (t-s)^-g h(s) ds = g(t)` on a uniform grid.
#[derive(Debug, Clone)]
pub struct VolterraProblem {
    pub kernel: SingularKernel,
    pub sign: Sign,
    /// Forcing sampled at every grid node.
    pub forcing: Vec<f64>,
    pub grid: TimeGrid,
}

/// Most correction exponents used in the starting weights; beyond this the
/// small Vandermonde system becomes too ill-conditioned to help.
const MAX_CORRECTIONS: usize = 6;

/// Non-integer exponents `beta = k (1-g) + l` (`l = 0, 1`) of the expansion
/// of the solution near `t = 0` with `beta + 1 - g < 2`. An uncorrected
/// power `t^beta` costs `dt^{beta + 1 - g}` at the first nodes, so these
/// are exactly the ones that would spoil second order in the maximum norm.
pub(crate) fn correction_exponents(g: f64) -> Vec<f64> {
    let a = 1.0 - g;
    let mut out: Vec<f64> = Vec::new();
    for l in [0.0, 1.0] {
        let mut k = 1.0;
        while k * a + l < 1.0 + g - 1e-9 {
            let b = k * a + l;
            let integer = (b - b.round()).abs() < 1e-9;
            if !integer && !out.iter().any(|&x| (x - b).abs() < 1e-9) {
                out.push(b);
            }
            k += 1.0;
        }
    }
    out.sort_by(f64::total_cmp);
    out.truncate(MAX_CORRECTIONS);
    out
}

/// The discrete convolution rule on the unit grid:
/// `int_0^n (n-v)^-g f(v) dv ~ end(n) f_0 + sum_{j=1}^n w(n, j) f_j`.
///
/// It is the product trapezoid rule plus a three-point correction at the
/// kernel's singular end, which removes the `dt^{2+a} f''(t)` term of the
/// error expansion (`a = 1-g`); without it the observed order for `g`
/// near 1 stays far below two at any practical step.
struct Rule {
    /// Weights of `f_{n-m}`, `m >= 0`, for `n >= 2`.
    omega: Vec<f64>,
    /// Weight of `f_1` at `n = 1`.
    first: f64,
    left: Vec<f64>,
    end_fix: f64,
}

impl Rule {
    fn new(g: f64, n: usize) -> Result<Self> {
        let pw = ProductWeights::new(g, n + 1);
        let mut omega = vec![0.0; n + 1];
        omega[0] = pw.right[1];
        for m in 1..=n {
            omega[m] = pw.left[m] + pw.right[m + 1];
        }
        // Error of the trapezoid part: -(1/2) S(g) f''(t) dt^{2+a} with
        // S(g) = sum_m int_{m-1}^m v^-g (u(1-u) - 1/6) dv = 2 zeta(g-2)/((1-g)(2-g)).
        let s = 2.0 * zeta(g - 2.0)? / ((1.0 - g) * (2.0 - g));
        let e = -0.5 * s;
        let first = omega[0];
        omega[0] += e;
        omega[1] -= 2.0 * e;
        if n >= 2 {
            omega[2] += e;
        }
        Ok(Self { omega, first, left: pw.left, end_fix: e })
    }

    fn end(&self, n: usize) -> f64 {
        self.left[n] + if n == 2 { self.end_fix } else { 0.0 }
    }

    /// Weight of `f_j`, `1 <= j <= n`.
    fn w(&self, n: usize, j: usize) -> f64 {
        if n == 1 {
            self.first
        } else {
            self.omega[n - j]
        }
    }
}

/// Second-order product-integration marching solver.
///
/// The kernel `(t-s)^-g` is integrated exactly against piecewise-linear
/// interpolants of `h`, with a local correction at the singular end.
/// Because solutions behave like sums of `t^{k(1-g)}` near the origin, the
/// rule is made exact on those powers by a few starting weights (Lubich's
/// correction), which restores order two in the maximum norm.
///
/// ```
/// use fracdrift::kernels::SingularKernel;
/// use fracdrift::volterra::{solve_volterra, Sign, TimeGrid, VolterraProblem};
/// let grid = TimeGrid::new(1.0, 0.01).unwrap();
/// let kernel = SingularKernel::new(0.0, 0.5).unwrap();
/// let forcing: Vec<f64> = grid.times().iter().map(|t| t.sin()).collect();
/// let h = solve_volterra(&VolterraProblem { kernel, sign: Sign::Plus, forcing: forcing.clone(), grid }).unwrap();
/// assert_eq!(h, forcing); // no memory term
/// ```
pub fn solve_volterra(p: &VolterraProblem) -> Result<Vec<f64>> {
    let g = p.kernel.exponent;
    if !(g < 1.0) {
        return Err(domain(format!("kernel exponent must be < 1 (integrable), got {g}")));
    }
    let n = p.grid.n_steps();
    if p.forcing.len() != n + 1 {
        return Err(domain(format!("forcing has {} samples, grid has {} nodes", p.forcing.len(), n + 1)));
    }
    if let Some(bad) = p.forcing.iter().position(|v| !v.is_finite()) {
        return Err(domain(format!("forcing is not finite at node {bad}")));
    }
    if p.kernel.coefficient == 0.0 {
        return Ok(p.forcing.clone());
    }
    let a = 1.0 - g;
    let scale = p.sign.value() * p.kernel.coefficient * p.grid.dt().powf(a);
    let rule = Rule::new(g, n)?;

    let betas = correction_exponents(g);
    // Correction nodes 0..m; the rule stays exact on 1 and t as well.
    let m = if betas.is_empty() { 0 } else { (betas.len() + 2).min(n + 1) };
    let starting = if m > 0 { starting_weights(&betas[..m - 2], a, &rule, n)? } else { Vec::new() };
    let sw = |nn: usize, k: usize| if m > 0 { starting[(nn - 1) * m + k] } else { 0.0 };

    let f = &p.forcing;
    let mut h = vec![0.0; n + 1];
    h[0] = f[0];

    // The first steps are coupled through the starting weights; step 1
    // always uses its own weights.
    let s = m.saturating_sub(1).max(1);
    let mut mat = vec![0.0; s * s];
    let mut rhs = vec![0.0; s];
    for nn in 1..=s {
        let r = nn - 1;
        mat[r * s + r] += 1.0;
        for j in 1..=nn {
            mat[r * s + (j - 1)] += scale * rule.w(nn, j);
        }
        for k in 1..m {
            mat[r * s + (k - 1)] += scale * sw(nn, k);
        }
        rhs[r] = f[nn] - scale * (rule.end(nn) + sw(nn, 0)) * h[0];
    }
    solve_dense(&mut mat, &mut rhs)?;
    h[1..=s].copy_from_slice(&rhs);

    // History sums as contiguous dot products against reversed weights.
    let rev: Vec<f64> = rule.omega.iter().rev().copied().collect(); // rev[i] = omega[n - i]
    let diag = 1.0 + scale * rule.omega[0];
    for nn in s + 1..=n {
        // sum_{j=1}^{nn-1} omega[nn-j] h_j, omega[nn-j] = rev[n - nn + j]
        let hist = dot(&h[1..nn], &rev[n - nn + 1..n]);
        let mut corr = 0.0;
        for k in 0..m {
            corr += sw(nn, k) * h[k];
        }
        h[nn] = (f[nn] - scale * (rule.end(nn) * h[0] + hist + corr)) / diag;
    }
    Ok(h)
}

/// Starting weights `W[n][k]`, `n = 1..=n_max`, `k <= s + 1`, such that
/// the rule plus `sum_k W[n][k] f_k` is exact on the unit grid for `f = 1`,
/// `f = t` and `f = t^beta` for every `beta` given. The rule is already
/// exact on the first two, so their residuals vanish.
fn starting_weights(betas: &[f64], a: f64, rule: &Rule, n_max: usize) -> Result<Vec<f64>> {
    let m = betas.len() + 2;
    let mut exps = vec![0.0, 1.0];
    exps.extend_from_slice(betas);
    let mut residual = vec![0.0; n_max * m];
    for (i, &b) in betas.iter().enumerate() {
        let powers: Vec<f64> = (1..=n_max).map(|j| (j as f64).powf(b)).collect();
        // conv[nn - 1] = sum_{j=1}^{nn} omega[nn - j] j^b; node 0 adds nothing.
        let mut conv = convolve(&rule.omega[..n_max], &powers);
        conv[0] = rule.first;
        let exact = beta(b + 1.0, a);
        for nn in 1..=n_max {
            residual[(nn - 1) * m + i + 2] = (nn as f64).powf(b + a) * exact - conv[nn - 1];
        }
    }
    // V[i][k] = k^{e_i} with 0^0 = 1.
    let mut v = vec![0.0; m * m];
    for (i, &e) in exps.iter().enumerate() {
        for k in 0..m {
            v[i * m + k] = if k == 0 { if e == 0.0 { 1.0 } else { 0.0 } } else { (k as f64).powf(e) };
        }
    }
    let mut out = vec![0.0; n_max * m];
    for nn in 1..=n_max {
        let mut lu = v.clone();
        let mut rhs = residual[(nn - 1) * m..nn * m].to_vec();
        solve_dense(&mut lu, &mut rhs)?;
        out[(nn - 1) * m..nn * m].copy_from_slice(&rhs);
    }
    Ok(out)
}
