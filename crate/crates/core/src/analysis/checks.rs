use std::f64::consts::PI;
use std::time::Instant;

use super::fit::log_space;
use super::report::{CheckReport, Provenance};
use crate::error::{domain, Error, Result};
use crate::kernels::{c_gamma, rho_fourier, KernelSpec, SingularKernel};
use crate::numeric::{integrate_breaks, linear_fit, Tolerance};
use crate::stochastic::{xi_covariance_for, xi_variance_for, z_covariance};
use crate::volterra::{green_asymptotic_constant, green_function_ml, GreenTable};

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// `t^{1-g} F(t)` against its limit `sin(pi g) / (pi c(g))`, 2% relative.
pub fn check_green_asymptotic(spec: &KernelSpec, t_probe: f64) -> Result<CheckReport> {
    if !(t_probe >= 1e3) || !t_probe.is_finite() {
        return Err(domain(format!("probe time must be finite and >= 1e3, got {t_probe}")));
    }
    let start = Instant::now();
    let measured = t_probe.powf(1.0 - spec.gamma()) * green_function_ml(spec, t_probe)?;
    let target = green_asymptotic_constant(spec);
    Ok(CheckReport::relative(
        format!("green_asymptotic[{spec},t={t_probe:e}]"),
        measured,
        target,
        0.02,
        Provenance::DerivedOracle,
    )
    .with_runtime_ms(elapsed_ms(start)))
}

/// Number of grid violations of positivity, monotonicity and convexity.
/// Differences above `-floor` count as zero (roundoff allowance).
pub fn monotonicity_violations(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-14 * scale;
    let negative = values.iter().filter(|&&v| !(v > 0.0)).count();
    let rising = values.windows(2).filter(|w| w[1] - w[0] > floor).count();
    let concave = values.windows(3).filter(|w| w[2] - 2.0 * w[1] + w[0] < -floor).count();
    negative + rising + concave
}

/// Discrete complete-monotonicity test on a Green table: `F > 0`,
/// nonincreasing, convex. `measured` is the number of violations.
pub fn check_complete_monotone(table: &GreenTable) -> CheckReport {
    let start = Instant::now();
    let bad = monotonicity_violations(&table.values);
    CheckReport::absolute(
        format!("complete_monotone[{}]", table.spec),
        bad as f64,
        0.0,
        0.0,
        Provenance::PropertyOnly,
    )
    .with_runtime_ms(elapsed_ms(start))
}

/// Relative errors `eps^{2g-1} Cov(xi(s/eps), xi(t/eps)) / E Z(s)Z(t) - 1`.
pub fn invariance_errors(spec: &KernelSpec, eps_list: &[f64], s: f64, t: f64) -> Result<Vec<f64>> {
    let g = spec.gamma();
    let kernel = spec.singular_kernel();
    let target = z_covariance(g, c_gamma(spec), s, t)?;
    eps_list
        .iter()
        .map(|&eps| Ok(eps.powf(2.0 * g - 1.0) * xi_covariance_for(&kernel, s / eps, t / eps)? / target - 1.0))
        .collect()
}

/// Rescaled covariance of `xi` against the Gaussian limit: one report per
/// `(eps, pair)` (3% relative) and one per pair asserting that the error
/// does not grow as `eps` decreases along `eps_list`.
pub fn check_invariance_principle(
    gamma: f64,
    spec: &KernelSpec,
    eps_list: &[f64],
    pairs: &[(f64, f64)],
) -> Result<Vec<CheckReport>> {
    if gamma != spec.gamma() {
        return Err(domain(format!("gamma {gamma} does not match {spec}")));
    }
    if !(gamma > 0.5 && gamma < 1.0) {
        return Err(domain(format!("the invariance principle needs gamma in (1/2, 1), got {gamma}")));
    }
    if let Some(e) = eps_list.iter().find(|&&e| !(e > 0.0 && e <= 0.1)) {
        return Err(domain(format!("eps must lie in (0, 0.1], got {e}")));
    }
    let c = c_gamma(spec);
    let kernel = spec.singular_kernel();
    let mut out = Vec::new();
    for &(s, t) in pairs {
        let target = z_covariance(gamma, c, s, t)?;
        let mut errors = Vec::new();
        for &eps in eps_list {
            let start = Instant::now();
            let measured = eps.powf(2.0 * gamma - 1.0) * xi_covariance_for(&kernel, s / eps, t / eps)?;
            errors.push((measured / target - 1.0).abs());
            out.push(
                CheckReport::relative(
                    format!("invariance[{spec},eps={eps:e},s={s},t={t}]"),
                    measured,
                    target,
                    0.03,
                    Provenance::DerivedOracle,
                )
                .with_runtime_ms(elapsed_ms(start)),
            );
        }
        let mut order: Vec<usize> = (0..eps_list.len()).collect();
        order.sort_by(|&a, &b| eps_list[b].total_cmp(&eps_list[a]));
        let monotone = order.windows(2).all(|w| errors[w[1]] <= errors[w[0]]);
        out.push(CheckReport::property(format!("invariance_monotone[{spec},s={s},t={t}]"), monotone));
    }
    Ok(out)
}

/// `int_0^inf e^{-mu t} E_{2g}(-k^2 t^{2g}) dt`, the time Laplace transform
/// of the Mainardi kernel's Fourier transform.
pub fn fourier_laplace_numeric(gamma: f64, mu: f64, k: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain(format!("mu must be finite and > 0, got {mu}")));
    }
    let spec = KernelSpec::mainardi(gamma)?;
    let horizon = 40.0 / mu;
    // Geometric breaks resolve the t^{2g} cusp at the origin.
    let mut pts = vec![0.0];
    pts.extend((0..60).rev().map(|j| horizon * 0.5f64.powi(j)));
    let mut failure = None;
    let q = integrate_breaks(
        |t| {
            if t == 0.0 {
                return 1.0;
            }
            match rho_fourier(&spec, t, k) {
                Ok(v) => (-mu * t).exp() * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &pts,
        Tolerance::new(1e-14, 1e-12).with_max_intervals(4000),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    // Beyond the horizon the integrand is bounded by e^{-mu t}; its leading
    // tail term is f(T) e^{-mu T} / mu.
    let tail = rho_fourier(&spec, horizon, k)? * (-mu * horizon).exp() / mu;
    if !q.converged || !q.value.is_finite() {
        return Err(Error::Convergence(format!(
            "Laplace quadrature at mu={mu}, k={k} stopped with error estimate {:e}",
            q.error
        )));
    }
    Ok(q.value + tail)
}

/// Largest relative deviation of [`fourier_laplace_numeric`] from
/// `1 / (mu + k^2 mu^{1-2g})` over the grid; tolerance `1e-4`.
pub fn check_transform_identity(gamma: f64, mu_list: &[f64], k_list: &[f64]) -> Result<CheckReport> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &mu in mu_list {
        for &k in k_list {
            let exact = 1.0 / (mu + k * k * mu.powf(1.0 - 2.0 * gamma));
            let num = fourier_laplace_numeric(gamma, mu, k)?;
            worst = worst.max((num / exact - 1.0).abs());
        }
    }
    Ok(CheckReport::absolute(format!("transform_identity[gamma={gamma}]"), worst, 0.0, 1e-4, Provenance::DerivedOracle)
        .with_runtime_ms(elapsed_ms(start)))
}

/// Least-squares slope of `Var xi` against `log t` over `window`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrowth {
    pub slope: f64,
    pub r_squared: f64,
}

/// Fewest `r^2` for which a logarithmic-growth fit is called stable.
pub const LOG_GROWTH_MIN_R2: f64 = 0.99;

pub fn log_growth(kernel: &SingularKernel, window: (f64, f64)) -> Result<LogGrowth> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(domain(format!("invalid window [{lo}, {hi}]")));
    }
    let ts = log_space(lo, hi, 9);
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = ts.iter().map(|&t| xi_variance_for(kernel, t)).collect::<Result<_>>()?;
    let fit = linear_fit(&xs, &ys)?;
    Ok(LogGrowth { slope: fit.slope, r_squared: fit.r_squared })
}

/// Logarithmic-growth check: the slope must match `target` within 3% and
/// the fit must be stable (`r^2 >= 0.99`). A failed stability test is
/// reported with `measured = NaN`.
pub fn check_log_growth(
    id: impl Into<String>,
    kernel: &SingularKernel,
    window: (f64, f64),
    target: f64,
    provenance: Provenance,
) -> Result<CheckReport> {
    let start = Instant::now();
    let fit = log_growth(kernel, window)?;
    let measured = if fit.r_squared >= LOG_GROWTH_MIN_R2 { fit.slope } else { f64::NAN };
    Ok(CheckReport::relative(id, measured, target, 0.03, provenance).with_runtime_ms(elapsed_ms(start)))
}

/// `c(1/2)` in the normalization where the Gaussian kernel has variance
/// `t`, i.e. `(2 pi)^{-1/2}`.
pub const PAPER_C_HALF: f64 = 0.398_942_280_401_432_7;

/// Diffusive baseline `Var xi(t) ~ (2/pi) log t`, with `c(1/2) = (2 pi)^{-1/2}`.
/// Window must lie in `[1e3, 1e6]`.
pub fn diffusive_baseline(window: (f64, f64)) -> Result<CheckReport> {
    check_window(window)?;
    let kernel = SingularKernel::new(PAPER_C_HALF, 0.5)?;
    check_log_growth(
        format!("diffusive_baseline[c=(2pi)^-1/2,{:e}..{:e}]", window.0, window.1),
        &kernel,
        window,
        2.0 / PI,
        Provenance::PaperValue,
    )
}

/// The same baseline with the Mainardi family's own `c(1/2) = 1/(2 sqrt pi)`,
/// whose slope is `[sin(pi g) / (pi c)]^2 = 4/pi`.
pub fn diffusive_baseline_native(window: (f64, f64)) -> Result<CheckReport> {
    check_window(window)?;
    let spec = KernelSpec::mainardi(0.5)?;
    let target = green_asymptotic_constant(&spec).powi(2);
    check_log_growth(
        format!("diffusive_baseline[{spec},{:e}..{:e}]", window.0, window.1),
        &spec.singular_kernel(),
        window,
        target,
        Provenance::DerivedOracle,
    )
}

fn check_window((lo, hi): (f64, f64)) -> Result<()> {
    if !(lo >= 1e3 && hi <= 1e6 && lo < hi) {
        return Err(domain(format!("baseline window must lie in [1e3, 1e6], got [{lo}, {hi}]")));
    }
    Ok(())
}
