//! The twelve acceptance criteria as library code, so the CLI `verify`
//! command and the `acceptance` test target run the same checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::checks::{
    check_complete_monotone, check_green_asymptotic, check_invariance_principle, check_log_growth,
    check_transform_identity, diffusive_baseline, diffusive_baseline_native, log_growth, LOG_GROWTH_MIN_R2,
};
use super::fit::{fit_power_law, log_space};
use super::report::{timed, CheckReport, Provenance};
use crate::error::Result;
use crate::grid::TimeGrid;
use crate::kernels::{
    iterated_kernel_closed, iterated_kernel_numeric, levy, rho, rho1, rho_fourier, rho_laplace_oracle, Family,
    KernelSpec,
};
use crate::numeric::{integrate_breaks, Tolerance};
use crate::specfun::reciprocal_gamma;
use crate::stochastic::{
    original_time, sample_xi_paths, xi_variance_exact, xi_variance_limit, CoupledOptions, CoupledSimulator,
    FieldState, Mollifier, RngSpec,
};
use crate::volterra::{green_function, green_function_ml, GreenTable, SchemeInfo};

/// Knobs of the suite. `quick` shrinks the Monte Carlo ensembles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub quick: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { quick: false, seed: 20_240_601 }
    }
}

/// Criterion numbers, in order.
pub const CRITERIA: [u8; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];

/// Short description of each criterion, for report headers.
pub fn criterion_title(n: u8) -> &'static str {
    match n {
        1 => "c(1/2) limit",
        2 => "Volterra solver vs Mittag-Leffler",
        3 => "Green function tail constant",
        4 => "iterated kernels",
        5 => "kernel normalization and transforms",
        6 => "subdiffusive variance plateau",
        7 => "superdiffusive variance exponent",
        8 => "invariance principle",
        9 => "Monte Carlo consistency",
        10 => "diffusive baseline",
        11 => "coupled-system surrogate",
        12 => "complete monotonicity",
        _ => "unknown",
    }
}

/// The grid `g in {0.25, 0.4, 0.6, 0.75}` over both families where defined.
pub fn spec_grid() -> Vec<KernelSpec> {
    let mut out = Vec::new();
    for g in [0.25, 0.4, 0.6, 0.75] {
        out.push(KernelSpec::mainardi(g).expect("valid gamma"));
        if g > 0.5 {
            out.push(KernelSpec::levy(g).expect("valid gamma"));
        }
    }
    out
}

fn superdiffusive_grid() -> Vec<KernelSpec> {
    let mut out = Vec::new();
    for g in [0.6, 0.75, 0.9] {
        out.push(KernelSpec::mainardi(g).expect("valid gamma"));
        out.push(KernelSpec::levy(g).expect("valid gamma"));
    }
    out
}

fn prefixed(n: u8, reports: Vec<CheckReport>) -> Vec<CheckReport> {
    reports
        .into_iter()
        .map(|mut r| {
            r.check_id = format!("c{n:02}.{}", r.check_id);
            r
        })
        .collect()
}

/// Runs one criterion. An internal error becomes a single failed report.
pub fn run_criterion(n: u8, opts: &SuiteOptions) -> Vec<CheckReport> {
    let run = || -> Result<Vec<CheckReport>> {
        match n {
            1 => c_half_limit(),
            2 => solver_vs_oracle(),
            3 => green_tail_constant(),
            4 => iterated_kernels(),
            5 => normalization_and_transforms(),
            6 => subdiffusive_plateau(),
            7 => superdiffusive_exponent(),
            8 => invariance_principle(),
            9 => monte_carlo(opts),
            10 => baseline(),
            11 => coupled_surrogate(opts),
            12 => complete_monotonicity(),
            _ => Ok(vec![]),
        }
    };
    let reports = timed(|| match run() {
        Ok(r) => r,
        Err(e) => vec![CheckReport::errored(format!("error: {e}"), Provenance::PropertyOnly)],
    });
    prefixed(n, reports)
}

/// Every criterion, evaluated in parallel; reports come back in criterion order.
pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckReport> {
    CRITERIA.par_iter().map(|&n| run_criterion(n, opts)).collect::<Vec<_>>().into_iter().flatten().collect()
}

/// `(1/pi) int_0^inf exp(-k^{1/g}/2) dk` by quadrature.
fn levy_c_by_quadrature(g: f64) -> f64 {
    let k_max = 90f64.powf(g);
    let mut pts = vec![0.0];
    let mut k = 0.125;
    while k < k_max {
        pts.push(k);
        k *= 2.0;
    }
    pts.push(k_max);
    integrate_breaks(|k| (-0.5 * k.powf(1.0 / g)).exp(), &pts, Tolerance::new(1e-15, 1e-14)).value / PI
}

fn c_half_limit() -> Result<Vec<CheckReport>> {
    let xs = [0.51, 0.505, 0.501];
    let ys = xs.map(levy_c_by_quadrature);
    // Quadratic Lagrange extrapolation to g = 1/2.
    let x = 0.5;
    let mut extrap = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        extrap += w * ys[i];
    }
    let mainardi_c = rho1(&KernelSpec::mainardi(0.5)?, 0.0)?;
    Ok(vec![
        CheckReport::absolute("levy_c_extrapolated", extrap, (2.0 * PI).powf(-0.5), 1e-4, Provenance::PaperValue),
        CheckReport::absolute("mainardi_c_half", mainardi_c, 0.5 / PI.sqrt(), 1e-10, Provenance::DerivedOracle),
    ])
}

fn solver_vs_oracle() -> Result<Vec<CheckReport>> {
    let grid = TimeGrid::new(50.0, 1e-3)?;
    spec_grid()
        .par_iter()
        .map(|spec| {
            let table = green_function(spec, &grid)?;
            let mut worst = 0.0f64;
            for (i, &v) in table.values.iter().enumerate() {
                let exact = green_function_ml(spec, grid.t(i))?;
                worst = worst.max((v / exact - 1.0).abs());
            }
            Ok(CheckReport::absolute(format!("max_rel_error[{spec}]"), worst, 0.0, 1e-4, Provenance::DerivedOracle))
        })
        .collect()
}

fn green_tail_constant() -> Result<Vec<CheckReport>> {
    spec_grid().iter().map(|spec| check_green_asymptotic(spec, 1e4)).collect()
}

fn iterated_kernels() -> Result<Vec<CheckReport>> {
    let grid = TimeGrid::new(1.0, 1e-4)?;
    let mut cases = Vec::new();
    for g in [0.25, 0.4, 0.6, 0.75] {
        for n in 1..=4 {
            cases.push((g, n));
        }
    }
    cases
        .par_iter()
        .map(|&(g, n)| {
            let kernel = KernelSpec::mainardi(g)?.singular_kernel();
            let num = iterated_kernel_numeric(&kernel, n, 1.0, &grid)?;
            let closed = iterated_kernel_closed(&kernel, n, 1.0)?;
            Ok(CheckReport::relative(format!("iterated[g={g},n={n}]"), num, closed, 5e-3, Provenance::DerivedOracle))
        })
        .collect()
}

/// `int_X^inf x^-p cos(kx) dx` by repeated integration by parts.
fn cosine_tail(p: f64, k: f64, x: f64) -> f64 {
    let ik = Complex64::new(0.0, k);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coef = Complex64::new(1.0, 0.0) / ik;
    for m in 0..12 {
        sum += coef;
        coef *= (p + m as f64) / (ik * x);
    }
    (-(Complex64::new(0.0, k * x)).exp() * x.powf(-p) * sum).re
}

/// `rho1` with evaluation failures turned into NaN, for quadrature.
fn profile(spec: &KernelSpec) -> impl Fn(f64) -> f64 + '_ {
    move |z| rho1(spec, z).unwrap_or(f64::NAN)
}

/// `int rho(1, x) dx` with the Levy algebraic tail added analytically.
fn total_mass(spec: &KernelSpec) -> f64 {
    let x_cut = 100.0;
    let pts = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, x_cut];
    let q = integrate_breaks(profile(spec), &pts, Tolerance::new(1e-15, 1e-12));
    let tail: f64 = match spec.family() {
        Family::Levy => levy::tail_terms(spec.gamma(), 12).iter().map(|&(a, p)| a * x_cut.powf(1.0 - p) / (p - 1.0)).sum(),
        Family::Mainardi => 0.0,
    };
    2.0 * (q.value + tail)
}

/// Largest `|trapezoid cosine transform - rho_fourier|` over `ks`.
///
/// Mainardi: the profile has a kink at the origin, fixed by the first
/// Euler-Maclaurin term. Levy: algebraic tail past the cut integrated by parts.
fn sampled_transform_error(spec: &KernelSpec, ks: &[f64]) -> Result<f64> {
    let g = spec.gamma();
    let mut worst = 0.0f64;
    match spec.family() {
        Family::Mainardi => {
            let (h, n) = (5e-3, 8000);
            let f: Vec<f64> = (0..=n).map(|j| rho1(spec, j as f64 * h)).collect::<Result<_>>()?;
            let d0 = -0.5 * reciprocal_gamma(1.0 - 2.0 * g);
            for &k in ks {
                let mut s = 0.5 * f[0];
                for (j, v) in f.iter().enumerate().skip(1) {
                    s += v * (k * j as f64 * h).cos();
                }
                let trap = 2.0 * (h * s + h * h / 12.0 * d0);
                worst = worst.max((trap - rho_fourier(spec, 1.0, k)?).abs());
            }
        }
        Family::Levy => {
            let (h, n) = (1e-2, 20000);
            let x_cut = h * n as f64;
            let f: Vec<f64> = (0..=n).map(|j| rho1(spec, j as f64 * h)).collect::<Result<_>>()?;
            let terms = levy::tail_terms(g, 10);
            for &k in ks {
                let mut s = 0.5 * f[0] + 0.5 * f[n] * (k * x_cut).cos();
                for (j, v) in f.iter().enumerate().take(n).skip(1) {
                    s += v * (k * j as f64 * h).cos();
                }
                let tail: f64 = if k == 0.0 {
                    terms.iter().map(|&(a, p)| a * x_cut.powf(1.0 - p) / (p - 1.0)).sum()
                } else {
                    terms.iter().map(|&(a, p)| a * cosine_tail(p, k, x_cut)).sum()
                };
                let trap = 2.0 * (h * s + tail);
                worst = worst.max((trap - rho_fourier(spec, 1.0, k)?).abs());
            }
        }
    }
    Ok(worst)
}

fn normalization_and_transforms() -> Result<Vec<CheckReport>> {
    let mut specs = Vec::new();
    for g in [0.2, 0.4, 0.6, 0.8] {
        specs.push(KernelSpec::mainardi(g)?);
    }
    for g in [0.6, 0.75, 0.9] {
        specs.push(KernelSpec::levy(g)?);
    }
    let ks: Vec<f64> = (0..=20).map(|i| 0.25 * i as f64).collect();
    let mut out: Vec<CheckReport> = specs
        .par_iter()
        .map(|spec| -> Result<Vec<CheckReport>> {
            Ok(vec![
                CheckReport::absolute(format!("mass[{spec}]"), total_mass(spec), 1.0, 1e-6, Provenance::DerivedOracle),
                CheckReport::absolute(
                    format!("fourier[{spec}]"),
                    sampled_transform_error(spec, &ks)?,
                    0.0,
                    1e-5,
                    Provenance::DerivedOracle,
                ),
            ])
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for g in [0.25, 0.4, 0.6, 0.75] {
        let spec = KernelSpec::mainardi(g)?;
        let mut worst = 0.0f64;
        for i in 0..=30 {
            let x = 0.1 * i as f64;
            worst = worst.max((rho(&spec, 1.0, x)? - rho_laplace_oracle(g, 1.0, x)?).abs());
        }
        out.push(CheckReport::absolute(format!("laplace_oracle[{spec}]"), worst, 0.0, 1e-5, Provenance::DerivedOracle));
    }
    for g in [0.25, 0.5, 0.75] {
        out.push(check_transform_identity(g, &[0.5, 1.0, 2.0], &[0.0, 1.0, 2.0])?);
    }
    Ok(out)
}

/// `(1/pi) int_0^inf |F^(i w)|^2 dw` with `F^(mu) = mu^{a-1} / (mu^a + C)`,
/// `a = 1 - g`, `C = c Gamma(1-g)`: an independent value of `int_0^inf F^2`.
pub fn plancherel_l2(spec: &KernelSpec) -> f64 {
    let cc = spec.singular_kernel().laplace_constant();
    let a = 1.0 - spec.gamma();
    let f = |w: f64| {
        let mu = Complex64::new(0.0, w);
        (mu.powf(a - 1.0) / (mu.powf(a) + cc)).norm_sqr()
    };
    let (lo, hi): (f64, f64) = (1e-10, 1e10);
    let mut pts = vec![lo];
    while *pts.last().expect("nonempty") < hi {
        let next = pts.last().expect("nonempty") * 4.0;
        pts.push(next.min(hi));
    }
    let body = integrate_breaks(f, &pts, Tolerance::new(1e-14, 1e-12)).value;
    // |F^|^2 ~ w^{2a-2}/C^2 below lo and ~ w^-2 above hi.
    let small = lo.powf(2.0 * a - 1.0) / ((2.0 * a - 1.0) * cc * cc);
    (body + small + 1.0 / hi) / PI
}

fn subdiffusive_plateau() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for g in [0.2, 0.35] {
        let spec = KernelSpec::mainardi(g)?;
        let growth = xi_variance_exact(&spec, 1e4)? / xi_variance_exact(&spec, 1e3)? - 1.0;
        out.push(CheckReport::absolute(format!("plateau[{spec}]"), growth, 0.0, 0.02, Provenance::PropertyOnly));
        out.push(CheckReport::relative(
            format!("limit_vs_plancherel[{spec}]"),
            xi_variance_limit(&spec)?,
            plancherel_l2(&spec),
            0.01,
            Provenance::DerivedOracle,
        ));
    }
    Ok(out)
}

fn superdiffusive_exponent() -> Result<Vec<CheckReport>> {
    let ts = log_space(1e2, 1e4, 9);
    superdiffusive_grid()
        .par_iter()
        .map(|spec| {
            let vs: Vec<f64> = ts.iter().map(|&t| xi_variance_exact(spec, t)).collect::<Result<_>>()?;
            let fit = fit_power_law(&ts, &vs, (1e2, 1e4))?;
            Ok(CheckReport::absolute(
                format!("variance_exponent[{spec}]"),
                fit.exponent,
                2.0 * spec.gamma() - 1.0,
                0.05,
                Provenance::DerivedOracle,
            ))
        })
        .collect()
}

fn invariance_principle() -> Result<Vec<CheckReport>> {
    let eps = [1e-1, 1e-2, 1e-3];
    let pairs = [(1.0, 1.0), (1.0, 2.0)];
    let mut specs = Vec::new();
    for g in [0.6, 0.75] {
        specs.push(KernelSpec::mainardi(g)?);
        specs.push(KernelSpec::levy(g)?);
    }
    let all = specs
        .par_iter()
        .map(|spec| check_invariance_principle(spec.gamma(), spec, &eps, &pairs))
        .collect::<Result<Vec<_>>>()?;
    // Only the smallest eps is held to 3%; the larger ones feed the
    // monotonicity reports.
    Ok(all
        .into_iter()
        .flatten()
        .filter(|r| r.check_id.starts_with("invariance_monotone") || r.check_id.contains("eps=1e-3"))
        .collect())
}

fn monte_carlo(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let n_paths = if opts.quick { 2_000 } else { 10_000 };
    let grid = TimeGrid::new(10.0, 0.01)?;
    let specs = [KernelSpec::mainardi(0.25)?, KernelSpec::mainardi(0.75)?, KernelSpec::levy(0.75)?];
    let mut out = Vec::new();
    for (s, spec) in specs.iter().enumerate() {
        let ens = sample_xi_paths(spec, &grid, n_paths, &RngSpec::new(opts.seed, s as u64))?;
        for t in [1.0, 5.0, 10.0] {
            let i = (t / grid.dt()).round() as usize;
            let m = ens.moments_at(i)?;
            let exact = xi_variance_exact(spec, t)?;
            out.push(CheckReport::absolute(
                format!("variance_z_score[{spec},t={t},paths={n_paths}]"),
                (m.var - exact) / m.var_stderr,
                0.0,
                3.0,
                Provenance::DerivedOracle,
            ));
        }
    }
    // Gaussianity bands are stated for 1e5 paths at t = 1.
    let short = TimeGrid::new(1.0, 0.01)?;
    for (s, g) in [0.25, 0.75].into_iter().enumerate() {
        let spec = KernelSpec::mainardi(g)?;
        let ens = sample_xi_paths(&spec, &short, 100_000, &RngSpec::new(opts.seed, 100 + s as u64))?;
        let m = ens.moments_at(short.n_steps())?;
        out.push(CheckReport::absolute(format!("skewness[{spec}]"), m.skewness, 0.0, 0.05, Provenance::PropertyOnly));
        out.push(CheckReport::absolute(
            format!("excess_kurtosis[{spec}]"),
            m.excess_kurtosis,
            0.0,
            0.1,
            Provenance::PropertyOnly,
        ));
    }
    Ok(out)
}

fn baseline() -> Result<Vec<CheckReport>> {
    let window = (1e4, 1e6);
    let spec = KernelSpec::mainardi(0.75)?;
    let control = log_growth(&spec.singular_kernel(), window)?;
    let rejected = check_log_growth(
        "control",
        &spec.singular_kernel(),
        window,
        crate::volterra::green_asymptotic_constant(&spec).powi(2),
        Provenance::PropertyOnly,
    )?;
    Ok(vec![
        diffusive_baseline(window)?,
        diffusive_baseline_native(window)?,
        CheckReport::absolute(
            format!("negative_control_r2_below_threshold[{spec}]"),
            control.r_squared,
            0.0,
            LOG_GROWTH_MIN_R2,
            Provenance::PropertyOnly,
        ),
        CheckReport::property(format!("negative_control_rejected[{spec}]"), !rejected.passed),
    ])
}

fn coupled_surrogate(opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let n_paths = if opts.quick { 200 } else { 2_000 };
    let (g, lambda) = (0.25, 0.1);
    let spec = KernelSpec::mainardi(g)?;
    let grid = TimeGrid::with_steps(original_time(g, lambda, 1.0), 1000)?;
    let field = FieldState::desk(Mollifier::default())?;
    let options = CoupledOptions { decoupled: false, snapshot_steps: vec![1, 250, 500, 1000] };
    let sim = CoupledSimulator::new(spec, lambda, field, grid, options)?;
    let ens = sim.run_ensemble(n_paths, &RngSpec::new(opts.seed, 11))?;
    let var = ens.paths.moments_at(grid.n_steps())?.var;
    Ok(vec![
        CheckReport::relative(
            format!("rescaled_variance[{spec},lambda={lambda},paths={n_paths}]"),
            var,
            xi_variance_exact(&spec, 1.0)?,
            0.25,
            Provenance::DerivedOracle,
        )
        .non_gating(),
        CheckReport::absolute("field_mass_identity", ens.max_mass_error, 0.0, 1e-6, Provenance::PropertyOnly),
    ])
}

/// A table holding arbitrary samples, for the negative controls.
fn synthetic_table(values: Vec<f64>, grid: TimeGrid) -> Result<GreenTable> {
    Ok(GreenTable {
        spec: KernelSpec::mainardi(0.5)?,
        grid,
        values,
        scheme: SchemeInfo { name: "synthetic", order: 0, dt: grid.dt(), corrections: vec![] },
    })
}

fn complete_monotonicity() -> Result<Vec<CheckReport>> {
    let grid = TimeGrid::new(20.0, 5e-3)?;
    let mut out = spec_grid()
        .par_iter()
        .map(|spec| Ok(check_complete_monotone(&green_function(spec, &grid)?)))
        .collect::<Result<Vec<_>>>()?;
    let cosine = synthetic_table(grid.times().iter().map(|t| t.cos()).collect(), grid)?;
    out.push(CheckReport::property("cosine_control_rejected", !check_complete_monotone(&cosine).passed));
    let constant = synthetic_table(vec![1.0; grid.len()], grid)?;
    out.push(CheckReport::property("constant_control_accepted", check_complete_monotone(&constant).passed));
    Ok(out)
}
