use std::f64::consts::PI;

use fracdrift::kernels::{c_gamma, rho_fourier, KernelSpec, SingularKernel};
use fracdrift::numeric::interp::lagrange4;
use fracdrift::numeric::{integrate, integrate_breaks, linear_fit, Tolerance};
use fracdrift::stochastic::{
    brownian_increments, original_time, sample_xi_paths, sample_xi_paths_for, simulate_coupled, xi_covariance_exact,
    xi_variance_exact, xi_variance_for, xi_variance_limit, z_covariance, CoupledOptions, CoupledSimulator, FieldState,
    Mollifier, RngSpec, SampleMoments, MAX_EXPORTED_PATHS,
};
use fracdrift::TimeGrid;
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

/// Kolmogorov-Smirnov p-value from the asymptotic distribution.
fn ks_p_value(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let l = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let mut p = 0.0;
    for k in 1..100 {
        let term = 2.0 * (-2.0 * (k * k) as f64 * l * l).exp();
        p += if k % 2 == 1 { term } else { -term };
    }
    p.clamp(0.0, 1.0)
}

#[test]
fn increments_are_reproducible_and_have_the_right_variance() {
    let grid = TimeGrid::new(1e4, 0.01).unwrap();
    let rng = RngSpec::new(2024, 3);
    let a = brownian_increments(&grid, &rng);
    assert_eq!(a, brownian_increments(&grid, &rng));
    assert_eq!(a.len(), 1_000_000);
    let var = a.iter().map(|x| x * x).sum::<f64>() / a.len() as f64;
    assert!((var - 0.01).abs() < 3.0 * 2f64.sqrt() * 0.01 / 1e3, "{var}");
}

#[test]
fn brownian_endpoint_is_normal() {
    let grid = TimeGrid::new(2.0, 0.02).unwrap();
    let ends: Vec<f64> =
        (0..10_000).map(|s| brownian_increments(&grid, &RngSpec::new(11, s)).iter().sum::<f64>()).collect();
    let law = Normal::new(0.0, 2f64.sqrt()).unwrap();
    let p = ks_p_value(ends, |x| law.cdf(x));
    assert!(p > 0.01, "KS p = {p}");
}

#[test]
fn identity_green_function_gives_brownian_motion() {
    let grid = TimeGrid::new(1.0, 0.01).unwrap();
    let rng = RngSpec::new(5, 0);
    let ens = sample_xi_paths_for(&SingularKernel::new(0.0, 0.3).unwrap(), &grid, 1, &rng).unwrap();
    let mut acc = 0.0;
    let mut b = vec![0.0];
    for d in brownian_increments(&grid, &rng) {
        acc += d;
        b.push(acc);
    }
    assert_eq!(ens.paths[0], b);
}

#[test]
fn paths_start_at_zero_and_are_centered() {
    let spec = KernelSpec::mainardi(0.25).unwrap();
    let grid = TimeGrid::new(1.0, 0.01).unwrap();
    let ens = sample_xi_paths(&spec, &grid, 10_000, &RngSpec::new(1, 0)).unwrap();
    assert!(ens.paths.iter().all(|p| p[0] == 0.0));
    for s in ens.stats().iter().skip(1) {
        assert!(s.mean.abs() <= 3.0 * s.stderr, "t={}: mean {} stderr {}", s.t, s.mean, s.stderr);
    }
    let m = ens.moments_at(100).unwrap();
    let exact = xi_variance_exact(&spec, 1.0).unwrap();
    assert!((m.var - exact).abs() <= 3.0 * m.var_stderr, "{} vs {exact} (se {})", m.var, m.var_stderr);
}

#[test]
fn ensemble_covariance_matches_isometry() {
    let spec = KernelSpec::levy(0.75).unwrap();
    let grid = TimeGrid::new(2.0, 0.01).unwrap();
    let ens = sample_xi_paths(&spec, &grid, 10_000, &RngSpec::new(9, 4)).unwrap();
    let (c, se) = ens.covariance(100, 200).unwrap();
    let exact = xi_covariance_exact(&spec, 1.0, 2.0).unwrap();
    assert!((c - exact).abs() <= 3.0 * se, "{c} vs {exact} (se {se})");
}

#[test]
fn xi_is_gaussian() {
    let grid = TimeGrid::new(1.0, 0.01).unwrap();
    for g in [0.25, 0.75] {
        let spec = KernelSpec::mainardi(g).unwrap();
        let ens = sample_xi_paths(&spec, &grid, 100_000, &RngSpec::new(77, 0)).unwrap();
        let m = ens.moments_at(100).unwrap();
        assert!(m.skewness.abs() <= 0.05, "g={g} skew {}", m.skewness);
        assert!(m.excess_kurtosis.abs() <= 0.1, "g={g} kurt {}", m.excess_kurtosis);
    }
}

#[test]
fn variance_examples() {
    let spec = KernelSpec::mainardi(0.25).unwrap();
    assert_eq!(xi_variance_exact(&spec, 0.0).unwrap(), 0.0);
    assert!(xi_variance_exact(&spec, -1.0).is_err());
    let r = xi_variance_exact(&spec, 1e4).unwrap() / xi_variance_exact(&spec, 1e3).unwrap() - 1.0;
    assert!(r.abs() <= 0.02, "{r}");
    // Diffusive normalization: Var grows like (2/pi) log t.
    let k = SingularKernel::new((2.0 * PI).powf(-0.5), 0.5).unwrap();
    let (a, b) = (xi_variance_for(&k, 1e4).unwrap(), xi_variance_for(&k, 1e6).unwrap());
    let slope = (b - a) / (1e6f64.ln() - 1e4f64.ln());
    assert!((slope / (2.0 / PI) - 1.0).abs() <= 0.03, "{slope}");
}

/// `(1/pi) int_0^inf |F^(i w)|^2 dw` with `F^(mu) = mu^{a-1} / (mu^a + C)`.
fn plancherel_l2(spec: &KernelSpec) -> f64 {
    let k = spec.singular_kernel();
    let a = 1.0 - spec.gamma();
    let cc = k.laplace_constant();
    let f = |w: f64| {
        let mu = Complex64::new(0.0, w);
        (mu.powf(a - 1.0) / (mu.powf(a) + cc)).norm_sqr()
    };
    let (lo, hi): (f64, f64) = (1e-10, 1e10);
    let mut pts = vec![lo];
    while *pts.last().unwrap() < hi {
        let next = pts.last().unwrap() * 4.0;
        pts.push(next.min(hi));
    }
    let body = integrate_breaks(f, &pts, Tolerance::new(1e-14, 1e-12)).value;
    let small = lo.powf(2.0 * a - 1.0) / ((2.0 * a - 1.0) * cc * cc);
    (body + small + 1.0 / hi) / PI
}

#[test]
fn subdiffusive_limit_matches_plancherel() {
    for g in [0.2, 0.25, 0.35] {
        let spec = KernelSpec::mainardi(g).unwrap();
        let lim = xi_variance_limit(&spec).unwrap();
        let oracle = plancherel_l2(&spec);
        println!("g={g}: int F^2 = {lim:.8} (Plancherel {oracle:.8})");
        assert!((lim / oracle - 1.0).abs() < 0.01);
        assert!((lim / oracle - 1.0).abs() < 1e-6, "tighter than the 1% target");
    }
    assert!(xi_variance_limit(&KernelSpec::mainardi(0.6).unwrap()).is_err());
}

macro_rules! superdiffusive_growth {
    ($($name:ident: $spec:expr;)*) => {$(
        #[test]
        fn $name() {
            let spec = $spec.unwrap();
            let ts: Vec<f64> = (0..=8).map(|i| 10f64.powf(2.0 + 0.25 * i as f64)).collect();
            let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
            let ys: Vec<f64> = ts.iter().map(|&t| xi_variance_exact(&spec, t).unwrap().ln()).collect();
            let slope = linear_fit(&xs, &ys).unwrap().slope;
            let target = 2.0 * spec.gamma() - 1.0;
            println!("{spec}: fitted exponent {slope:.4}, target {target:.4}");
            assert!((slope - target).abs() <= 0.05);
        }
    )*};
}

superdiffusive_growth! {
    variance_growth_mainardi_060: KernelSpec::mainardi(0.6);
    variance_growth_mainardi_075: KernelSpec::mainardi(0.75);
    variance_growth_mainardi_090: KernelSpec::mainardi(0.9);
    variance_growth_levy_060: KernelSpec::levy(0.6);
    variance_growth_levy_075: KernelSpec::levy(0.75);
    variance_growth_levy_090: KernelSpec::levy(0.9);
}

#[test]
fn covariance_examples() {
    let spec = KernelSpec::levy(0.75).unwrap();
    let v = xi_variance_exact(&spec, 2.5).unwrap();
    assert!((xi_covariance_exact(&spec, 2.5, 2.5).unwrap() - v).abs() < 1e-12);
    assert_eq!(xi_covariance_exact(&spec, 0.0, 2.5).unwrap(), 0.0);
    assert_eq!(xi_covariance_exact(&spec, 1.0, 2.0).unwrap(), xi_covariance_exact(&spec, 2.0, 1.0).unwrap());
}

#[test]
fn limit_covariance_examples() {
    let g = 0.75;
    let c = c_gamma(&KernelSpec::mainardi(g).unwrap());
    let diag = z_covariance(g, c, 1.0, 1.0).unwrap();
    assert!((diag - 1.0 / (PI * PI * c * c)).abs() < 1e-13 * diag);
    assert_eq!(z_covariance(g, c, 0.0, 1.0).unwrap(), 0.0);
    assert!(z_covariance(0.4, c, 1.0, 1.0).is_err());
    assert!(z_covariance(g, 0.0, 1.0, 1.0).is_err());
    // Off the diagonal: int_0^1 v^{g-1} (1+v)^{g-1} dv with the singular
    // part subtracted analytically.
    for g in [0.6, 0.75, 0.9] {
        let q = integrate(|v: f64| v.powf(g - 1.0) * ((1.0 + v).powf(g - 1.0) - 1.0), 0.0, 1.0, Tolerance::new(1e-15, 1e-13));
        let oracle = (PI * g).sin().powi(2) / (PI * PI * c * c) * (q.value + 1.0 / g);
        let v = z_covariance(g, c, 1.0, 2.0).unwrap();
        assert!((v - oracle).abs() < 1e-10 * oracle, "g={g}");
    }
}

fn rescaled_covariance_error(spec: &KernelSpec, eps: f64, s: f64, t: f64) -> f64 {
    let g = spec.gamma();
    let num = eps.powf(2.0 * g - 1.0) * xi_covariance_exact(spec, s / eps, t / eps).unwrap();
    num / z_covariance(g, c_gamma(spec), s, t).unwrap() - 1.0
}

#[test]
fn rescaled_covariance_approaches_the_limit_monotonically() {
    for spec in [KernelSpec::mainardi(0.6), KernelSpec::mainardi(0.75), KernelSpec::levy(0.6), KernelSpec::levy(0.75)] {
        let spec = spec.unwrap();
        for (s, t) in [(1.0, 1.0), (1.0, 2.0)] {
            let errs: Vec<f64> = [1e-1, 1e-2, 1e-3].iter().map(|&e| rescaled_covariance_error(&spec, e, s, t).abs()).collect();
            assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{spec} ({s},{t}): {errs:?}");
        }
    }
}

#[test]
fn rescaled_covariance_at_small_eps() {
    let spec = KernelSpec::levy(0.75).unwrap();
    let e = rescaled_covariance_error(&spec, 1e-3, 1.0, 2.0);
    println!("relative error at eps=1e-3: {e:+.4}");
    assert!(e.abs() <= 0.03);
}

fn small_field() -> FieldState {
    FieldState::desk(Mollifier { offset: 0.0, width: 1.0 }).unwrap()
}

#[test]
fn decoupled_particle_is_scaled_brownian_motion() {
    let spec = KernelSpec::mainardi(0.4).unwrap();
    let lambda: f64 = 0.3;
    let grid = TimeGrid::new(10.0, 0.05).unwrap();
    let rng = RngSpec::new(3, 8);
    let opts = CoupledOptions { decoupled: true, snapshot_steps: vec![] };
    let path = simulate_coupled(&spec, lambda, &small_field(), &grid, &rng, &opts).unwrap();
    let a = lambda.powf(0.5 / 0.4);
    let mut x = vec![0.0];
    for d in brownian_increments(&grid, &rng) {
        let last = *x.last().unwrap();
        x.push(last + a * d);
    }
    assert_eq!(path.x, x);
}

#[test]
fn field_mass_equals_minus_displacement() {
    for spec in [KernelSpec::mainardi(0.25).unwrap(), KernelSpec::levy(0.7).unwrap()] {
        let grid = TimeGrid::new(50.0, 0.5).unwrap();
        let opts = CoupledOptions { decoupled: false, snapshot_steps: vec![0, 1, 37, 100] };
        let sim = CoupledSimulator::new(spec, 0.4, small_field(), grid, opts).unwrap();
        let ens = sim.run_ensemble(20, &RngSpec::new(12, 0)).unwrap();
        assert!(ens.max_mass_error <= 1e-6, "{spec}: {}", ens.max_mass_error);
        let one = sim.run_path(&RngSpec::new(12, 0), 3).unwrap();
        assert_eq!(one.snapshots.len(), 4);
        assert!(one.snapshots[0].h.iter().all(|&v| v == 0.0));
        assert_eq!(one.x, ens.paths.paths[3]);
    }
}

#[test]
fn particle_leaving_the_field_grid_is_an_error() {
    let spec = KernelSpec::mainardi(0.5).unwrap();
    let field = FieldState::new(4.0, 512, Mollifier { offset: 0.0, width: 0.25 }).unwrap();
    let grid = TimeGrid::new(400.0, 1.0).unwrap();
    let opts = CoupledOptions::default();
    assert!(simulate_coupled(&spec, 0.9, &field, &grid, &RngSpec::new(0, 0), &opts).is_err());
    assert!(simulate_coupled(&spec, 1.5, &field, &grid, &RngSpec::new(0, 0), &opts).is_err());
}

/// The scaled field `lambda^-1 h(x / lambda, t lambda^{-1/g})` equals the
/// Duhamel sum written directly in scaled variables.
#[test]
fn scaled_field_matches_relabelled_simulation() {
    let spec = KernelSpec::mainardi(0.4).unwrap();
    let g = spec.gamma();
    let lambda: f64 = 0.5;
    let grid = TimeGrid::new(4.0, 0.05).unwrap();
    let n = grid.n_steps();
    let mollifier = Mollifier { offset: 0.3, width: 1.0 };
    let field = FieldState::desk(mollifier).unwrap();
    let opts = CoupledOptions { decoupled: false, snapshot_steps: vec![n] };
    let path = simulate_coupled(&spec, lambda, &field, &grid, &RngSpec::new(21, 0), &opts).unwrap();
    let snap = &path.snapshots[0];
    let scale = lambda.powf(1.0 / g);
    let t_scaled = grid.t_end() * scale;
    let k_cut = 12.0 / (lambda * mollifier.width);
    let h_max = snap.h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for x in [-2.0, -0.7, 0.0, 0.4, 1.1, 3.0] {
        let mut direct = 0.0;
        for m in 0..n {
            let dxm = path.x[m + 1] - path.x[m];
            let lag = t_scaled - grid.t(m) * scale;
            let xm = path.x[m];
            let integrand = |k: f64| {
                let phase = Complex64::from_polar(1.0, k * (x - lambda * xm));
                (rho_fourier(&spec, lag, k).unwrap() * mollifier.fourier(lambda * k) * phase).re
            };
            direct -= dxm * integrate(integrand, -k_cut, k_cut, Tolerance::new(1e-13, 1e-11)).value / (2.0 * PI);
        }
        let relabelled = lagrange4(-field.half_width, field.dx(), &snap.h, x / lambda) / lambda;
        assert!((direct - relabelled).abs() <= 1e-6 * h_max / lambda, "x={x}: {direct} vs {relabelled}");
    }
    assert!((original_time(g, lambda, t_scaled) - grid.t_end()).abs() < 1e-12);
}

#[test]
fn csv_exports() {
    let spec = KernelSpec::mainardi(0.3).unwrap();
    let grid = TimeGrid::new(1.0, 0.1).unwrap();
    let ens = sample_xi_paths(&spec, &grid, 100, &RngSpec::new(1, 1)).unwrap();
    let mut out = Vec::new();
    ens.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 1 + MAX_EXPORTED_PATHS);
    assert!(header.starts_with("t,path_0,path_1"));
    assert_eq!(text.lines().count(), 1 + grid.len());
    let mut out = Vec::new();
    ens.write_stats_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,mean,var,stderr");
    assert_eq!(text.lines().count(), 1 + grid.len());
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(16) })]

    #[test]
    fn ensembles_are_reproducible(seed in any::<u64>(), stream in any::<u64>(), g in 0.1f64..0.9) {
        let spec = KernelSpec::mainardi(g).unwrap();
        let grid = TimeGrid::new(1.0, 0.05).unwrap();
        let rng = RngSpec::new(seed, stream);
        let a = sample_xi_paths(&spec, &grid, 8, &rng).unwrap();
        let b = sample_xi_paths(&spec, &grid, 8, &rng).unwrap();
        prop_assert_eq!(&a, &b);
        let other = sample_xi_paths(&spec, &grid, 8, &RngSpec::new(seed, stream.wrapping_add(1))).unwrap();
        prop_assert_ne!(a.paths, other.paths);
    }

    #[test]
    fn sample_moments_are_shift_invariant(xs in proptest::collection::vec(-10.0f64..10.0, 8..64), shift in -5.0f64..5.0) {
        let a = SampleMoments::of(&xs).unwrap();
        let ys: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let b = SampleMoments::of(&ys).unwrap();
        prop_assert!((a.var - b.var).abs() <= 1e-9 * a.var.max(1.0));
        prop_assert!((a.mean + shift - b.mean).abs() <= 1e-9);
    }
}
