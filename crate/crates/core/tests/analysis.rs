use std::f64::consts::PI;

use fracdrift::analysis::{
    check_complete_monotone, check_green_asymptotic, check_invariance_principle, check_transform_identity,
    diffusive_baseline, diffusive_baseline_native, fit_power_law, fourier_laplace_numeric, invariance_errors,
    log_growth, log_space, CheckReport, Provenance, ReportFile, LOG_GROWTH_MIN_R2, PAPER_C_HALF,
};
use fracdrift::kernels::{KernelSpec, SingularKernel};
use fracdrift::stochastic::{xi_variance_exact, xi_variance_for};
use fracdrift::volterra::{green_function, green_ml, GreenTable, SchemeInfo};
use fracdrift::{Error, TimeGrid};
use proptest::prelude::*;
use statrs::function::erf::erfc;

#[test]
fn exact_square_law() {
    let ts = log_space(1.0, 100.0, 20);
    let vs: Vec<f64> = ts.iter().map(|t| t * t).collect();
    let fit = fit_power_law(&ts, &vs, (1.0, 100.0)).unwrap();
    assert!((fit.exponent - 2.0).abs() < 1e-12);
    assert!((fit.r_squared - 1.0).abs() < 1e-12);
}

#[test]
fn corrected_power_law() {
    let ts = log_space(1e3, 1e5, 30);
    let vs: Vec<f64> = ts.iter().map(|t| 0.7 * t.powf(-0.25) * (1.0 + t.powf(-0.3))).collect();
    let fit = fit_power_law(&ts, &vs, (1e3, 1e5)).unwrap();
    assert!((fit.exponent + 0.25).abs() <= 0.02, "{}", fit.exponent);
}

#[test]
fn fit_rejects_thin_or_nonpositive_data() {
    let ts = log_space(1.0, 10.0, 7);
    let vs = vec![1.0; 7];
    assert!(matches!(fit_power_law(&ts, &vs, (1.0, 10.0)), Err(Error::InsufficientData(_))));
    let ts = log_space(1.0, 10.0, 12);
    let mut vs = vec![1.0; 12];
    vs[3] = 0.0;
    assert!(matches!(fit_power_law(&ts, &vs, (1.0, 10.0)), Err(Error::InsufficientData(_))));
    // Points outside the window do not count.
    let ts = log_space(1.0, 100.0, 12);
    assert!(fit_power_law(&ts, &vec![1.0; 12], (1.0, 3.0)).is_err());
}

/// Same fit as the superdiffusive acceptance criterion; expected to fail
/// at these horizons (see the criterion 7 numbers).
#[test]
fn superdiffusive_variance_exponent() {
    let spec = KernelSpec::levy(0.75).unwrap();
    let ts = log_space(1e2, 1e4, 9);
    let vs: Vec<f64> = ts.iter().map(|&t| xi_variance_exact(&spec, t).unwrap()).collect();
    let fit = fit_power_law(&ts, &vs, (1e2, 1e4)).unwrap();
    println!("{spec}: exponent {:.4}", fit.exponent);
    assert!((fit.exponent - 0.5).abs() <= 0.05);
}

#[test]
fn green_asymptotic_examples() {
    let r = check_green_asymptotic(&KernelSpec::mainardi(0.25).unwrap(), 1e4).unwrap();
    assert!(r.passed && (r.target - 0.5516).abs() < 1e-4, "{r:?}");
    let r = check_green_asymptotic(&KernelSpec::mainardi(0.5).unwrap(), 1e4).unwrap();
    assert!(r.passed && (r.target - 2.0 / PI.sqrt()).abs() < 1e-14, "{r:?}");
    assert!(check_green_asymptotic(&KernelSpec::mainardi(0.5).unwrap(), 10.0).is_err());
}

/// Spec example; the t^{-1/4} correction keeps it outside 2% at t = 1e4.
#[test]
fn green_asymptotic_levy_075() {
    let spec = KernelSpec::levy(0.75).unwrap();
    let r = check_green_asymptotic(&spec, 1e4).unwrap();
    let c = 2f64.powf(0.75) * statrs::function::gamma::gamma(1.75) / PI;
    assert!((r.target - (0.75 * PI).sin() / (PI * c)).abs() < 1e-12);
    println!("deviation {:+.4}", r.deviation());
    assert!(r.passed);
}

fn table_of(values: Vec<f64>, grid: TimeGrid) -> GreenTable {
    GreenTable {
        spec: KernelSpec::mainardi(0.5).unwrap(),
        grid,
        values,
        scheme: SchemeInfo { name: "synthetic", order: 0, dt: grid.dt(), corrections: vec![] },
    }
}

#[test]
fn complete_monotone_controls() {
    let grid = TimeGrid::new(10.0, 0.01).unwrap();
    let r = check_complete_monotone(&green_function(&KernelSpec::mainardi(0.4).unwrap(), &grid).unwrap());
    assert!(r.passed && r.provenance == Provenance::PropertyOnly);
    let cosine = table_of(grid.times().iter().map(|t| t.cos()).collect(), grid);
    let r = check_complete_monotone(&cosine);
    assert!(!r.passed && r.measured > 0.0);
    assert!(check_complete_monotone(&table_of(vec![1.0; grid.len()], grid)).passed);
}

#[test]
fn invariance_monotone_improvement() {
    for spec in [KernelSpec::mainardi(0.75).unwrap(), KernelSpec::levy(0.6).unwrap()] {
        let errs = invariance_errors(&spec, &[1e-1, 1e-2, 1e-3], 1.0, 2.0).unwrap();
        assert!(errs.windows(2).all(|w| w[1].abs() <= w[0].abs()), "{spec}: {errs:?}");
    }
}

#[test]
fn invariance_reports_have_the_right_shape() {
    let spec = KernelSpec::levy(0.75).unwrap();
    let reps = check_invariance_principle(0.75, &spec, &[1e-1, 1e-2], &[(1.0, 1.0)]).unwrap();
    assert_eq!(reps.len(), 3);
    assert!(reps[2].check_id.starts_with("invariance_monotone") && reps[2].passed);
    assert!(check_invariance_principle(0.6, &spec, &[1e-2], &[(1.0, 1.0)]).is_err());
    assert!(check_invariance_principle(0.4, &KernelSpec::mainardi(0.4).unwrap(), &[1e-2], &[(1.0, 1.0)]).is_err());
}

/// Spec examples at eps = 1e-3; the approach to the limit is too slow for
/// 3% (recorded numbers: -0.51 and -0.15).
#[test]
fn invariance_at_small_eps() {
    let spec = KernelSpec::mainardi(0.75).unwrap();
    let reps = check_invariance_principle(0.75, &spec, &[1e-3], &[(1.0, 1.0)]).unwrap();
    let c = fracdrift::kernels::c_gamma(&spec);
    assert!((reps[0].target - 1.0 / (PI * PI * c * c)).abs() < 1e-12 * reps[0].target);
    let spec = KernelSpec::mainardi(0.6).unwrap();
    let more = check_invariance_principle(0.6, &spec, &[1e-3], &[(1.0, 2.0)]).unwrap();
    for r in [&reps[0], &more[0]] {
        println!("{}: deviation {:+.4}", r.check_id, r.deviation());
    }
    assert!(reps[0].passed && more[0].passed);
}

#[test]
fn transform_identity_examples() {
    assert!((fourier_laplace_numeric(0.5, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-10);
    for g in [0.2, 0.45, 0.8] {
        assert!((fourier_laplace_numeric(g, 2.0, 0.0).unwrap() - 0.5).abs() < 1e-12);
    }
    assert!((fourier_laplace_numeric(0.25, 1.0, 2.0).unwrap() - 0.2).abs() < 1e-10);
    let r = check_transform_identity(0.6, &[0.3, 1.0, 3.0], &[0.5, 1.5]).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(fourier_laplace_numeric(0.5, 0.0, 1.0).is_err());
}

#[test]
fn diffusive_baseline_paper_value() {
    let r = diffusive_baseline((1e4, 1e6)).unwrap();
    assert_eq!(r.provenance, Provenance::PaperValue);
    assert!((r.target - 0.6366).abs() < 1e-4);
    assert!(r.passed, "{r:?}");
    let r = diffusive_baseline_native((1e4, 1e6)).unwrap();
    assert!((r.target - 4.0 / PI).abs() < 1e-12 && r.passed, "{r:?}");
    assert!(diffusive_baseline((1e2, 1e6)).is_err());
}

#[test]
fn power_growth_is_not_log_growth() {
    let spec = KernelSpec::mainardi(0.75).unwrap();
    let fit = log_growth(&spec.singular_kernel(), (1e4, 1e6)).unwrap();
    assert!(fit.r_squared < LOG_GROWTH_MIN_R2, "r2 = {}", fit.r_squared);
}

/// With c = (2 pi)^{-1/2}, F(t) = e^{t/2} erfc(sqrt(t/2)) and
/// F(t)^2 = 2/(pi t) (1 - 2/t + ...), so Var(b) - Var(a) is (2/pi) log(b/a)
/// up to O(1/a).
#[test]
fn baseline_green_function_is_the_erfc_solution() {
    let k = SingularKernel::new(PAPER_C_HALF, 0.5).unwrap();
    for t in [0.5, 2.0, 9.0] {
        let exact = (t / 2.0f64).exp() * erfc((t / 2.0f64).sqrt());
        assert!((green_ml(&k, t).unwrap() - exact).abs() < 1e-9);
    }
    let (a, b) = (1e4, 1e6);
    let growth = xi_variance_for(&k, b).unwrap() - xi_variance_for(&k, a).unwrap();
    let analytic = 2.0 / PI * ((b / a).ln() + 2.0 / b - 2.0 / a);
    assert!((growth - analytic).abs() < 1e-6, "{growth} vs {analytic}");
}

#[test]
fn report_file_round_trip() {
    let file = ReportFile::new(vec![
        CheckReport::relative("a", 1.0, 1.0, 0.1, Provenance::PaperValue),
        CheckReport::errored("b", Provenance::PropertyOnly).non_gating(),
    ]);
    let json = serde_json::to_string(&file).unwrap();
    assert!(json.starts_with("{\"schema_version\":1,"));
    let back: ReportFile = serde_json::from_str(&json).unwrap();
    assert_eq!(back.checks[0], file.checks[0]);
    assert!(back.checks[1].measured.is_nan());
    assert!(back.all_passed(false) && !back.all_passed(true));
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn exact_power_laws_are_recovered(p in -3.0f64..3.0, a in 0.01f64..100.0, lo in 0.1f64..10.0) {
        let ts = log_space(lo, lo * 1e3, 16);
        let vs: Vec<f64> = ts.iter().map(|t| a * t.powf(p)).collect();
        let fit = fit_power_law(&ts, &vs, (lo, lo * 1e3)).unwrap();
        prop_assert!((fit.exponent - p).abs() < 1e-10);
        prop_assert!((fit.prefactor / a - 1.0).abs() < 1e-9);
    }

    #[test]
    fn passed_is_recomputable(m in -10.0f64..10.0, t in 0.1f64..10.0, tol in 0.0f64..2.0, abs in any::<bool>()) {
        let r = if abs {
            CheckReport::absolute("p", m, t, tol, Provenance::PropertyOnly)
        } else {
            CheckReport::relative("p", m, t, tol, Provenance::PropertyOnly)
        };
        let dev = if abs { (m - t).abs() } else { (m / t - 1.0).abs() };
        prop_assert_eq!(r.passed, dev <= tol);
        prop_assert_eq!(r.passed, r.recompute());
    }

    #[test]
    fn green_tables_pass_the_monotone_check(g in 0.1f64..0.9) {
        let spec = KernelSpec::mainardi(g).unwrap();
        let table = green_function(&spec, &TimeGrid::new(5.0, 0.01).unwrap()).unwrap();
        prop_assert!(check_complete_monotone(&table).passed);
    }
}
