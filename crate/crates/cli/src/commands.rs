use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use fracdrift::analysis::acceptance::criterion_title;
use fracdrift::analysis::{check_green_asymptotic, run_criterion, CheckReport, Provenance, ReportFile, SuiteOptions, CRITERIA};
use fracdrift::kernels::{moment, rho1, rho_fourier, KernelSpec, Moment};
use fracdrift::stochastic::{
    original_time, sample_xi_paths, xi_variance_exact, CoupledOptions, CoupledSimulator, FieldState, Mollifier, RngSpec,
};
use fracdrift::volterra::{green_function, green_function_ml};
use fracdrift::TimeGrid;
use rayon::prelude::*;

use crate::config::{at_least, kernel_spec, pick, positive, RunConfig};
use crate::failure::Failure;
use crate::{CoupledArgs, GreenArgs, KernelArgs, KernelSpecArgs, VerifyArgs, XiArgs};

fn spec_from(a: &KernelSpecArgs, file: &RunConfig) -> Result<KernelSpec, Failure> {
    let family = pick(a.family.clone(), &file.family, "mainardi".to_string());
    let gamma = pick(a.gamma, &file.gamma, 0.25);
    kernel_spec(&family, gamma)
}

fn create(out: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
    fs::create_dir_all(out)?;
    let path = out.join(name);
    let f = File::create(&path).map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", path.display())))?;
    Ok((path, BufWriter::new(f)))
}

fn write_reports(out: &Path, name: &str, checks: Vec<CheckReport>) -> Result<ReportFile, Failure> {
    let report = ReportFile::new(checks);
    let (_, mut w) = create(out, name)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(report)
}

fn verdict(r: &CheckReport) -> &'static str {
    if r.passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn kernel(a: &KernelArgs, file: &RunConfig, out: &Path) -> Result<(), Failure> {
    let spec = spec_from(&a.spec, file)?;
    positive("--z-max", a.z_max)?;
    positive("--k-max", a.k_max)?;
    at_least("--points", a.points, 2)?;
    let header = format!("# family={} gamma={}", spec.family(), spec.gamma());

    let (path, mut w) = create(out, "rho.csv")?;
    writeln!(w, "{header}")?;
    writeln!(w, "z,rho1")?;
    for j in 0..a.points {
        let z = a.z_max * j as f64 / (a.points - 1) as f64;
        writeln!(w, "{z},{:.17e}", rho1(&spec, z)?)?;
    }
    w.flush()?;
    println!("wrote {}", path.display());

    let (path, mut w) = create(out, "moments.csv")?;
    writeln!(w, "{header} t=1")?;
    writeln!(w, "n,status,value,tail_exponent")?;
    for &n in &a.moments {
        match moment(&spec, 1.0, n)? {
            Moment::Finite { value } => {
                writeln!(w, "{n},finite,{value:.17e},")?;
                println!("moment n={n}: {value:.10}");
            }
            Moment::Divergent { tail_exponent } => {
                writeln!(w, "{n},divergent,,{tail_exponent:.6}")?;
                println!("moment n={n}: Divergent (tail exponent {tail_exponent:.3})");
            }
        }
    }
    w.flush()?;
    println!("wrote {}", path.display());

    let (path, mut w) = create(out, "fourier.csv")?;
    writeln!(w, "{header} t=1")?;
    writeln!(w, "k,rho_hat")?;
    for j in 0..=200 {
        let k = a.k_max * j as f64 / 200.0;
        writeln!(w, "{k},{:.17e}", rho_fourier(&spec, 1.0, k)?)?;
    }
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn green(a: &GreenArgs, file: &RunConfig, out: &Path) -> Result<(), Failure> {
    let spec = spec_from(&a.spec, file)?;
    let t_end = positive("--t-end", pick(a.t_end, &file.t_end, 50.0))?;
    let dt = positive("--dt", pick(a.dt, &file.dt, 1e-3))?;
    if !(a.probe >= 1e3) {
        return Err(Failure::Usage(format!("--probe must be >= 1e3, got {}", a.probe)));
    }
    let grid = TimeGrid::new(t_end, dt)?;
    let table = green_function(&spec, &grid)?;

    let (path, mut w) = create(out, "green.csv")?;
    writeln!(w, "# family={} gamma={} dt={dt}", spec.family(), spec.gamma())?;
    writeln!(w, "t,F,F_ml,delta")?;
    let mut max_delta = 0.0f64;
    for (i, &v) in table.values.iter().enumerate() {
        let t = grid.t(i);
        let ml = green_function_ml(&spec, t)?;
        max_delta = max_delta.max((v - ml).abs());
        writeln!(w, "{t},{v:.17e},{ml:.17e},{:.3e}", v - ml)?;
    }
    w.flush()?;
    println!("wrote {}", path.display());

    let checks = vec![
        CheckReport::absolute(format!("ml_delta[{spec}]"), max_delta, 0.0, 1e-4, Provenance::DerivedOracle),
        check_green_asymptotic(&spec, a.probe)?,
    ];
    println!("max ML delta {max_delta:.3e}");
    for c in &checks {
        println!("{} {}: measured {:.6e} target {:.6e}", verdict(c), c.check_id, c.measured, c.target);
    }
    let report = write_reports(out, "green_report.json", checks)?;
    if report.all_passed(true) {
        Ok(())
    } else {
        Err(Failure::Checks("green function checks failed".into()))
    }
}

pub fn simulate_xi(a: &XiArgs, file: &RunConfig, out: &Path) -> Result<(), Failure> {
    let spec = spec_from(&a.spec, file)?;
    let t_end = positive("--t-end", pick(a.t_end, &file.t_end, 10.0))?;
    let dt = positive("--dt", pick(a.dt, &file.dt, 0.01))?;
    let n_paths = at_least("--paths", pick(a.paths, &file.n_paths, 1000), 1)?;
    let seed = pick(a.seed, &file.seed, 0);
    let grid = TimeGrid::new(t_end, dt)?;
    let ens = sample_xi_paths(&spec, &grid, n_paths, &RngSpec::new(seed, 0))?;

    let (path, mut w) = create(out, "xi_paths.csv")?;
    writeln!(w, "# {} seed={seed} paths={n_paths}", ens.label)?;
    ens.write_csv(&mut w)?;
    w.flush()?;
    println!("wrote {}", path.display());

    let (path, mut w) = create(out, "xi_stats.csv")?;
    writeln!(w, "# {} seed={seed} paths={n_paths}", ens.label)?;
    writeln!(w, "t,mean,var,stderr,var_exact")?;
    for s in ens.stats() {
        let exact = xi_variance_exact(&spec, s.t)?;
        writeln!(w, "{:.17e},{:.17e},{:.17e},{:.17e},{exact:.17e}", s.t, s.mean, s.var, s.stderr)?;
    }
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn simulate_coupled(a: &CoupledArgs, file: &RunConfig, out: &Path) -> Result<(), Failure> {
    let spec = spec_from(&a.spec, file)?;
    let lambda = pick(a.lambda, &file.lambda, 0.1);
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Failure::Usage(format!("--lambda must lie in (0, 1), got {lambda}")));
    }
    let t_end = positive("--t-end", pick(a.t_end, &file.t_end, 1.0))?;
    let dt = positive("--dt", pick(a.dt, &file.dt, 1e-3))?;
    let n_paths = at_least("--paths", pick(a.paths, &file.n_paths, 100), 1)?;
    let seed = pick(a.seed, &file.seed, 0);
    let half_width = positive("--field-l", pick(a.l, &file.l, 40.0))?;
    let points = pick(a.m, &file.m, 4096);
    let field = FieldState::new(half_width, points, Mollifier::default())?;

    // The simulator runs in original time; flags are in scaled units.
    let g = spec.gamma();
    let steps = (t_end / dt).round().max(1.0) as usize;
    let grid = TimeGrid::with_steps(original_time(g, lambda, t_end), steps)?;
    let snaps = vec![steps / 4, steps / 2, steps];
    let options = CoupledOptions { decoupled: false, snapshot_steps: snaps };
    let sim = CoupledSimulator::new(spec, lambda, field, grid, options)?;
    let rng = RngSpec::new(seed, 0);

    let (log_path, mut log) = create(out, "mass_check.log")?;
    writeln!(log, "# {spec} lambda={lambda} steps={steps} L={half_width} m={points} seed={seed}")?;
    writeln!(log, "path,max_mass_error")?;
    let results: Vec<_> = (0..n_paths as u64).into_par_iter().map(|p| sim.run_path(&rng, p)).collect::<Result<_, _>>()?;
    let mut runs = Vec::with_capacity(n_paths);
    let mut worst = 0.0f64;
    for (p, run) in results.into_iter().enumerate() {
        let err = run.snapshots.iter().map(|s| (s.mass - s.expected_mass).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
        writeln!(log, "{p},{err:.3e}")?;
        runs.push(run.x);
    }
    log.flush()?;
    let ens = fracdrift::stochastic::PathEnsemble {
        grid: TimeGrid::with_steps(t_end, steps)?,
        paths: runs,
        rng,
        label: format!("coupled {spec} lambda={lambda}"),
    };

    let (path, mut w) = create(out, "coupled_paths.csv")?;
    writeln!(w, "# {} seed={seed} paths={n_paths} (scaled time)", ens.label)?;
    ens.write_csv(&mut w)?;
    w.flush()?;
    println!("wrote {}", path.display());
    let (path, mut w) = create(out, "coupled_stats.csv")?;
    writeln!(w, "# {} seed={seed} paths={n_paths} (scaled time)", ens.label)?;
    ens.write_stats_csv(&mut w)?;
    w.flush()?;
    println!("wrote {}", path.display());
    println!("wrote {}", log_path.display());

    let var = ens.stats().last().map(|s| s.var).unwrap_or(f64::NAN);
    let xi = xi_variance_exact(&spec, t_end)?;
    println!("Var X({t_end}) = {var:.6}, Var xi({t_end}) = {xi:.6}, ratio {:.4}", var / xi);
    println!("max h-mass error {worst:.3e} ({})", if worst <= 1e-6 { "PASS" } else { "FAIL" });
    if worst <= 1e-6 {
        Ok(())
    } else {
        Err(Failure::Checks(format!("h-mass identity violated by {worst:e}")))
    }
}

pub fn verify(a: &VerifyArgs, file: &RunConfig, out: &Path) -> Result<(), Failure> {
    let opts = SuiteOptions { quick: a.quick && !a.full, seed: pick(a.seed, &file.seed, SuiteOptions::default().seed) };
    let mut all = Vec::new();
    for n in CRITERIA {
        let reports = run_criterion(n, &opts);
        let ok = reports.iter().filter(|r| a.strict || r.gating).all(|r| r.passed);
        let passed = reports.iter().filter(|r| r.passed).count();
        println!("criterion {n:>2} {:<40} {}  {passed}/{}", criterion_title(n), if ok { "PASS" } else { "FAIL" }, reports.len());
        for r in reports.iter().filter(|r| !r.passed) {
            let tag = if r.gating { "" } else { " (non-gating)" };
            println!("    {} measured {:.6e} target {:.6e} tol {:e}{tag}", r.check_id, r.measured, r.target, r.tolerance);
        }
        all.extend(reports);
    }
    let report = write_reports(out, "verify_report.json", all)?;
    println!("wrote {}", out.join("verify_report.json").display());
    if report.all_passed(a.strict) {
        Ok(())
    } else {
        let n = report.checks.iter().filter(|c| (a.strict || c.gating) && !c.passed).count();
        Err(Failure::Checks(format!("{n} checks failed")))
    }
}
