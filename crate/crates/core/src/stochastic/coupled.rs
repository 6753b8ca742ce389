//! Desk-scale simulation of the particle coupled to an anomalously
//! diffusing field, in Duhamel form:
//!
//! `dX = lambda^{1/(2g)} dw + lambda^{1/g - 1} <phi_X, h> dt`,
//! `h(t) = -int_0^t dX(s) rho_{t-s} * phi_{X(s)}`.
//!
//! Substituting the second line into the first, the drift is a sum over
//! past increments of `P(t - s, X(t) - X(s))` with
//! `P(tau, d) = <phi_d, rho_tau * phi_0>`, which is tabulated once per lag
//! by an inverse FFT on the truncated space grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::ensemble::PathEnsemble;
use super::rng::{normal_increments, RngSpec};
use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::kernels::{rho_fourier, KernelSpec};
use crate::numeric::interp::lagrange4;

/// Longest path the simulator accepts; memory grows like `n_steps * points`.
pub const MAX_STEPS: usize = 20_000;

/// Gaussian mollifier `phi(x) = N(offset, width^2)` density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    pub offset: f64,
    pub width: f64,
}

impl Default for Mollifier {
    fn default() -> Self {
        Self { offset: 0.0, width: 1.0 }
    }
}

impl Mollifier {
    pub fn eval(&self, x: f64) -> f64 {
        let z = (x - self.offset) / self.width;
        (-0.5 * z * z).exp() / (self.width * (2.0 * PI).sqrt())
    }

    /// `int phi(x) e^{-ikx} dx`.
    pub fn fourier(&self, k: f64) -> Complex64 {
        let w = self.width * k;
        Complex64::from_polar((-0.5 * w * w).exp(), -k * self.offset)
    }
}

/// Truncated periodic space grid `x_j = -L + j dx`, `j = 0..points`, that
/// carries the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub half_width: f64,
    pub points: usize,
    pub mollifier: Mollifier,
}

impl FieldState {
    pub fn new(half_width: f64, points: usize, mollifier: Mollifier) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(domain(format!("half width must be finite and > 0, got {half_width}")));
        }
        if points < 16 || points % 2 != 0 {
            return Err(domain(format!("need an even number of at least 16 points, got {points}")));
        }
        if !(mollifier.width > 0.0) {
            return Err(domain(format!("mollifier width must be > 0, got {}", mollifier.width)));
        }
        let field = Self { half_width, points, mollifier };
        let mass = field.mollifier_mass();
        if (mass - 1.0).abs() > 1e-8 {
            return Err(domain(format!("mollifier mass on the grid is {mass}, not 1 within 1e-8; enlarge or refine the grid")));
        }
        Ok(field)
    }

    /// 40 mollifier widths on each side, 4096 points.
    pub fn desk(mollifier: Mollifier) -> Result<Self> {
        Self::new(40.0 * mollifier.width, 4096, mollifier)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| -self.half_width + j as f64 * self.dx()).collect()
    }

    /// `dx * sum_j phi(x_j)`.
    pub fn mollifier_mass(&self) -> f64 {
        self.dx() * self.nodes().iter().map(|&x| self.mollifier.eval(x)).sum::<f64>()
    }

    /// Wavenumber of FFT bin `n`.
    fn wavenumber(&self, n: usize) -> f64 {
        let s = if n < self.points / 2 { n as f64 } else { n as f64 - self.points as f64 };
        PI * s / self.half_width
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoupledOptions {
    /// Drop the `<phi_X, h>` drift, leaving `X = lambda^{1/(2g)} w`.
    pub decoupled: bool,
    /// Grid nodes at which the field is reconstructed.
    pub snapshot_steps: Vec<usize>,
}

/// Field `h(t_i, x_j)` on the space grid, with its mass and the mass the
/// Duhamel formula predicts, `-(X(t_i) - X(0))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshot {
    pub step: usize,
    pub t: f64,
    pub h: Vec<f64>,
    pub mass: f64,
    pub expected_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledPath {
    pub x: Vec<f64>,
    pub snapshots: Vec<FieldSnapshot>,
}

/// Paths of the coupled system plus the worst field-mass mismatch seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledEnsemble {
    pub paths: PathEnsemble,
    pub max_mass_error: f64,
}

/// Precomputed tables for one `(spec, lambda, field, grid)`.
pub struct CoupledSimulator {
    spec: KernelSpec,
    field: FieldState,
    grid: TimeGrid,
    options: CoupledOptions,
    noise: f64,
    coupling: f64,
    /// `interaction[l - 1][j] = P(l dt, x_j)`.
    interaction: Vec<Vec<f64>>,
    /// FFT bins where the mollifier transform is not negligible.
    modes: Vec<usize>,
    /// `rho_hat[l - 1][q] = rho^(l dt, k_{modes[q]})`.
    rho_hat: Vec<Vec<f64>>,
}

impl CoupledSimulator {
    pub fn new(spec: KernelSpec, lambda: f64, field: FieldState, grid: TimeGrid, options: CoupledOptions) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(domain(format!("lambda must lie in (0, 1), got {lambda}")));
        }
        let n = grid.n_steps();
        if n > MAX_STEPS {
            return Err(domain(format!("at most {MAX_STEPS} steps per path, got {n}")));
        }
        if let Some(&s) = options.snapshot_steps.iter().find(|&&s| s > n) {
            return Err(domain(format!("snapshot step {s} is beyond the grid ({n} steps)")));
        }
        let g = spec.gamma();
        let m = field.points;
        // |phi^|^2 < 1e-30 beyond |k| w = sqrt(69).
        let k_cut = 69f64.sqrt() / field.mollifier.width;
        let modes: Vec<usize> = (0..m).filter(|&q| field.wavenumber(q).abs() <= k_cut).collect();

        let mut planner = FftPlanner::<f64>::new();
        let inverse = planner.plan_fft_inverse(m);
        let mut rho_hat = Vec::with_capacity(n);
        let mut interaction = Vec::with_capacity(n);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for lag in 1..=n {
            let tau = lag as f64 * grid.dt();
            let row: Vec<f64> =
                modes.iter().map(|&q| rho_fourier(&spec, tau, field.wavenumber(q))).collect::<Result<_>>()?;
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            for (&q, r) in modes.iter().zip(&row) {
                let k = field.wavenumber(q);
                let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                buf[q] = Complex64::new(sign * r * field.mollifier.fourier(k).norm_sqr(), 0.0);
            }
            inverse.process(&mut buf);
            interaction.push(buf.iter().map(|z| z.re / (2.0 * field.half_width)).collect());
            rho_hat.push(row);
        }
        Ok(Self {
            spec,
            field,
            grid,
            options,
            noise: lambda.powf(0.5 / g),
            coupling: lambda.powf(1.0 / g - 1.0),
            interaction,
            modes,
            rho_hat,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// `P(lag dt, d)` by cubic interpolation of the table.
    pub fn interaction(&self, lag: usize, d: f64) -> f64 {
        lagrange4(-self.field.half_width, self.field.dx(), &self.interaction[lag - 1], d)
    }

    /// Path `p` of `rng`.
    pub fn run_path(&self, rng: &RngSpec, p: u64) -> Result<CoupledPath> {
        let n = self.grid.n_steps();
        let dt = self.grid.dt();
        let dw = normal_increments(&mut rng.path_rng(p), n, dt);
        let limit = 0.5 * self.field.half_width;
        let mut x = vec![0.0; n + 1];
        let mut dx = vec![0.0; n];
        let mut snapshots = Vec::new();
        if self.options.snapshot_steps.contains(&0) {
            snapshots.push(self.snapshot(&x, &dx, 0));
        }
        for i in 0..n {
            let drift = if self.options.decoupled || i == 0 {
                0.0
            } else {
                let mut acc = 0.0;
                for m in 0..i {
                    acc += dx[m] * self.interaction(i - m, x[i] - x[m]);
                }
                -acc
            };
            dx[i] = self.noise * dw[i] + self.coupling * drift * dt;
            x[i + 1] = x[i] + dx[i];
            if x[i + 1].abs() > limit {
                return Err(domain(format!(
                    "particle left [-L/2, L/2] = [-{limit}, {limit}] at t = {}; enlarge the field grid",
                    self.grid.t(i + 1)
                )));
            }
            if self.options.snapshot_steps.contains(&(i + 1)) {
                snapshots.push(self.snapshot(&x, &dx, i + 1));
            }
        }
        Ok(CoupledPath { x, snapshots })
    }

    /// `h(t_i) = -sum_{m<i} dX_m rho_{t_i - t_m} * phi_{X_m}` on the grid.
    fn snapshot(&self, x: &[f64], dx: &[f64], i: usize) -> FieldSnapshot {
        let f = &self.field;
        let m = f.points;
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        for (q_idx, &q) in self.modes.iter().enumerate() {
            let k = f.wavenumber(q);
            let phi = f.mollifier.fourier(k);
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..i {
                acc += dx[s] * self.rho_hat[i - s - 1][q_idx] * Complex64::from_polar(1.0, -k * x[s]);
            }
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            spec[q] = -acc * phi * sign;
        }
        FftPlanner::<f64>::new().plan_fft_inverse(m).process(&mut spec);
        let h: Vec<f64> = spec.iter().map(|z| z.re / (2.0 * f.half_width)).collect();
        let mass = f.dx() * h.iter().sum::<f64>();
        FieldSnapshot { step: i, t: self.grid.t(i), h, mass, expected_mass: -(x[i] - x[0]) }
    }

    /// `n_paths` independent paths (path `p` uses stream `p` of `rng`).
    pub fn run_ensemble(&self, n_paths: usize, rng: &RngSpec) -> Result<CoupledEnsemble> {
        let runs: Vec<CoupledPath> = (0..n_paths as u64).into_par_iter().map(|p| self.run_path(rng, p)).collect::<Result<_>>()?;
        let max_mass_error = runs
            .iter()
            .flat_map(|r| r.snapshots.iter().map(|s| (s.mass - s.expected_mass).abs()))
            .fold(0.0, f64::max);
        let paths = runs.into_iter().map(|r| r.x).collect();
        Ok(CoupledEnsemble {
            paths: PathEnsemble { grid: self.grid, paths, rng: *rng, label: format!("coupled {}", self.spec) },
            max_mass_error,
        })
    }
}

/// One path of the coupled system (path 0 of `rng`).
pub fn simulate_coupled(
    spec: &KernelSpec,
    lambda: f64,
    field: &FieldState,
    grid: &TimeGrid,
    rng: &RngSpec,
    options: &CoupledOptions,
) -> Result<CoupledPath> {
    CoupledSimulator::new(*spec, lambda, *field, *grid, options.clone())?.run_path(rng, 0)
}

/// Original time `t lambda^{-1/g}` that the rescaled time `t` maps to.
pub fn original_time(gamma: f64, lambda: f64, t: f64) -> f64 {
    t * lambda.powf(-1.0 / gamma)
}
