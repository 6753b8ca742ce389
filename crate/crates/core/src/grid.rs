use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Uniform discretization `t_i = i dt`, `i = 0..=n_steps`, of `[0, t_end]`.
///
/// ```
/// use fracdrift::TimeGrid;
/// let g = TimeGrid::new(50.0, 1e-3).unwrap();
/// assert_eq!(g.n_steps(), 50_000);
/// assert!(TimeGrid::new(1.0, 0.3).is_err()); // not a multiple of dt
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_end: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, dt: f64) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(domain(format!("t_end must be finite and > 0, got {t_end}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(domain(format!("dt must be finite and > 0, got {dt}")));
        }
        let n = (t_end / dt).round();
        if (n * dt - t_end).abs() > 1e-9 * t_end {
            return Err(domain(format!("t_end = {t_end} is not an integer multiple of dt = {dt}")));
        }
        Self::with_steps(t_end, n as usize)
    }

    pub fn with_steps(t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(domain(format!("t_end must be finite and > 0, got {t_end}")));
        }
        if n_steps < 2 {
            return Err(domain(format!("a time grid needs at least 2 steps, got {n_steps}")));
        }
        Ok(Self { t_end, dt: t_end / n_steps as f64, n_steps })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of nodes, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self, i: usize) -> f64 {
        if i == self.n_steps {
            self.t_end
        } else {
            i as f64 * self.dt
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.t(i)).collect()
    }
}
