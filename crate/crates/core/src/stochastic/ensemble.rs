use std::io::Write;

use serde::{Deserialize, Serialize};

use super::rng::RngSpec;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::numeric::pairwise_sum;

/// Most paths written by [`PathEnsemble::write_csv`].
pub const MAX_EXPORTED_PATHS: usize = 64;

/// Monte Carlo sample paths on a common grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub grid: TimeGrid,
    /// `paths[p][i]` is path `p` at node `i`.
    pub paths: Vec<Vec<f64>>,
    pub rng: RngSpec,
    pub label: String,
}

/// Per-node ensemble statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeStats {
    pub t: f64,
    pub mean: f64,
    pub var: f64,
    /// Standard error of the mean.
    pub stderr: f64,
}

/// Sample moments of a one-dimensional sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    pub n: usize,
    pub mean: f64,
    /// Unbiased variance.
    pub var: f64,
    /// Standard error of `var`, from the fourth central moment.
    pub var_stderr: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl SampleMoments {
    pub fn of(xs: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 4 {
            return Err(Error::InsufficientData(format!("need at least 4 samples, got {n}")));
        }
        let nf = n as f64;
        let mean = pairwise_sum(xs) / nf;
        let central = |k: i32| pairwise_sum(&xs.iter().map(|x| (x - mean).powi(k)).collect::<Vec<_>>()) / nf;
        let (m2, m3, m4) = (central(2), central(3), central(4));
        let var = m2 * nf / (nf - 1.0);
        Ok(Self {
            n,
            mean,
            var,
            var_stderr: ((m4 - m2 * m2) / nf).max(0.0).sqrt(),
            skewness: m3 / m2.powf(1.5),
            excess_kurtosis: m4 / (m2 * m2) - 3.0,
        })
    }
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    /// Values of every path at node `i`.
    pub fn node(&self, i: usize) -> Vec<f64> {
        self.paths.iter().map(|p| p[i]).collect()
    }

    pub fn moments_at(&self, i: usize) -> Result<SampleMoments> {
        SampleMoments::of(&self.node(i))
    }

    /// Unbiased sample covariance between nodes `i` and `j`, with its
    /// standard error.
    pub fn covariance(&self, i: usize, j: usize) -> Result<(f64, f64)> {
        let n = self.n_paths();
        if n < 4 {
            return Err(Error::InsufficientData(format!("need at least 4 paths, got {n}")));
        }
        let (a, b) = (self.node(i), self.node(j));
        let nf = n as f64;
        let (ma, mb) = (pairwise_sum(&a) / nf, pairwise_sum(&b) / nf);
        let prods: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).collect();
        let c = pairwise_sum(&prods) / nf;
        let sq: Vec<f64> = prods.iter().map(|p| (p - c) * (p - c)).collect();
        let se = (pairwise_sum(&sq) / nf / nf).sqrt();
        Ok((c * nf / (nf - 1.0), se))
    }

    pub fn stats(&self) -> Vec<NodeStats> {
        let nf = self.n_paths() as f64;
        (0..self.grid.len())
            .map(|i| {
                let xs = self.node(i);
                let mean = pairwise_sum(&xs) / nf;
                let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
                let var = if nf > 1.0 { pairwise_sum(&sq) / (nf - 1.0) } else { 0.0 };
                NodeStats { t: self.grid.t(i), mean, var, stderr: (var / nf).sqrt() }
            })
            .collect()
    }

    /// `t,path_0,...` for at most [`MAX_EXPORTED_PATHS`] paths.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let k = self.n_paths().min(MAX_EXPORTED_PATHS);
        let header: Vec<String> = (0..k).map(|p| format!("path_{p}")).collect();
        writeln!(w, "t,{}", header.join(","))?;
        for i in 0..self.grid.len() {
            write!(w, "{:.17e}", self.grid.t(i))?;
            for p in &self.paths[..k] {
                write!(w, ",{:.17e}", p[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_stats_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,mean,var,stderr")?;
        for s in self.stats() {
            writeln!(w, "{:.17e},{:.17e},{:.17e},{:.17e}", s.t, s.mean, s.var, s.stderr)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_a_small_sample() {
        let m = SampleMoments::of(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(m.mean, 3.0);
        assert_eq!(m.var, 2.5);
        assert!(m.skewness.abs() < 1e-15);
        assert!((m.excess_kurtosis - (6.8 / 4.0 - 3.0)).abs() < 1e-14);
        assert!(SampleMoments::of(&[1.0]).is_err());
    }
}
