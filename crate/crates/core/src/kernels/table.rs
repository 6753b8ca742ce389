use std::io::Write;

use super::{rho1, KernelSpec};
use crate::error::{domain, Result};
use crate::numeric::interp::lagrange4;

/// The profile `rho(1, z)` tabulated on a uniform grid `z_j = j h`,
/// `0 <= z <= z_max`, with cubic interpolation between nodes.
///
/// Evaluating the Mainardi series or the Levy quadrature is costly; code
/// that needs the kernel many times builds a table once and shares it.
/// Outside the table the exact profile is evaluated.
#[derive(Debug, Clone)]
pub struct KernelTable {
    spec: KernelSpec,
    h: f64,
    values: Vec<f64>,
}

impl KernelTable {
    pub fn new(spec: KernelSpec, z_max: f64, n_points: usize) -> Result<Self> {
        if !(z_max > 0.0) || n_points < 4 {
            return Err(domain(format!("table needs z_max > 0 and >= 4 points (got {z_max}, {n_points})")));
        }
        let h = z_max / (n_points - 1) as f64;
        let values = (0..n_points).map(|j| rho1(&spec, j as f64 * h)).collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, h, values })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn z_max(&self) -> f64 {
        self.h * (self.values.len() - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(j, &v)| (j as f64 * self.h, v))
    }

    /// `rho(1, z)`, interpolated inside the table.
    pub fn eval(&self, z: f64) -> Result<f64> {
        let z = z.abs();
        if z <= self.z_max() {
            // The even extension has a kink at 0 for g != 1/2, so the
            // stencil must not straddle the origin: lagrange4 clamps it.
            Ok(lagrange4(0.0, self.h, &self.values, z))
        } else {
            rho1(&self.spec, z)
        }
    }

    /// `rho(t, x)` through the self-similar scaling.
    pub fn rho(&self, t: f64, x: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain(format!("time must be > 0, got {t}")));
        }
        let s = t.powf(-self.spec.gamma());
        Ok(s * self.eval(x * s)?)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# family={} gamma={} n={}",
            self.spec.family(),
            self.spec.gamma(),
            self.values.len()
        )?;
        writeln!(w, "z,rho1")?;
        for (z, v) in self.nodes() {
            writeln!(w, "{z},{v:e}")?;
        }
        Ok(())
    }
}
