use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use super::solver::{correction_exponents, solve_volterra, Sign, VolterraProblem};
use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::kernels::{c_gamma, KernelSpec, SingularKernel};
use crate::specfun::{mittag_leffler_ext, SeriesPolicy};

/// How a [`GreenTable`] was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeInfo {
    pub name: &'static str,
    pub order: u32,
    pub dt: f64,
    /// Exponents handled by the starting weights.
    pub corrections: Vec<f64>,
}

/// The Green function `F` sampled on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct GreenTable {
    pub spec: KernelSpec,
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub scheme: SchemeInfo,
}

impl GreenTable {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    /// Largest `|F - E_{1-g}(...)|` over the grid.
    pub fn max_ml_deviation(&self) -> Result<(f64, f64)> {
        let mut worst = (0.0, 0.0);
        for (i, &v) in self.values.iter().enumerate() {
            let t = self.grid.t(i);
            let d = (v - green_function_ml(&self.spec, t)?).abs();
            if d > worst.0 {
                worst = (d, t);
            }
        }
        Ok(worst)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# family={},gamma={},dt={}", self.spec.family(), self.spec.gamma(), self.grid.dt())?;
        writeln!(w, "t,F")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{v:.17e}", self.grid.t(i))?;
        }
        Ok(())
    }
}

/// Solves `F(t) = 1 - int_0^t c(g) (t-s)^-g F(s) ds` on `grid`.
///
/// ```
/// use fracdrift::kernels::KernelSpec;
/// use fracdrift::volterra::green_function;
/// use fracdrift::TimeGrid;
/// let spec = KernelSpec::mainardi(0.5).unwrap();
/// let table = green_function(&spec, &TimeGrid::new(1.0, 1e-3).unwrap()).unwrap();
/// assert_eq!(table.values[0], 1.0);
/// assert!((table.values[1000] - 0.6156903441).abs() < 1e-7);
/// ```
pub fn green_function(spec: &KernelSpec, grid: &TimeGrid) -> Result<GreenTable> {
    let kernel = spec.singular_kernel();
    let values = green_function_for(&kernel, grid)?;
    Ok(GreenTable {
        spec: *spec,
        grid: *grid,
        values,
        scheme: SchemeInfo {
            name: "product trapezoid with starting weights",
            order: 2,
            dt: grid.dt(),
            corrections: correction_exponents(kernel.exponent),
        },
    })
}

/// Green function for an arbitrary singular kernel.
pub fn green_function_for(kernel: &SingularKernel, grid: &TimeGrid) -> Result<Vec<f64>> {
    solve_volterra(&VolterraProblem {
        kernel: *kernel,
        sign: Sign::Plus,
        forcing: vec![1.0; grid.len()],
        grid: *grid,
    })
}

/// Grid-free Green function `F(t) = E_{1-g}(-c(g) Gamma(1-g) t^{1-g})`,
/// the inverse of the Laplace transform `mu^-g / (mu^{1-g} + c Gamma(1-g))`.
///
/// ```
/// use fracdrift::kernels::KernelSpec;
/// use fracdrift::volterra::green_function_ml;
/// let spec = KernelSpec::mainardi(0.5).unwrap();
/// assert_eq!(green_function_ml(&spec, 0.0).unwrap(), 1.0);
/// assert!((green_function_ml(&spec, 2.0).unwrap() - 0.5231565837).abs() < 1e-9);
/// ```
pub fn green_function_ml(spec: &KernelSpec, t: f64) -> Result<f64> {
    green_ml(&spec.singular_kernel(), t)
}

/// [`green_function_ml`] for an arbitrary kernel with exponent in `(-1, 1)`.
pub fn green_ml(kernel: &SingularKernel, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be finite and >= 0, got {t}")));
    }
    let a = 1.0 - kernel.exponent;
    if !(a > 0.0 && a < 2.0) {
        return Err(domain(format!("kernel exponent must lie in (-1, 1), got {}", kernel.exponent)));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let x = -kernel.laplace_constant() * t.powf(a);
    mittag_leffler_ext(a, x, &SeriesPolicy::default())
}

/// `lim t^{1-g} F(t) = sin(pi g) / (pi c(g))`.
///
/// ```
/// use fracdrift::kernels::KernelSpec;
/// use fracdrift::volterra::green_asymptotic_constant;
/// let v = green_asymptotic_constant(&KernelSpec::mainardi(0.5).unwrap());
/// assert!((v - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
/// ```
pub fn green_asymptotic_constant(spec: &KernelSpec) -> f64 {
    (PI * spec.gamma()).sin() / (PI * c_gamma(spec))
}
