//! The anomalous-diffusion kernels `rho(t, x)`: the Mainardi family (time
//! fractional diffusion, any `g` in `(0,1)`) and the symmetric Levy family
//! (fractional Laplacian, `g` in `(1/2, 1)`).
//!
//! Both are self-similar, `rho(t, x) = t^-g rho(1, x t^-g)`, so everything
//! reduces to the profile `rho(1, z)`.

mod iterated;
mod laplace;
pub mod levy;
mod moments;
mod table;

pub use iterated::{iterated_kernel_closed, iterated_kernel_numeric, IteratedKernel};
pub use laplace::rho_laplace_oracle;
pub use moments::{bounded_ratio, moment, Moment};
pub use table::KernelTable;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{gamma_real, mainardi, mittag_leffler_ext, reciprocal_gamma, SeriesPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Mainardi,
    Levy,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Mainardi => "mainardi",
            Family::Levy => "levy",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mainardi" => Ok(Family::Mainardi),
            "levy" | "lévy" => Ok(Family::Levy),
            other => Err(domain(format!("unknown kernel family '{other}' (expected mainardi or levy)"))),
        }
    }
}

/// A kernel family together with its exponent `g`.
///
/// ```
/// use fracdrift::kernels::{Family, KernelSpec};
/// assert!(KernelSpec::new(Family::Mainardi, 0.25).is_ok());
/// assert!(KernelSpec::new(Family::Levy, 0.25).is_err()); // Levy needs g > 1/2
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSpec {
    family: Family,
    gamma: f64,
}

impl KernelSpec {
    pub fn new(family: Family, gamma: f64) -> Result<Self> {
        let ok = match family {
            Family::Mainardi => gamma > 0.0 && gamma < 1.0,
            Family::Levy => gamma > 0.5 && gamma < 1.0,
        };
        if !ok {
            let range = match family {
                Family::Mainardi => "(0, 1)",
                Family::Levy => "(1/2, 1)",
            };
            return Err(domain(format!("gamma for the {family} kernel must lie in {range}, got {gamma}")));
        }
        Ok(Self { family, gamma })
    }

    pub fn mainardi(gamma: f64) -> Result<Self> {
        Self::new(Family::Mainardi, gamma)
    }

    pub fn levy(gamma: f64) -> Result<Self> {
        Self::new(Family::Levy, gamma)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The Volterra kernel `K(t) = c(g) t^-g` induced by this spec.
    pub fn singular_kernel(&self) -> SingularKernel {
        SingularKernel { coefficient: c_gamma(self), exponent: self.gamma }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(gamma={})", self.family, self.gamma)
    }
}

/// A weakly singular convolution kernel `K(t) = coefficient * t^-exponent`.
///
/// Every quantity downstream of the kernel family (Green function,
/// iterated kernels, variance of the limit process) depends on the family
/// only through this pair, which also lets a caller substitute a different
/// normalization such as `c(1/2) = (2 pi)^-1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularKernel {
    pub coefficient: f64,
    pub exponent: f64,
}

impl SingularKernel {
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        if !(coefficient >= 0.0) || !coefficient.is_finite() {
            return Err(domain(format!("kernel coefficient must be finite and >= 0, got {coefficient}")));
        }
        if !(exponent < 1.0) {
            return Err(domain(format!("kernel exponent must be < 1 for integrability, got {exponent}")));
        }
        Ok(Self { coefficient, exponent })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficient * t.powf(-self.exponent)
    }

    /// `c Gamma(1 - g)`, the constant of the Laplace symbol `c Gamma(1-g) mu^(g-1)`.
    pub fn laplace_constant(&self) -> f64 {
        self.coefficient / reciprocal_gamma(1.0 - self.exponent)
    }
}

/// Central value `c(g) = rho(1, 0)`.
///
/// Mainardi: `1 / (2 Gamma(1-g))`. Levy: `2^g Gamma(1+g) / pi`.
///
/// ```
/// use fracdrift::kernels::{c_gamma, KernelSpec};
/// let c = c_gamma(&KernelSpec::mainardi(0.5).unwrap());
/// assert!((c - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
/// ```
pub fn c_gamma(spec: &KernelSpec) -> f64 {
    let g = spec.gamma;
    match spec.family {
        Family::Mainardi => 0.5 * reciprocal_gamma(1.0 - g),
        Family::Levy => 2f64.powf(g) * gamma_real(1.0 + g).expect("1+g > 0") / std::f64::consts::PI,
    }
}

/// The profile `rho(1, z)`.
pub fn rho1(spec: &KernelSpec, z: f64) -> Result<f64> {
    let z = z.abs();
    match spec.family {
        Family::Mainardi => Ok(0.5 * mainardi(z, spec.gamma, &SeriesPolicy::default())?),
        Family::Levy => Ok(levy::density(spec.gamma, z)),
    }
}

/// Kernel density `rho(t, x) = t^-g rho(1, x t^-g)`.
///
/// ```
/// use fracdrift::kernels::{rho, KernelSpec};
/// // g = 1/2 is the heat kernel with variance 2t.
/// let spec = KernelSpec::mainardi(0.5).unwrap();
/// let v = rho(&spec, 2.0, 1.0).unwrap();
/// let exact = (-1.0f64 / 8.0).exp() / (8.0 * std::f64::consts::PI).sqrt();
/// assert!((v - exact).abs() < 1e-13);
/// ```
pub fn rho(spec: &KernelSpec, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("time must be > 0, got {t}")));
    }
    let s = t.powf(-spec.gamma);
    Ok(s * rho1(spec, x * s)?)
}

/// Spatial Fourier transform `int rho(t, x) e^{ikx} dx`.
///
/// Mainardi: `E_{2g}(-k^2 t^{2g})`. Levy: `exp(-t |k|^{1/g} / 2)`.
pub fn rho_fourier(spec: &KernelSpec, t: f64, k: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("time must be > 0, got {t}")));
    }
    let g = spec.gamma;
    match spec.family {
        Family::Mainardi => {
            let x = k * k * t.powf(2.0 * g);
            if 2.0 * g == 1.0 {
                Ok((-x).exp())
            } else {
                mittag_leffler_ext(2.0 * g, -x, &SeriesPolicy::default())
            }
        }
        Family::Levy => Ok((-0.5 * t * k.abs().powf(1.0 / g)).exp()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_round_trips_through_strings() {
        for f in [Family::Mainardi, Family::Levy] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("gauss".parse::<Family>().is_err());
    }

    #[test]
    fn spec_validation_names_the_range() {
        let e = KernelSpec::mainardi(1.5).unwrap_err().to_string();
        assert!(e.contains("(0, 1)"), "{e}");
    }
}
