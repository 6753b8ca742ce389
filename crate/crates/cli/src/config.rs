//! JSON run configuration. Every field is optional; command-line flags
//! override file values, and built-in defaults fill the rest.

use std::path::{Path, PathBuf};

use fracdrift::kernels::{Family, KernelSpec};
use serde::Deserialize;

use crate::failure::Failure;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Option<String>,
    pub gamma: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub n_paths: Option<usize>,
    pub seed: Option<u64>,
    pub lambda: Option<f64>,
    /// Half width of the periodic field grid.
    #[serde(rename = "L")]
    pub l: Option<f64>,
    /// Number of field grid points.
    pub m: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            Failure::Usage(format!("config {}: {e}", path.display()))
        })
    }
}

/// First of flag, file value, default.
pub fn pick<T: Clone>(flag: Option<T>, file: &Option<T>, default: T) -> T {
    flag.or_else(|| file.clone()).unwrap_or(default)
}

pub fn kernel_spec(family: &str, gamma: f64) -> Result<KernelSpec, Failure> {
    let family: Family = family.parse().map_err(|e: fracdrift::Error| Failure::Usage(e.to_string()))?;
    let (lo, hi) = match family {
        Family::Mainardi => (0.0, 1.0),
        Family::Levy => (0.5, 1.0),
    };
    if !(gamma > lo && gamma < hi) {
        return Err(Failure::Usage(format!("--gamma must lie in ({lo}, {hi}) for the {family} family, got {gamma}")));
    }
    KernelSpec::new(family, gamma).map_err(|e| Failure::Usage(e.to_string()))
}

pub fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("{name} must be finite and > 0, got {v}")))
    }
}

pub fn at_least(name: &str, v: usize, min: usize) -> Result<usize, Failure> {
    if v >= min {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("{name} must be at least {min}, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        assert_eq!(pick(Some(2.0), &Some(1.0), 0.0), 2.0);
        assert_eq!(pick(None, &Some(1.0), 0.0), 1.0);
        assert_eq!(pick(None, &None, 0.5), 0.5);
    }

    #[test]
    fn gamma_range_depends_on_family() {
        assert!(kernel_spec("mainardi", 0.3).is_ok());
        let Err(Failure::Usage(msg)) = kernel_spec("levy", 0.3) else { panic!() };
        assert!(msg.contains("(0.5, 1)"));
        assert!(kernel_spec("gauss", 0.3).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: Result<RunConfig, _> = serde_json::from_str(r#"{"gama": 0.3}"#);
        assert!(r.is_err());
        let r: RunConfig = serde_json::from_str(r#"{"gamma": 0.3, "L": 20, "m": 1024}"#).unwrap();
        assert_eq!((r.gamma, r.l, r.m), (Some(0.3), Some(20.0), Some(1024)));
    }
}
