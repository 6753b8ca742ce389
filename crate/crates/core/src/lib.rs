//! Fractional-diffusion kernels, weakly singular Volterra equations and
//! the Gaussian limit of a particle drifting in an anomalously diffusing
//! random field.

pub mod analysis;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod numeric;
pub mod specfun;
pub mod stochastic;
pub mod volterra;

pub use error::{Error, Result};
pub use grid::TimeGrid;
