//! Monte Carlo layer: seeded Brownian increments, sample paths of the
//! stochastic convolution `xi`, its exact second moments, the covariance
//! of the Gaussian limit and the coupled particle-field simulator.

mod coupled;
mod ensemble;
mod rng;
mod xi;

pub use coupled::{
    original_time, simulate_coupled, CoupledEnsemble, CoupledOptions, CoupledPath, CoupledSimulator, FieldSnapshot,
    FieldState, Mollifier, MAX_STEPS,
};
pub use ensemble::{NodeStats, PathEnsemble, SampleMoments, MAX_EXPORTED_PATHS};
pub use rng::{brownian_increments, RngSpec};
pub use xi::{
    sample_xi_paths, sample_xi_paths_for, xi_covariance_exact, xi_covariance_for, xi_variance_exact,
    xi_variance_for, xi_variance_limit, z_covariance,
};
