//! Numerical building blocks shared by the physics modules: compensated and
//! pairwise summation, Gauss quadrature, small dense solves, interpolation
//! and least-squares fits.

pub mod conv;
pub mod fit;
pub mod interp;
pub mod linalg;
pub mod product;
pub mod quad;
pub mod sum;

pub use conv::convolve;
pub use fit::{linear_fit, LinearFit};
pub use quad::{gauss_legendre, integrate, integrate_breaks, Quad, Tolerance};
pub use sum::{pairwise_sum, CompensatedSum};
