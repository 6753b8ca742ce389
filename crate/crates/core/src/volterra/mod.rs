//! Linear Volterra equations of the second kind with weakly singular
//! kernels, `h(t) + sign int_0^t c (t-s)^-g h(s) ds = g(t)`, and the Green
//! function `F` of the particle equation (`sign = +1`, forcing `1`).

mod green;
mod resolvent;
mod solver;

pub use crate::grid::TimeGrid;
pub use green::{
    green_asymptotic_constant, green_function, green_function_for, green_function_ml, green_ml, GreenTable,
    SchemeInfo,
};
pub use resolvent::{resolvent_series, resolvent_solution_unit_forcing};
pub use solver::{solve_volterra, Sign, VolterraProblem};
