use crate::error::{domain, Result};
use crate::grid::TimeGrid;
use crate::kernels::{IteratedKernel, SingularKernel};

/// Truncation threshold on the sup over the grid of the next term.
const SERIES_TOL: f64 = 1e-10;

fn terms(kernel: &SingularKernel, n_terms: usize, grid: &TimeGrid) -> Result<Vec<IteratedKernel>> {
    if n_terms == 0 {
        return Err(domain("the resolvent series needs at least one term"));
    }
    let mut out = Vec::with_capacity(n_terms);
    for nu in 0..n_terms {
        let term = IteratedKernel::new(kernel, nu)?;
        // Sup of |k t^e| over (dt, t_end]: at an end point for a power law.
        let sup = term.eval(grid.dt()).abs().max(term.eval(grid.t_end()).abs());
        out.push(term);
        if nu > 0 && sup < SERIES_TOL {
            break;
        }
    }
    Ok(out)
}

/// Resolvent `H = sum_nu (-1)^{nu+1} K^{*(nu+1)}` of `h + K*h = g`, so that
/// `h = g + H*g`, summed up to `n_terms` iterates (fewer once the next
/// term falls below `1e-10` everywhere on `grid`).
///
/// ```
/// use fracdrift::kernels::KernelSpec;
/// use fracdrift::volterra::resolvent_series;
/// use fracdrift::TimeGrid;
/// let k = KernelSpec::mainardi(0.25).unwrap().singular_kernel();
/// let grid = TimeGrid::new(1.0, 0.01).unwrap();
/// let one = resolvent_series(&k, 1, 0.5, &grid).unwrap();
/// assert!((one + k.eval(0.5)).abs() < 1e-15);
/// ```
pub fn resolvent_series(kernel: &SingularKernel, n_terms: usize, t: f64, grid: &TimeGrid) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("time must be > 0, got {t}")));
    }
    let mut sum = 0.0;
    for (nu, term) in terms(kernel, n_terms, grid)?.iter().enumerate() {
        let sign = if nu % 2 == 0 { -1.0 } else { 1.0 };
        sum += sign * term.eval(t);
    }
    Ok(sum)
}

/// `h(t) = 1 + (H * 1)(t)`: the solution for unit forcing through the
/// series, each term convolved with `1` exactly.
pub fn resolvent_solution_unit_forcing(
    kernel: &SingularKernel,
    n_terms: usize,
    t: f64,
    grid: &TimeGrid,
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain(format!("time must be >= 0, got {t}")));
    }
    let mut sum = 1.0;
    for (nu, term) in terms(kernel, n_terms, grid)?.iter().enumerate() {
        let sign = if nu % 2 == 0 { -1.0 } else { 1.0 };
        let e = term.exponent + 1.0;
        sum += sign * term.coefficient * t.powf(e) / e;
    }
    Ok(sum)
}
