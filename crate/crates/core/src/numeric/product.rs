//! Product-integration weights for `int (T - s)^-g f(s) ds` with `f`
//! linear on each cell of a unit grid.

use super::quad::gauss_legendre;

/// For a cell at distance `m` (`v = (T - s)/dt` in `[m-1, m]`):
/// `left[m]  = int_{m-1}^m v^-g (v - m + 1) dv` multiplies the node farther
/// from `T`, `right[m] = int_{m-1}^m v^-g (m - v) dv` the nearer one.
/// Index 0 is unused.
#[derive(Debug, Clone)]
pub struct ProductWeights {
    pub exponent: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl ProductWeights {
    pub fn new(exponent: f64, m_max: usize) -> Self {
        let g = exponent;
        let a = 1.0 - g;
        let (x, w) = gauss_legendre(8);
        let mut left = vec![0.0; m_max + 1];
        let mut right = vec![0.0; m_max + 1];
        for m in 1..=m_max {
            let mf = m as f64;
            if m < 8 {
                // Closed forms; no cancellation for small m.
                let j0 = (mf.powf(a) - (mf - 1.0).powf(a)) / a;
                let j1 = (mf.powf(a + 1.0) - (mf - 1.0).powf(a + 1.0)) / (a + 1.0);
                left[m] = j1 - (mf - 1.0) * j0;
                right[m] = mf * j0 - j1;
            } else {
                // Far from the singularity Gauss-Legendre is exact to roundoff.
                let (mut l, mut r) = (0.0, 0.0);
                for (xi, wi) in x.iter().zip(&w) {
                    let u = 0.5 * (xi + 1.0); // v = m - 1 + u
                    let k = 0.5 * wi * (mf - 1.0 + u).powf(-g);
                    l += k * u;
                    r += k * (1.0 - u);
                }
                left[m] = l;
                right[m] = r;
            }
        }
        Self { exponent, left, right }
    }
}
