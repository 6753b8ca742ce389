/// Four-point (cubic) Lagrange interpolation on a uniform grid
/// `x_j = x0 + j h`. Near the ends the stencil is shifted inward, so the
/// rule stays cubic everywhere; outside the grid it extrapolates.
pub fn lagrange4(x0: f64, h: f64, ys: &[f64], x: f64) -> f64 {
    let n = ys.len();
    debug_assert!(n >= 4);
    let s = (x - x0) / h;
    let j = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let t = s - j as f64;
    let (y0, y1, y2, y3) = (ys[j], ys[j + 1], ys[j + 2], ys[j + 3]);
    // Nodes at t = 0, 1, 2, 3.
    let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3
}

/// Cubic Lagrange interpolation on a periodic uniform grid of period
/// `n * h` starting at `x0`.
pub fn lagrange4_periodic(x0: f64, h: f64, ys: &[f64], x: f64) -> f64 {
    let n = ys.len() as isize;
    let s = (x - x0) / h;
    let fl = s.floor();
    let t = s - fl + 1.0;
    let j = fl as isize - 1;
    let at = |k: isize| ys[(j + k).rem_euclid(n) as usize];
    let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    at(0) * l0 + at(1) * l1 + at(2) * l2 + at(3) * l3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_is_reproduced() {
        let ys: Vec<f64> = (0..10).map(|j| {
            let x = 0.5 + 0.1 * j as f64;
            x * x * x - x
        }).collect();
        for x in [0.5, 0.53, 0.77, 1.39, 1.4] {
            assert!((lagrange4(0.5, 0.1, &ys, x) - (x * x * x - x)).abs() < 1e-13);
        }
    }

    #[test]
    fn periodic_wraps() {
        let n = 64;
        let h = std::f64::consts::TAU / n as f64;
        let ys: Vec<f64> = (0..n).map(|j| (j as f64 * h).sin()).collect();
        let x = -0.3;
        assert!((lagrange4_periodic(0.0, h, &ys, x) - x.sin()).abs() < 1e-5);
    }
}
