use num_complex::Complex64;
use rustfft::FftPlanner;

/// Linear convolution `out[k] = sum_{i+j=k} a[i] b[j]` truncated to
/// `b.len()` entries; FFT above a small size.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    if n <= 256 {
        return (0..n).map(|k| (0..=k.min(a.len() - 1)).map(|i| a[i] * b[k - i]).sum()).collect();
    }
    let size = (a.len() + n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut fa: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fa.resize(size, Complex64::new(0.0, 0.0));
    let mut fb: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fb.resize(size, Complex64::new(0.0, 0.0));
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    fa.iter().take(n).map(|z| z.re / size as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_convolution_matches_direct() {
        let a: Vec<f64> = (0..700).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let b: Vec<f64> = (0..600).map(|i| (i as f64).sqrt()).collect();
        let fast = convolve(&a, &b);
        for k in [0, 1, 300, 599] {
            let direct: f64 = (0..=k).map(|i| a[i] * b[k - i]).sum();
            assert!((fast[k] - direct).abs() < 1e-10 * direct.abs().max(1.0));
        }
    }
}
