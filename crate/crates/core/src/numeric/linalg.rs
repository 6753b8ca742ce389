use crate::error::{Error, Result};

/// Solves the dense system `a x = b` in place by Gaussian elimination with
/// partial pivoting. `a` is row-major `n x n`; on return `b` holds `x`.
pub fn solve_dense(a: &mut [f64], b: &mut [f64]) -> Result<()> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        if a[piv * n + col] == 0.0 || !a[piv * n + col].is_finite() {
            return Err(Error::Precision("singular linear system".into()));
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let m = a[r * n + col] / d;
            if m == 0.0 {
                continue;
            }
            for k in col..n {
                a[r * n + k] -= m * a[col * n + k];
            }
            b[r] -= m * b[col];
        }
    }
    for r in (0..n).rev() {
        let mut s = b[r];
        for k in r + 1..n {
            s -= a[r * n + k] * b[k];
        }
        b[r] = s / a[r * n + r];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_permuted_system() {
        let mut a = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let mut b = vec![7.0, 3.0, 6.0];
        solve_dense(&mut a, &mut b).unwrap();
        for (x, e) in b.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-14);
        }
    }
}
