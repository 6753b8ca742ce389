/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan it stays accurate when a new term is larger in
/// magnitude than the running sum, which is exactly what happens in the
/// alternating series of the special functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of the absolute values of every term added so far.
    pub fn abs_total(&self) -> f64 {
        self.abs
    }

    /// Ratio of the absolute sum to the signed result, i.e. the factor by
    /// which rounding errors of the terms are amplified.
    pub fn cancellation(&self) -> f64 {
        let v = self.value().abs();
        if v == 0.0 {
            f64::INFINITY
        } else {
            self.abs / v
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Pairwise (cascade) summation. The result depends only on the slice, not
/// on how the caller produced it, which keeps ensemble statistics
/// bit-reproducible.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 16;
    if xs.len() <= BASE {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Dot product with eight independent accumulators so the compiler can
/// vectorize it; the accumulation order is fixed, so results are
/// deterministic.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}
