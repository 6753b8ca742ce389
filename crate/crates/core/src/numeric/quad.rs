//! Adaptive Gauss-Kronrod (7/15) quadrature and Gauss-Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::sum::CompensatedSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule for the adaptive integrator: stop once the estimated error
/// is below `max(abs, rel * |I|)` or `max_intervals` panels are in use.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, max_intervals: 2000 }
    }

    pub const fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-14, 1e-12)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

/// One 15-point Kronrod panel: (integral, error estimate).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let ah = h.abs();
    let err = rescale_error((res_k - res_g) * h, res_abs * ah, res_asc * ah);
    (res_k * h, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Quad {
    integrate_breaks(f, &[a, b], tol)
}

/// Globally adaptive integration over consecutive panels given by `points`
/// (sorted). Interior points mark kinks, peaks or scale changes.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], tol: Tolerance) -> Quad {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(&mut f, w[0], w[1]);
            heap.push(Panel { a: w[0], b: w[1], value, error });
        }
    }
    let total = |heap: &BinaryHeap<Panel>| {
        let mut v = CompensatedSum::new();
        let mut e = 0.0;
        for p in heap.iter() {
            v.add(p.value);
            e += p.error;
        }
        (v.value(), e)
    };
    let (mut value, mut error) = total(&heap);
    // Panels too narrow to split further are parked here; their error is
    // roundoff-limited and no longer reducible.
    let mut parked: Vec<Panel> = Vec::new();
    let mut iterations = 0;
    while error > tol.abs.max(tol.rel * value.abs()) {
        if heap.len() + parked.len() >= tol.max_intervals {
            break;
        }
        let Some(p) = heap.pop() else { break };
        let mid = 0.5 * (p.a + p.b);
        if (p.b - p.a) <= 1e-14 * (p.a.abs() + p.b.abs()).max(f64::MIN_POSITIVE) {
            parked.push(p);
            continue;
        }
        let (v1, e1) = gk15(&mut f, p.a, mid);
        let (v2, e2) = gk15(&mut f, mid, p.b);
        heap.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
        iterations += 1;
        // Incremental bookkeeping drifts; resum periodically.
        if iterations % 64 == 0 {
            let (v, e) = total(&heap);
            let pv: f64 = parked.iter().map(|p| p.value).sum();
            let pe: f64 = parked.iter().map(|p| p.error).sum();
            value = v + pv;
            error = e + pe;
        } else {
            value += v1 + v2 - p.value;
            error += e1 + e2 - p.error;
        }
    }
    let (v, e) = total(&heap);
    let pv: f64 = parked.iter().map(|p| p.value).sum();
    let pe: f64 = parked.iter().map(|p| p.error).sum();
    let value = v + pv;
    let error = e + pe;
    Quad { value, error, converged: error <= tol.abs.max(tol.rel * value.abs()) * 1.0001 }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
