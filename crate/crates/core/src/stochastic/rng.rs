use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::grid::TimeGrid;

/// Seed material for every random quantity in the crate.
///
/// The ChaCha key is built from `(seed, stream_id)`, so two specs that
/// differ in either give unrelated streams; path `p` of an ensemble then
/// uses ChaCha stream `p` under that key. Results therefore do not depend
/// on how paths are scheduled across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Generator for path `p`.
    pub fn path_rng(&self, p: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream_id.to_le_bytes());
        key[16..].copy_from_slice(b"fracdrift/paths\0");
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(p);
        rng
    }
}

pub(crate) fn normal_increments(rng: &mut ChaCha8Rng, n: usize, dt: f64) -> Vec<f64> {
    let s = dt.sqrt();
    (0..n).map(|_| s * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Independent `N(0, dt)` Brownian increments, one per grid step, from
/// path 0 of `rng`.
///
/// ```
/// use fracdrift::stochastic::{brownian_increments, RngSpec};
/// use fracdrift::TimeGrid;
/// let grid = TimeGrid::new(1.0, 0.01).unwrap();
/// let a = brownian_increments(&grid, &RngSpec::new(7, 0));
/// assert_eq!(a.len(), 100);
/// assert_eq!(a, brownian_increments(&grid, &RngSpec::new(7, 0)));
/// assert_ne!(a, brownian_increments(&grid, &RngSpec::new(7, 1)));
/// ```
pub fn brownian_increments(grid: &TimeGrid, rng: &RngSpec) -> Vec<f64> {
    normal_increments(&mut rng.path_rng(0), grid.n_steps(), grid.dt())
}
