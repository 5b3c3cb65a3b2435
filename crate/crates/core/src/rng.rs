//! Deterministic random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type StreamRng = ChaCha8Rng;

/// Independent stream `index` under the master `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Seed for an independent sub-computation `tag` under `seed`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX - tag);
    rng.random()
}

/// Uniform direction on the unit sphere in `d` dimensions.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point in the unit ball: a random direction scaled by `U^{1/d}`.
pub fn in_unit_ball<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    let dir = unit_vector(rng, d);
    let radius = rng.random::<f64>().powf(1.0 / d as f64);
    dir.into_iter().map(|x| x * radius).collect()
}
