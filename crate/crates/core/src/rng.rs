use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The single random stream a simulation run draws from.
pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One draw from N(0, sigma²). Always consumes a sample, even for sigma = 0,
/// so the stream layout does not depend on parameter values.
pub fn gauss(rng: &mut SimRng, sigma: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    sigma * z
}

/// One Bernoulli draw; always consumes a sample.
pub fn bernoulli(rng: &mut SimRng, p: f64) -> bool {
    let u: f64 = rng.random();
    u < p
}
