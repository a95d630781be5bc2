//! Seeded random streams shared by the solvers and the falsifiers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// An independent stream for `(seed, index)`; results never depend on evaluation order.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// A uniformly random direction scaled to a radius drawn log-uniformly from `[r_min, r_max]`.
pub fn radial_sample<R: Rng>(rng: &mut R, n: usize, r_min: f64, r_max: f64) -> Vec<f64> {
    let mut g = gaussian_vector(rng, n);
    let norm = crate::tensor::norm(&g);
    let radius = (r_min.ln() + rng.gen::<f64>() * (r_max.ln() - r_min.ln())).exp();
    if norm == 0.0 {
        g[0] = radius;
        return g;
    }
    for v in g.iter_mut() {
        *v *= radius / norm;
    }
    g
}

/// A point drawn uniformly from the ball of the given radius.
pub fn uniform_in_ball<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<f64> {
    let mut g = gaussian_vector(rng, n);
    let norm = crate::tensor::norm(&g);
    let r = radius * rng.gen::<f64>().powf(1.0 / n as f64);
    if norm == 0.0 {
        return vec![0.0; n];
    }
    for v in g.iter_mut() {
        *v *= r / norm;
    }
    g
}
