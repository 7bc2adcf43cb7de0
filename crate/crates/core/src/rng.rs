use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded generator for one independent stream of a computation.
///
/// Streams let per-document or per-restart work draw from disjoint sequences
/// regardless of the order the work is scheduled in.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws an index with probability proportional to `weights[i]`.
///
/// `total` must equal the sum of `weights` and be positive.
pub(crate) fn sample_weighted<R: rand::Rng + ?Sized>(rng: &mut R, weights: &[f64], total: f64) -> usize {
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // Rounding can leave a sliver past the last bucket.
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}
