//! Seeded, order-preserving parallel evaluation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::VerifyError;

/// Generator for sample `index`: the master seed's ChaCha key on stream
/// `index`. Independent of scheduling.
pub fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `f(0..n)` in index order on a pool sized by `cfg.threads`. The first
/// error (by index) wins.
pub fn par_map<T, F>(cfg: &RunConfig, n: usize, f: F) -> Result<Vec<T>, VerifyError>
where
    T: Send,
    F: Fn(usize) -> Result<T, VerifyError> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| VerifyError::Config(format!("thread pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&f).collect::<Vec<_>>())
        .into_iter()
        .collect()
}
