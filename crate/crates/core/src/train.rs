//! Seeded Lloyd / k-means codebook trainer.
//!
//! Only used to produce codebooks for the encoder; quality is secondary to
//! determinism and the distinct-codevector guarantee.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vq::{check_dim, euclid, Codebook, FeatureVector};

const MAX_ITERS: usize = 100;

/// Trains an `n`-entry codebook from `samples`.
///
/// Centroids start at `n` distinct samples drawn with `seed`, then Lloyd
/// iterations run until assignments are stable or `MAX_ITERS` is reached.
/// Empty clusters are reseeded from the sample farthest from its centroid.
pub fn train_codebook(samples: &[FeatureVector], n: usize, seed: u64) -> Result<Codebook> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "codebook size must be at least 2, got {n}"
        )));
    }
    if samples.len() < n {
        return Err(Error::Training(format!(
            "{} samples cannot produce {n} codevectors",
            samples.len()
        )));
    }
    let k = samples[0].dim();
    for s in samples {
        check_dim(k, s.dim())?;
    }

    let mut distinct: Vec<&[f64]> = samples.iter().map(|s| s.as_slice()).collect();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite components"));
    distinct.dedup();
    if distinct.len() < n {
        return Err(Error::Training(format!(
            "only {} distinct samples, need {n}",
            distinct.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    distinct.shuffle(&mut rng);
    let mut centroids: Vec<Vec<f64>> = distinct[..n].iter().map(|s| s.to_vec()).collect();

    let mut assign = vec![usize::MAX; samples.len()];
    for _ in 0..MAX_ITERS {
        let mut changed = false;
        for (s, a) in samples.iter().zip(assign.iter_mut()) {
            let best = nearest(&centroids, s.as_slice()).0;
            if best != *a {
                *a = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }

        let mut sums = vec![vec![0.0; k]; n];
        let mut counts = vec![0usize; n];
        for (s, &a) in samples.iter().zip(&assign) {
            counts[a] += 1;
            for (acc, v) in sums[a].iter_mut().zip(s.as_slice()) {
                *acc += v;
            }
        }
        for (c, (sum, &count)) in centroids.iter_mut().zip(sums.iter().zip(&counts)) {
            if count > 0 {
                for (ci, si) in c.iter_mut().zip(sum) {
                    *ci = si / count as f64;
                }
            }
        }
        for empty in (0..n).filter(|&c| counts[c] == 0) {
            if let Some(far) = farthest_sample(samples, &centroids) {
                centroids[empty] = far;
            }
        }
    }

    separate_duplicates(&mut centroids);
    Codebook::new(
        centroids
            .into_iter()
            .map(FeatureVector::new)
            .collect::<Result<Vec<_>>>()?,
    )
}

fn nearest(centroids: &[Vec<f64>], x: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centroids.iter().enumerate() {
        let d = euclid(c, x);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// The sample farthest from its nearest centroid, if it is not already a
/// centroid.
fn farthest_sample(samples: &[FeatureVector], centroids: &[Vec<f64>]) -> Option<Vec<f64>> {
    let (mut best, mut best_d) = (None, 0.0);
    for s in samples {
        let d = nearest(centroids, s.as_slice()).1;
        if d > best_d {
            best_d = d;
            best = Some(s.as_slice().to_vec());
        }
    }
    best
}

/// Nudges coincident centroids apart until all are distinct.
fn separate_duplicates(centroids: &mut [Vec<f64>]) {
    let mut step = 0usize;
    loop {
        let mut dup = None;
        'scan: for i in 0..centroids.len() {
            for j in i + 1..centroids.len() {
                if centroids[i] == centroids[j] {
                    dup = Some(j);
                    break 'scan;
                }
            }
        }
        let Some(j) = dup else { return };
        let dim = step % centroids[j].len();
        let v = &mut centroids[j][dim];
        *v += 1e-9 * (1.0 + v.abs());
        step += 1;
    }
}
