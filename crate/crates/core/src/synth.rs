//! Synthetic clustered datasets with a prescribed `S : T−S : I−T` mix.
//!
//! The codebook is a jittered `side × side` grid in the plane. Inputs are
//! drawn around codevectors (for `S` and `T − S`) or outside the grid's
//! bounding box (for `I − T`), and each draw is accepted only if the
//! full-search classification agrees with the intended region.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoder::{classify_region, Region};
use crate::error::{Error, Result};
use crate::vq::{Codebook, FeatureVector};

/// Grid jitter amplitude per coordinate, as a fraction of the unit spacing.
const JITTER: f64 = 0.15;
/// `δ̂` relative to the unit grid spacing.
pub const GRID_DELTA_HAT: f64 = 1.2;
const MAX_ATTEMPTS: usize = 10_000;

/// Target fractions; the `I − T` share is `1 − s − t_minus_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionMix {
    pub s: f64,
    pub t_minus_s: f64,
}

impl RegionMix {
    /// 90% / 9% / 1%.
    pub const STANDARD: RegionMix = RegionMix {
        s: 0.90,
        t_minus_s: 0.09,
    };

    pub fn i_minus_t(&self) -> f64 {
        1.0 - self.s - self.t_minus_s
    }

    fn counts(&self, total: usize) -> Result<[usize; 3]> {
        if self.s < 0.0 || self.t_minus_s < 0.0 || self.i_minus_t() < -1e-12 {
            return Err(Error::InvalidParameter(format!("invalid region mix {self:?}")));
        }
        let s = ((self.s * total as f64).round() as usize).min(total);
        let t = ((self.t_minus_s * total as f64).round() as usize).min(total - s);
        Ok([s, t, total - s - t])
    }
}

#[derive(Debug, Clone)]
pub struct ClusteredDataset {
    pub codebook: Codebook,
    pub delta_hat: f64,
    pub vectors: Vec<FeatureVector>,
    /// Region of each vector, as verified by full search.
    pub regions: Vec<Region>,
}

/// Jittered square grid of `side²` codevectors with unit spacing.
pub fn grid_codebook(side: usize, seed: u64) -> Result<Codebook> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Codebook::from_rows((0..side * side).map(|i| {
        let (gx, gy) = ((i % side) as f64, (i / side) as f64);
        vec![
            gx + rng.random_range(-JITTER..JITTER),
            gy + rng.random_range(-JITTER..JITTER),
        ]
    }))
}

fn point(c: &[f64], r: f64, phi: f64) -> FeatureVector {
    FeatureVector::new(vec![c[0] + r * phi.cos(), c[1] + r * phi.sin()]).expect("finite")
}

/// Builds a dataset of `total` vectors over a `side × side` grid codebook.
pub fn clustered_dataset(
    side: usize,
    total: usize,
    mix: RegionMix,
    seed: u64,
) -> Result<ClusteredDataset> {
    if side < 2 {
        return Err(Error::InvalidParameter("grid side must be at least 2".into()));
    }
    let codebook = grid_codebook(side, seed)?;
    let delta_hat = GRID_DELTA_HAT;
    let half = codebook.delta0() / 2.0;
    let extent = (side - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_DA7A);

    let draw = |region: Region, rng: &mut ChaCha8Rng| -> Result<FeatureVector> {
        for _ in 0..MAX_ATTEMPTS {
            let phi = rng.random_range(0.0..TAU);
            let x = match region {
                Region::S => {
                    let c = codebook.codevectors()[rng.random_range(0..codebook.len())].as_slice();
                    point(c, rng.random_range(0.0..0.95) * half, phi)
                }
                Region::TminusS => {
                    let c = codebook.codevectors()[rng.random_range(0..codebook.len())].as_slice();
                    point(c, rng.random_range(half..delta_hat), phi)
                }
                Region::IminusT => {
                    let out = rng.random_range(delta_hat + 0.2..delta_hat + 3.0) + JITTER;
                    let along = rng.random_range(0.0..=extent);
                    let (px, py) = match rng.random_range(0..4) {
                        0 => (-out, along),
                        1 => (extent + out, along),
                        2 => (along, -out),
                        _ => (along, extent + out),
                    };
                    FeatureVector::new(vec![px, py]).expect("finite")
                }
            };
            if classify_region(&x, &codebook, delta_hat)? == region {
                return Ok(x);
            }
        }
        Err(Error::InvalidParameter(format!(
            "could not sample a {region:?} point in {MAX_ATTEMPTS} attempts"
        )))
    };

    let [ns, nt, no] = mix.counts(total)?;
    let mut items = Vec::with_capacity(total);
    for (region, count) in [(Region::S, ns), (Region::TminusS, nt), (Region::IminusT, no)] {
        for _ in 0..count {
            items.push((draw(region, &mut rng)?, region));
        }
    }
    items.shuffle(&mut rng);
    let (vectors, regions) = items.into_iter().unzip();
    Ok(ClusteredDataset {
        codebook,
        delta_hat,
        vectors,
        regions,
    })
}
