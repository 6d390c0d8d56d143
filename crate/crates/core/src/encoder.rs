//! Hybrid quantum/classical nearest-codevector encoder.
//!
//! Encoding of one input `x` runs up to three stages:
//!
//! 1. **Sub1.** Mark every codevector with `d(x, c[i]) < δ₀/2`, apply
//!    `⌊π/4·√N⌋` Grover iterations and measure. At most one codevector can be
//!    that close, so a measured index that verifies classically is the unique
//!    optimum.
//! 2. **Sub2.** Mark every codevector with `d(x, c[i]) < δ̂` and run a
//!    BBHT-style schedule: draw `j` uniformly from `0..=⌊m⌋`, iterate, measure
//!    `h`, and on `d(x, c[h]) < δ̂` scan the precomputed neighborhood
//!    `Ω(c[h])`. Any `c[j]` outside it satisfies
//!    `d(x, c[j]) ≥ d(c[j], c[h]) − d(c[h], x) > 2δ̂ − δ̂`, so the scan finds
//!    the global optimum. On failure `m ← min(λm, √N)`.
//! 3. **Fallback.** When the Sub2 iteration budget runs out, classical full
//!    search.
//!
//! Every stage is exact, so the quantum part only changes the cost recorded
//! in the [`QueryMeter`], never the result.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grover::{marked_set, measure, vector_rng, QueryMeter};
use crate::neighborhood::NeighborhoodTable;
use crate::vq::{check_dim, full_search, nearest_in, Codebook, FeatureVector};

pub const DEFAULT_BBHT_GROWTH: f64 = 6.0 / 5.0;
pub const DEFAULT_BUDGET_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncoderConfig {
    /// Sub2 threshold; must be at least `δ₀/2`.
    pub delta_hat: f64,
    /// Growth factor `λ` of the BBHT range.
    pub bbht_growth: f64,
    /// Sub2 may spend at most `⌈factor·√N⌉` Grover iterations per vector.
    pub bbht_budget_factor: f64,
    pub master_seed: u64,
}

impl EncoderConfig {
    pub fn new(delta_hat: f64) -> Self {
        Self {
            delta_hat,
            bbht_growth: DEFAULT_BBHT_GROWTH,
            bbht_budget_factor: DEFAULT_BUDGET_FACTOR,
            master_seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_budget_factor(mut self, factor: f64) -> Self {
        self.bbht_budget_factor = factor;
        self
    }

    pub fn validate(&self, codebook: &Codebook) -> Result<()> {
        if !self.delta_hat.is_finite() || self.delta_hat < codebook.delta0() / 2.0 {
            return Err(Error::InvalidParameter(format!(
                "delta_hat={} must be finite and at least delta0/2={}",
                self.delta_hat,
                codebook.delta0() / 2.0
            )));
        }
        if !(self.bbht_growth > 1.0) || !self.bbht_growth.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bbht_growth must be > 1, got {}",
                self.bbht_growth
            )));
        }
        if !(self.bbht_budget_factor > 0.0) || self.bbht_budget_factor.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "bbht_budget_factor must be > 0, got {}",
                self.bbht_budget_factor
            )));
        }
        Ok(())
    }

    /// Maximum Grover iterations Sub2 may spend on one vector.
    pub fn sub2_budget(&self, n: usize) -> u64 {
        let b = (self.bbht_budget_factor * (n as f64).sqrt()).ceil();
        if b >= u64::MAX as f64 {
            u64::MAX
        } else {
            b as u64
        }
    }
}

/// Grover iterations used by Sub1: `⌊π/4·√N⌋`.
pub fn sub1_iterations(n: usize) -> u64 {
    (FRAC_PI_4 * (n as f64).sqrt()).floor() as u64
}

/// Which stage produced the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    Sub1,
    Sub2,
    ClassicalFallback,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::Sub1 => "sub1",
            Path::Sub2 => "sub2",
            Path::ClassicalFallback => "fallback",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodeOutcome {
    pub index: usize,
    pub dist: f64,
    pub path: Path,
    pub meter: QueryMeter,
    /// The measured center `h` whose neighborhood was scanned (Sub2 only).
    pub probe: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sub2Outcome {
    Found { index: usize, probe: usize },
    Fallback,
}

/// Sub1: returns the optimum if `x` lies within `δ₀/2` of a codevector and
/// the measurement lands on it, `None` otherwise.
pub fn encode_sub1<R: Rng + ?Sized>(
    x: &FeatureVector,
    codebook: &Codebook,
    rng: &mut R,
    meter: &mut QueryMeter,
) -> Result<Option<usize>> {
    let delta = codebook.delta0() / 2.0;
    let marked = marked_set(x, codebook, delta)?;
    let i0 = measure(&marked, sub1_iterations(codebook.len()), rng, meter);
    meter.charge_classical(1);
    let d0 = codebook.dist_to(x.as_slice(), i0);
    Ok((d0 < delta).then_some(i0))
}

/// Sub2: randomized Grover schedule over the `δ̂` ball followed by a
/// classical scan of the measured codevector's neighborhood.
pub fn encode_sub2<R: Rng + ?Sized>(
    x: &FeatureVector,
    codebook: &Codebook,
    table: &NeighborhoodTable,
    cfg: &EncoderConfig,
    rng: &mut R,
    meter: &mut QueryMeter,
) -> Result<Sub2Outcome> {
    check_table(codebook, table, cfg)?;
    let n = codebook.len();
    let delta_hat = cfg.delta_hat;
    let marked = marked_set(x, codebook, delta_hat)?;
    let m_cap = (n as f64).sqrt();
    let budget = cfg.sub2_budget(n);

    let mut m = 1.0_f64;
    let mut spent = 0u64;
    loop {
        let j = rng.random_range(0..=m.floor() as u64);
        if spent + j > budget {
            return Ok(Sub2Outcome::Fallback);
        }
        spent += j;
        let h = measure(&marked, j, rng, meter);
        meter.charge_classical(1);
        if codebook.dist_to(x.as_slice(), h) < delta_hat {
            let omega = table.neighbors(h);
            meter.charge_classical(omega.len() as u64);
            let (index, _) = nearest_in(x.as_slice(), codebook, omega.iter().copied());
            return Ok(Sub2Outcome::Found { index, probe: h });
        }
        m = (cfg.bbht_growth * m).min(m_cap);
    }
}

fn check_table(codebook: &Codebook, table: &NeighborhoodTable, cfg: &EncoderConfig) -> Result<()> {
    if table.delta_hat().to_bits() != cfg.delta_hat.to_bits() {
        return Err(Error::DeltaHatMismatch {
            table: table.delta_hat(),
            config: cfg.delta_hat,
        });
    }
    if table.len() != codebook.len() {
        return Err(Error::InvalidParameter(format!(
            "neighborhood table has {} entries, codebook has {}",
            table.len(),
            codebook.len()
        )));
    }
    Ok(())
}

/// Full hybrid encoding of one vector: Sub1, then Sub2, then full search.
pub fn encode<R: Rng + ?Sized>(
    x: &FeatureVector,
    codebook: &Codebook,
    table: &NeighborhoodTable,
    cfg: &EncoderConfig,
    rng: &mut R,
) -> Result<EncodeOutcome> {
    check_dim(codebook.dim(), x.dim())?;
    cfg.validate(codebook)?;
    check_table(codebook, table, cfg)?;

    let mut meter = QueryMeter::new();
    let outcome = |index: usize, path, meter, probe| EncodeOutcome {
        index,
        dist: codebook.dist_to(x.as_slice(), index),
        path,
        meter,
        probe,
    };

    if let Some(index) = encode_sub1(x, codebook, rng, &mut meter)? {
        return Ok(outcome(index, Path::Sub1, meter, None));
    }
    match encode_sub2(x, codebook, table, cfg, rng, &mut meter)? {
        Sub2Outcome::Found { index, probe } => Ok(outcome(index, Path::Sub2, meter, Some(probe))),
        Sub2Outcome::Fallback => {
            let (index, _) = full_search(x, codebook)?;
            meter.charge_classical(codebook.len() as u64);
            Ok(outcome(index, Path::ClassicalFallback, meter, None))
        }
    }
}

/// Codebook, neighborhoods and configuration bundled for repeated use.
///
/// Vector `ordinal` always draws from `vector_rng(master_seed, ordinal)`.
#[derive(Debug, Clone, Copy)]
pub struct HybridEncoder<'a> {
    codebook: &'a Codebook,
    table: &'a NeighborhoodTable,
    config: EncoderConfig,
}

impl<'a> HybridEncoder<'a> {
    pub fn new(
        codebook: &'a Codebook,
        table: &'a NeighborhoodTable,
        config: EncoderConfig,
    ) -> Result<Self> {
        config.validate(codebook)?;
        check_table(codebook, table, &config)?;
        Ok(Self {
            codebook,
            table,
            config,
        })
    }

    pub fn codebook(&self) -> &'a Codebook {
        self.codebook
    }

    pub fn table(&self) -> &'a NeighborhoodTable {
        self.table
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn encode(&self, x: &FeatureVector, ordinal: u64) -> Result<EncodeOutcome> {
        let mut rng = vector_rng(self.config.master_seed, ordinal);
        encode(x, self.codebook, self.table, &self.config, &mut rng)
    }
}

/// Input-space region of `x` by nearest-codevector distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Within `δ₀/2` of a codevector.
    S,
    /// Within `δ̂` but not within `δ₀/2`.
    TminusS,
    /// Beyond `δ̂` from every codevector.
    IminusT,
}

/// Diagnostic classification via the full-search oracle.
pub fn classify_region(x: &FeatureVector, codebook: &Codebook, delta_hat: f64) -> Result<Region> {
    let (_, d) = full_search(x, codebook)?;
    Ok(if d < codebook.delta0() / 2.0 {
        Region::S
    } else if d < delta_hat {
        Region::TminusS
    } else {
        Region::IminusT
    })
}

/// Picks `δ̂` as the nearest-rank `percentile` of nearest-codevector
/// distances over `sample`, clamped to lie strictly above `δ₀/2`.
pub fn choose_delta_hat(
    codebook: &Codebook,
    sample: &[FeatureVector],
    percentile: f64,
) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    if !(percentile > 0.0 && percentile <= 100.0) {
        return Err(Error::InvalidParameter(format!(
            "percentile must be in (0, 100], got {percentile}"
        )));
    }
    let mut dists = sample
        .iter()
        .map(|x| full_search(x, codebook).map(|(_, d)| d))
        .collect::<Result<Vec<f64>>>()?;
    dists.sort_by(f64::total_cmp);
    let rank = ((percentile / 100.0) * dists.len() as f64).ceil() as usize;
    let value = dists[rank.clamp(1, dists.len()) - 1];
    let floor = (codebook.delta0() / 2.0).next_up();
    Ok(value.max(floor))
}
