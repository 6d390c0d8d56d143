//! Amplitude-level simulation of the thresholded Grover iteration.
//!
//! One iteration flips the phase of every index whose codevector lies
//! strictly closer than the threshold, then reflects about the uniform
//! superposition. Starting from the uniform state, the marked amplitudes stay
//! equal to each other (as do the unmarked ones), so the whole evolution is a
//! rotation in a two-dimensional plane: after `j` iterations the marked set
//! carries probability `sin²((2j+1)θ)` with `sin θ = √(t/N)`.
//!
//! [`grover_distribution`] is the closed form used by the encoder.
//! [`statevector_distribution`] applies the two reflections literally and
//! exists to cross-check it.

use std::ops::AddAssign;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vq::{check_dim, Codebook, FeatureVector};

/// Default upper bound on `N` for [`statevector_distribution`].
pub const DEFAULT_STATEVECTOR_CAP: usize = 4096;

/// Random stream driving measurements.
pub type SearchRng = ChaCha8Rng;

/// The measurement stream for input vector `ordinal` under `master_seed`.
///
/// Streams for different ordinals are independent, so per-vector results do
/// not depend on the order vectors are processed in.
pub fn vector_rng(master_seed: u64, ordinal: u64) -> SearchRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(ordinal);
    rng
}

/// Indices accepted by the oracle, out of a search space of size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSet {
    n: usize,
    indices: Vec<usize>,
}

impl MarkedSet {
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("search space must be non-empty".into()));
        }
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidParameter(format!(
                "marked index {bad} outside 0..{n}"
            )));
        }
        Ok(Self { n, indices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of marked indices.
    pub fn t(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The `r`-th unmarked index in ascending order.
    fn nth_unmarked(&self, mut r: usize) -> usize {
        debug_assert!(r < self.n - self.indices.len());
        for &m in &self.indices {
            if m <= r {
                r += 1;
            } else {
                break;
            }
        }
        r
    }
}

/// Oracle predicate for input `x`: all `i` with `d(x, c[i]) < delta`.
///
/// The enumeration stands in for the oracle's superposed evaluation and is
/// never charged to a [`QueryMeter`].
pub fn marked_set(x: &FeatureVector, codebook: &Codebook, delta: f64) -> Result<MarkedSet> {
    check_dim(codebook.dim(), x.dim())?;
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "threshold must be non-negative, got {delta}"
        )));
    }
    let indices = (0..codebook.len())
        .filter(|&i| codebook.dist_to(x.as_slice(), i) < delta)
        .collect();
    Ok(MarkedSet {
        n: codebook.len(),
        indices,
    })
}

/// Measurement distribution after `j` iterations with `t` of `n` marked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverDistribution {
    pub n: usize,
    pub t: usize,
    pub j: u64,
    pub p_marked_each: f64,
    pub p_unmarked_each: f64,
}

impl GroverDistribution {
    /// Total probability of observing some marked index.
    pub fn p_marked_total(&self) -> f64 {
        self.t as f64 * self.p_marked_each
    }

    /// Expands to a per-index probability vector for `marked`.
    pub fn to_vec(&self, marked: &MarkedSet) -> Vec<f64> {
        let mut out = vec![self.p_unmarked_each; self.n];
        for &i in marked.indices() {
            out[i] = self.p_marked_each;
        }
        out
    }
}

fn marked_mass(t: usize, n: usize, j: u64) -> f64 {
    if t == 0 {
        0.0
    } else if t == n {
        1.0
    } else {
        let theta = (t as f64 / n as f64).sqrt().asin();
        let s = ((2 * j + 1) as f64 * theta).sin();
        (s * s).clamp(0.0, 1.0)
    }
}

/// Closed-form distribution after `j` iterations.
///
/// `t = 0` leaves the uniform state untouched; `t = n` is uniform over the
/// (all-marked) space.
pub fn grover_distribution(t: usize, n: usize, j: u64) -> Result<GroverDistribution> {
    if n == 0 {
        return Err(Error::InvalidParameter("search space must be non-empty".into()));
    }
    if t > n {
        return Err(Error::InvalidParameter(format!(
            "{t} marked exceeds search space {n}"
        )));
    }
    let mass = marked_mass(t, n, j);
    let p_marked_each = if t == 0 { 0.0 } else { mass / t as f64 };
    let p_unmarked_each = if t == n {
        0.0
    } else if t == 0 {
        1.0 / n as f64
    } else {
        (1.0 - mass) / (n - t) as f64
    };
    Ok(GroverDistribution {
        n,
        t,
        j,
        p_marked_each,
        p_unmarked_each,
    })
}

/// Explicit statevector evolution, capped at [`DEFAULT_STATEVECTOR_CAP`].
pub fn statevector_distribution(marked: &MarkedSet, j: u64) -> Result<Vec<f64>> {
    statevector_distribution_capped(marked, j, DEFAULT_STATEVECTOR_CAP)
}

/// Applies `j` rounds of phase flip on marked indices followed by the
/// reflection `a ↦ 2·mean(a) − a`, and returns squared amplitudes.
pub fn statevector_distribution_capped(
    marked: &MarkedSet,
    j: u64,
    cap: usize,
) -> Result<Vec<f64>> {
    let n = marked.n();
    if n > cap {
        return Err(Error::StatevectorTooLarge { n, cap });
    }
    let mut amp = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..j {
        for &i in marked.indices() {
            amp[i] = -amp[i];
        }
        let mean = amp.iter().sum::<f64>() / n as f64;
        for a in &mut amp {
            *a = 2.0 * mean - *a;
        }
    }
    Ok(amp.into_iter().map(|a| a * a).collect())
}

/// Operation counters for one encode call (or a sum of them).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryMeter {
    /// Applications of the Grover iteration.
    pub grover_iterations: u64,
    /// Classical distance evaluations.
    pub classical_distance_evals: u64,
}

impl QueryMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge_grover(&mut self, iterations: u64) {
        self.grover_iterations += iterations;
    }

    pub fn charge_classical(&mut self, evals: u64) {
        self.classical_distance_evals += evals;
    }

    pub fn total(&self) -> u64 {
        self.grover_iterations + self.classical_distance_evals
    }
}

impl AddAssign for QueryMeter {
    fn add_assign(&mut self, rhs: Self) {
        self.grover_iterations += rhs.grover_iterations;
        self.classical_distance_evals += rhs.classical_distance_evals;
    }
}

/// Runs `j` iterations and observes the index register.
///
/// Samples from the closed-form distribution and charges `j` iterations.
pub fn measure<R: Rng + ?Sized>(
    marked: &MarkedSet,
    j: u64,
    rng: &mut R,
    meter: &mut QueryMeter,
) -> usize {
    meter.charge_grover(j);
    let n = marked.n();
    let t = marked.t();
    let mass = marked_mass(t, n, j);
    let u: f64 = rng.random();
    if t > 0 && (t == n || u < mass) {
        marked.indices()[rng.random_range(0..t)]
    } else {
        marked.nth_unmarked(rng.random_range(0..n - t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn marked_set_examples() {
        let cb = Codebook::from_rows([vec![0.0, 1.0], vec![5.0, 5.0], vec![1.0, 0.0]]).unwrap();
        let x = fv(&[0.0, 0.0]);
        assert_eq!(marked_set(&x, &cb, 2.0).unwrap().indices(), &[0, 2]);
        assert!(marked_set(&x, &cb, 0.0).unwrap().is_empty());
        assert_eq!(marked_set(&x, &cb, 100.0).unwrap().indices(), &[0, 1, 2]);
        // Strict: distance exactly 1 is not below 1.
        assert!(marked_set(&x, &cb, 1.0).unwrap().is_empty());
    }

    #[test]
    fn marked_set_errors() {
        let cb = Codebook::from_rows([vec![0.0], vec![1.0]]).unwrap();
        assert!(marked_set(&fv(&[0.0, 0.0]), &cb, 1.0).is_err());
        assert!(marked_set(&fv(&[0.0]), &cb, -1.0).is_err());
        assert!(MarkedSet::new(4, vec![4]).is_err());
        assert!(MarkedSet::new(0, vec![]).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let d = grover_distribution(1, 4, 1).unwrap();
        assert!((d.p_marked_total() - 1.0).abs() < 1e-12);
        let d = grover_distribution(2, 8, 0).unwrap();
        assert!((d.p_marked_total() - 0.25).abs() < 1e-15);
        let d = grover_distribution(1, 256, 12).unwrap();
        // sin²(25·asin(1/16)) evaluated at 40 digits.
        assert!((d.p_marked_total() - 0.999_947_042_103_273_7).abs() < 1e-12);
    }

    #[test]
    fn closed_form_degenerate_counts() {
        let d = grover_distribution(0, 8, 5).unwrap();
        assert_eq!(d.p_unmarked_each, 1.0 / 8.0);
        assert_eq!(d.p_marked_total(), 0.0);
        let d = grover_distribution(8, 8, 3).unwrap();
        assert_eq!(d.p_marked_each, 1.0 / 8.0);
        assert_eq!(d.p_unmarked_each, 0.0);
        assert!(grover_distribution(9, 8, 0).is_err());
        assert!(grover_distribution(0, 0, 0).is_err());
    }

    #[test]
    fn statevector_examples() {
        let m = MarkedSet::new(4, vec![3]).unwrap();
        let p = statevector_distribution(&m, 1).unwrap();
        assert!((p[3] - 1.0).abs() < 1e-12);
        let m = MarkedSet::new(6, vec![1, 4]).unwrap();
        for p in statevector_distribution(&m, 0).unwrap() {
            assert!((p - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn statevector_cap() {
        let m = MarkedSet::new(20, vec![]).unwrap();
        assert!(matches!(
            statevector_distribution_capped(&m, 1, 16),
            Err(Error::StatevectorTooLarge { n: 20, cap: 16 })
        ));
        let big = MarkedSet::new(DEFAULT_STATEVECTOR_CAP + 1, vec![]).unwrap();
        assert!(statevector_distribution(&big, 0).is_err());
    }

    #[test]
    fn period_of_exact_quarter_case() {
        // θ = π/6: each iteration advances the angle by π/3 and sin² has
        // period π, so the marked mass repeats every 3 iterations.
        for j in 0..10 {
            let a = grover_distribution(1, 4, j).unwrap().p_marked_total();
            let b = grover_distribution(1, 4, j + 3).unwrap().p_marked_total();
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn nth_unmarked_skips_marked() {
        let m = MarkedSet::new(8, vec![0, 3, 4, 7]).unwrap();
        let got: Vec<usize> = (0..4).map(|r| m.nth_unmarked(r)).collect();
        assert_eq!(got, vec![1, 2, 5, 6]);
    }

    #[test]
    fn measure_point_mass_and_meter() {
        let m = MarkedSet::new(4, vec![3]).unwrap();
        let mut rng = vector_rng(7, 0);
        let mut meter = QueryMeter::new();
        for _ in 0..1000 {
            assert_eq!(measure(&m, 1, &mut rng, &mut meter), 3);
        }
        assert_eq!(meter.grover_iterations, 1000);
        assert_eq!(meter.classical_distance_evals, 0);
    }

    #[test]
    fn measure_all_marked_and_none_marked() {
        let all = MarkedSet::new(5, (0..5).collect()).unwrap();
        let none = MarkedSet::new(5, vec![]).unwrap();
        let mut rng = vector_rng(1, 1);
        let mut meter = QueryMeter::new();
        for _ in 0..200 {
            assert!(measure(&all, 2, &mut rng, &mut meter) < 5);
            assert!(measure(&none, 2, &mut rng, &mut meter) < 5);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut r1 = vector_rng(3, 9);
        let mut r2 = vector_rng(3, 9);
        let a: Vec<u64> = (0..4).map(|_| r1.random()).collect();
        let b: Vec<u64> = (0..4).map(|_| r2.random()).collect();
        assert_eq!(a, b);
        let x: u64 = vector_rng(3, 9).random();
        let y: u64 = vector_rng(3, 10).random();
        assert_ne!(x, y);
    }
}
