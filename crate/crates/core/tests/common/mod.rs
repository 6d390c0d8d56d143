#![allow(dead_code)]

use hqvq::{Codebook, FeatureVector};
use rand::Rng;

/// Brute-force nearest neighbor written independently of the crate: squared
/// distances in a plain double loop, first minimum wins.
pub fn brute_nearest(x: &[f64], codebook: &[Vec<f64>]) -> (usize, f64) {
    let mut best_i = 0;
    let mut best_sq = f64::MAX;
    for (i, c) in codebook.iter().enumerate() {
        let mut sq = 0.0;
        for t in 0..x.len() {
            sq += (x[t] - c[t]).powi(2);
        }
        if sq < best_sq {
            best_sq = sq;
            best_i = i;
        }
    }
    (best_i, best_sq.sqrt())
}

pub fn rows(cb: &Codebook) -> Vec<Vec<f64>> {
    cb.iter().map(|c| c.as_slice().to_vec()).collect()
}

pub fn fv(v: Vec<f64>) -> FeatureVector {
    FeatureVector::new(v).unwrap()
}

pub fn random_codebook(rng: &mut impl Rng, n: usize, k: usize, scale: f64) -> Codebook {
    Codebook::from_rows((0..n).map(|_| (0..k).map(|_| rng.random_range(0.0..scale)).collect::<Vec<_>>()))
        .unwrap()
}

/// Codebook on the integer lattice; midpoints between entries tie exactly.
pub fn lattice_codebook(rng: &mut impl Rng, n: usize, k: usize, side: i64) -> Codebook {
    assert!((side as f64).powi(k as i32) >= n as f64, "lattice too small");
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < n {
        let p: Vec<i64> = (0..k).map(|_| rng.random_range(0..side)).collect();
        seen.insert(p);
    }
    let mut pts: Vec<Vec<i64>> = seen.into_iter().collect();
    // BTreeSet order is lexicographic; shuffle so index order is arbitrary.
    for i in (1..pts.len()).rev() {
        let j = rng.random_range(0..=i);
        pts.swap(i, j);
    }
    Codebook::from_rows(pts.into_iter().map(|p| p.into_iter().map(|v| (2 * v) as f64).collect::<Vec<_>>()))
        .unwrap()
}

/// Mixed workload of inputs: exact codevectors, points near codevectors,
/// midpoints of codevector pairs and uniform points.
pub fn probe_inputs(rng: &mut impl Rng, cb: &Codebook, count: usize, scale: f64) -> Vec<FeatureVector> {
    let k = cb.dim();
    let n = cb.len();
    (0..count)
        .map(|i| {
            let c = cb.codevectors()[rng.random_range(0..n)].as_slice();
            let v: Vec<f64> = match i % 4 {
                0 => c.to_vec(),
                1 => {
                    let r = cb.delta0() * rng.random_range(0.0..0.6);
                    c.iter().map(|&v| v + r * rng.random_range(-1.0..1.0) / (k as f64).sqrt()).collect()
                }
                2 => {
                    let d = cb.codevectors()[rng.random_range(0..n)].as_slice();
                    c.iter().zip(d).map(|(a, b)| (a + b) / 2.0).collect()
                }
                _ => (0..k).map(|_| rng.random_range(-0.1 * scale..1.1 * scale)).collect(),
            };
            fv(v)
        })
        .collect()
}
