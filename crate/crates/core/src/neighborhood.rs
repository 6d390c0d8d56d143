//! Adjacency list of codevector neighborhoods.
//!
//! `lists[i]` holds every `j` with `d(c[i], c[j]) < 2·δ̂`, sorted ascending.
//! Since `d(c[i], c[i]) = 0`, each list contains its own center, so every
//! neighborhood search has at least one candidate.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::vq::{euclid, Codebook};

/// Payload bits per stored entry in the space estimate.
pub const ENTRY_PAYLOAD_BITS: u64 = 4 * 8;

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodTable {
    delta_hat: f64,
    radius_threshold: f64,
    lists: Vec<Vec<usize>>,
    inf_omega: usize,
}

impl NeighborhoodTable {
    /// Builds all neighborhoods for `codebook` under radius `2·delta_hat`.
    /// Requires `delta_hat >= δ₀/2`.
    pub fn build(codebook: &Codebook, delta_hat: f64) -> Result<Self> {
        if !delta_hat.is_finite() || delta_hat < codebook.delta0() / 2.0 {
            return Err(Error::InvalidParameter(format!(
                "delta_hat={delta_hat} must be finite and at least delta0/2={}",
                codebook.delta0() / 2.0
            )));
        }
        let radius = 2.0 * delta_hat;
        let n = codebook.len();
        let mut lists = vec![Vec::new(); n];
        for i in 0..n {
            lists[i].push(i);
        }
        // Each unordered pair is measured once and recorded on both sides.
        for i in 0..n {
            let ci = codebook.codevectors()[i].as_slice();
            for j in i + 1..n {
                if euclid(ci, codebook.codevectors()[j].as_slice()) < radius {
                    lists[i].push(j);
                    lists[j].push(i);
                }
            }
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        let inf_omega = lists.iter().map(Vec::len).min().unwrap_or(0);
        Ok(Self {
            delta_hat,
            radius_threshold: radius,
            lists,
            inf_omega,
        })
    }

    pub fn delta_hat(&self) -> f64 {
        self.delta_hat
    }

    /// The neighborhood radius `2·δ̂`.
    pub fn radius_threshold(&self) -> f64 {
        self.radius_threshold
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    /// Smallest neighborhood size.
    pub fn inf_omega(&self) -> usize {
        self.inf_omega
    }

    pub fn max_omega(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_omega(&self) -> f64 {
        let total: usize = self.lists.iter().map(Vec::len).sum();
        total as f64 / self.lists.len() as f64
    }

    /// Storage cost of the adjacency list in bits:
    /// `Σ (|Ω(c[i])| + 1) · (⌈log₂ N⌉ + 32)`.
    pub fn space_bits(&self) -> u64 {
        let per_entry = ceil_log2(self.lists.len()) + ENTRY_PAYLOAD_BITS;
        self.lists
            .iter()
            .map(|l| (l.len() as u64 + 1) * per_entry)
            .sum()
    }

    /// Human-readable dump, one `i: j1 j2 ...` line per codevector.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.lists.iter().enumerate() {
            write!(out, "{i}:").unwrap();
            for j in l {
                write!(out, " {j}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Free-function form of [`NeighborhoodTable::build`].
pub fn build_neighborhoods(codebook: &Codebook, delta_hat: f64) -> Result<NeighborhoodTable> {
    NeighborhoodTable::build(codebook, delta_hat)
}

fn ceil_log2(n: usize) -> u64 {
    if n <= 1 {
        0
    } else {
        u64::from(usize::BITS - (n - 1).leading_zeros())
    }
}
