//! Image-level encode/decode and run statistics.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::codec::blocks::{blockify, deblockify, BlockGeometry};
use crate::codec::pgm::ImageGray8;
use crate::codec::stream::IndexStream;
use crate::encoder::{classify_region, EncodeOutcome, EncoderConfig, HybridEncoder, Path, Region};
use crate::error::{Error, Result};
use crate::grover::QueryMeter;
use crate::neighborhood::NeighborhoodTable;
use crate::vq::{full_search, Codebook, FeatureVector};

/// Operation count of the pure quantum encoder used as a reference point,
/// in units of `√N`.
pub const PURE_QUANTUM_FACTOR: f64 = 45.0;

/// Per-region and per-path counts plus meter summaries of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionStats {
    pub vectors: usize,
    pub count_s: usize,
    pub count_t_minus_s: usize,
    pub count_i_minus_t: usize,
    /// Fraction of vectors in `S`.
    pub a: f64,
    /// Fraction of vectors in `T − S`.
    pub b: f64,
    /// Fraction of vectors in `I − T`.
    pub c: f64,
    pub path_sub1: usize,
    pub path_sub2: usize,
    pub path_fallback: usize,
    pub total: QueryMeter,
    pub mean_grover_iters: f64,
    pub max_grover_iters: u64,
    pub mean_classical_evals: f64,
    pub max_classical_evals: u64,
}

impl PartitionStats {
    pub fn from_outcomes<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = (Region, &'a EncodeOutcome)>,
    {
        let mut s = PartitionStats {
            vectors: 0,
            count_s: 0,
            count_t_minus_s: 0,
            count_i_minus_t: 0,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            path_sub1: 0,
            path_sub2: 0,
            path_fallback: 0,
            total: QueryMeter::new(),
            mean_grover_iters: 0.0,
            max_grover_iters: 0,
            mean_classical_evals: 0.0,
            max_classical_evals: 0,
        };
        for (region, out) in items {
            s.vectors += 1;
            match region {
                Region::S => s.count_s += 1,
                Region::TminusS => s.count_t_minus_s += 1,
                Region::IminusT => s.count_i_minus_t += 1,
            }
            match out.path {
                Path::Sub1 => s.path_sub1 += 1,
                Path::Sub2 => s.path_sub2 += 1,
                Path::ClassicalFallback => s.path_fallback += 1,
            }
            s.total += out.meter;
            s.max_grover_iters = s.max_grover_iters.max(out.meter.grover_iterations);
            s.max_classical_evals = s.max_classical_evals.max(out.meter.classical_distance_evals);
        }
        if s.vectors > 0 {
            let n = s.vectors as f64;
            s.a = s.count_s as f64 / n;
            s.b = s.count_t_minus_s as f64 / n;
            s.c = s.count_i_minus_t as f64 / n;
            s.mean_grover_iters = s.total.grover_iterations as f64 / n;
            s.mean_classical_evals = s.total.classical_distance_evals as f64 / n;
        }
        s
    }
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Encodes `vectors` in parallel. Vector `i` uses measurement stream `i`, so
/// the result does not depend on `workers`.
pub fn encode_vectors(
    vectors: &[FeatureVector],
    encoder: &HybridEncoder<'_>,
    workers: Option<usize>,
) -> Result<Vec<(Region, EncodeOutcome)>> {
    let delta_hat = encoder.config().delta_hat;
    in_pool(workers, || {
        vectors
            .par_iter()
            .enumerate()
            .map(|(i, x)| {
                let region = classify_region(x, encoder.codebook(), delta_hat)?;
                Ok((region, encoder.encode(x, i as u64)?))
            })
            .collect::<Result<Vec<_>>>()
    })?
}

pub fn stats_of(outcomes: &[(Region, EncodeOutcome)]) -> PartitionStats {
    PartitionStats::from_outcomes(outcomes.iter().map(|(r, o)| (*r, o)))
}

fn to_index(i: usize) -> Result<u16> {
    u16::try_from(i).map_err(|_| Error::IndexStream(format!("index {i} does not fit in 16 bits")))
}

pub fn encode_image(
    img: &ImageGray8,
    geom: BlockGeometry,
    codebook: &Codebook,
    table: &NeighborhoodTable,
    cfg: &EncoderConfig,
) -> Result<(IndexStream, PartitionStats)> {
    encode_image_with_workers(img, geom, codebook, table, cfg, None)
}

pub fn encode_image_with_workers(
    img: &ImageGray8,
    geom: BlockGeometry,
    codebook: &Codebook,
    table: &NeighborhoodTable,
    cfg: &EncoderConfig,
    workers: Option<usize>,
) -> Result<(IndexStream, PartitionStats)> {
    let encoder = HybridEncoder::new(codebook, table, *cfg)?;
    let vectors = blockify(img, geom);
    if let Some(v) = vectors.first() {
        crate::vq::check_dim(codebook.dim(), v.dim())?;
    }
    let outcomes = encode_vectors(&vectors, &encoder, workers)?;
    let indices = outcomes
        .iter()
        .map(|(_, o)| to_index(o.index))
        .collect::<Result<Vec<_>>>()?;
    let stream = IndexStream::new(codebook.len(), geom, img.width(), img.height(), indices)?;
    Ok((stream, stats_of(&outcomes)))
}

/// Reference encoding by classical full search.
pub fn full_search_encode_image(
    img: &ImageGray8,
    geom: BlockGeometry,
    codebook: &Codebook,
) -> Result<IndexStream> {
    let indices = blockify(img, geom)
        .par_iter()
        .map(|x| full_search(x, codebook).and_then(|(i, _)| to_index(i)))
        .collect::<Result<Vec<_>>>()?;
    IndexStream::new(codebook.len(), geom, img.width(), img.height(), indices)
}

pub fn decode_image(stream: &IndexStream, codebook: &Codebook) -> Result<ImageGray8> {
    if stream.codebook_size as usize != codebook.len() {
        return Err(Error::IndexStream(format!(
            "stream expects a codebook of {}, got {}",
            stream.codebook_size,
            codebook.len()
        )));
    }
    crate::vq::check_dim(stream.geometry.dim(), codebook.dim())?;
    let vectors = stream
        .indices
        .iter()
        .map(|&i| {
            codebook
                .get(i as usize)
                .map(FeatureVector::as_slice)
                .ok_or_else(|| Error::IndexStream(format!("index {i} out of range")))
        })
        .collect::<Result<Vec<_>>>()?;
    deblockify(
        &vectors,
        stream.geometry,
        stream.width as usize,
        stream.height as usize,
    )
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

/// `key=value` report of one run over a codebook of `n` codevectors.
pub fn report(stats: &PartitionStats, n: usize) -> String {
    let sqrt_n = (n as f64).sqrt();
    let mean_total = if stats.vectors == 0 {
        0.0
    } else {
        stats.total.total() as f64 / stats.vectors as f64
    };
    let rows: [(&str, String); 19] = [
        ("n", n.to_string()),
        ("sqrt_n", fmt_f64(sqrt_n)),
        ("vectors", stats.vectors.to_string()),
        ("mean_grover_iters", fmt_f64(stats.mean_grover_iters)),
        ("max_grover_iters", stats.max_grover_iters.to_string()),
        ("mean_classical_evals", fmt_f64(stats.mean_classical_evals)),
        ("max_classical_evals", stats.max_classical_evals.to_string()),
        ("mean_total_ops", fmt_f64(mean_total)),
        ("frac_s", fmt_f64(stats.a)),
        ("frac_t_minus_s", fmt_f64(stats.b)),
        ("frac_i_minus_t", fmt_f64(stats.c)),
        ("ratio_vs_sqrt_n", fmt_f64(stats.mean_grover_iters / sqrt_n)),
        (
            "ratio_vs_pure_quantum",
            fmt_f64(stats.mean_grover_iters / (PURE_QUANTUM_FACTOR * sqrt_n)),
        ),
        ("count_s", stats.count_s.to_string()),
        ("count_t_minus_s", stats.count_t_minus_s.to_string()),
        ("count_i_minus_t", stats.count_i_minus_t.to_string()),
        ("path_sub1", stats.path_sub1.to_string()),
        ("path_sub2", stats.path_sub2.to_string()),
        ("path_fallback", stats.path_fallback.to_string()),
    ];
    let mut out = String::new();
    for (k, v) in rows {
        writeln!(out, "{k}={v}").unwrap();
    }
    out
}

/// Parses `key=value` lines back into pairs, in order.
pub fn parse_report(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats_with(mean_grover: f64, vectors: usize) -> PartitionStats {
        let mut s = PartitionStats::from_outcomes(std::iter::empty());
        s.vectors = vectors;
        s.mean_grover_iters = mean_grover;
        s
    }

    fn lookup(report: &str, key: &str) -> f64 {
        parse_report(report)
            .into_iter()
            .find(|(k, _)| k == key)
            .unwrap()
            .1
            .parse()
            .unwrap()
    }

    #[test]
    fn report_ratios() {
        let r = report(&stats_with(8.0, 1), 256);
        assert_eq!(lookup(&r, "ratio_vs_sqrt_n"), 0.5);
        assert!((lookup(&r, "ratio_vs_pure_quantum") - 8.0 / 720.0).abs() < 1e-15);
        assert!((lookup(&r, "ratio_vs_pure_quantum") - 0.011_111).abs() < 1e-5);
        assert_eq!(lookup(&r, "sqrt_n"), 16.0);
        assert_eq!(lookup(&r, "n"), 256.0);
    }

    #[test]
    fn report_keys_are_stable() {
        let keys: Vec<String> = parse_report(&report(&stats_with(0.0, 0), 4))
            .into_iter()
            .map(|(k, _)| k)
            .collect();
        for k in [
            "n",
            "sqrt_n",
            "mean_grover_iters",
            "mean_classical_evals",
            "frac_s",
            "frac_t_minus_s",
            "frac_i_minus_t",
            "ratio_vs_sqrt_n",
            "ratio_vs_pure_quantum",
            "path_sub1",
            "path_sub2",
            "path_fallback",
        ] {
            assert!(keys.iter().any(|x| x == k), "missing {k}");
        }
    }

    #[test]
    fn fractions_sum_to_one() {
        let o = |path| EncodeOutcome {
            index: 0,
            dist: 0.0,
            path,
            meter: QueryMeter {
                grover_iterations: 3,
                classical_distance_evals: 1,
            },
            probe: None,
        };
        let items = [
            (Region::S, o(Path::Sub1)),
            (Region::S, o(Path::Sub1)),
            (Region::TminusS, o(Path::Sub2)),
            (Region::IminusT, o(Path::ClassicalFallback)),
            (Region::S, o(Path::Sub2)),
            (Region::TminusS, o(Path::Sub2)),
            (Region::S, o(Path::Sub1)),
        ];
        let s = stats_of(&items);
        assert!((s.a + s.b + s.c - 1.0).abs() < 1e-12);
        assert_eq!(s.path_sub1 + s.path_sub2 + s.path_fallback, 7);
        assert_eq!(s.count_s + s.count_t_minus_s + s.count_i_minus_t, 7);
        assert_eq!(s.mean_grover_iters, 3.0);
        assert_eq!(s.total.grover_iterations, 21);
    }

    #[test]
    fn infinite_formatting() {
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(0.25), "0.25");
    }
}
