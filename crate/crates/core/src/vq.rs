//! Classical VQ primitives: feature vectors, the Euclidean metric, codebooks
//! and the exhaustive nearest-codevector search used as the reference encoder.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A point in `R^k`, `k >= 1`, with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidVector("dimension must be at least 1".into()));
        }
        if let Some(pos) = components.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidVector(format!(
                "component {pos} is not finite ({})",
                components[pos]
            )));
        }
        Ok(Self(components))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Euclidean distance on raw slices of equal length.
///
/// Every distance in the crate goes through here, so two call sites that
/// compare the same pair always see bit-identical values.
#[inline]
pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance between two vectors of equal dimension.
pub fn distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    check_dim(b.dim(), a.dim())?;
    Ok(euclid(a.as_slice(), b.as_slice()))
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Minimum distance over all unordered pairs of distinct positions.
///
/// Returns `0.0` when two entries coincide; [`Codebook::new`] rejects that.
pub fn compute_delta0(codevectors: &[FeatureVector]) -> Result<f64> {
    if codevectors.len() < 2 {
        return Err(Error::InvalidCodebook(format!(
            "need at least 2 codevectors, got {}",
            codevectors.len()
        )));
    }
    let k = codevectors[0].dim();
    for c in codevectors {
        check_dim(k, c.dim())?;
    }
    let mut best = f64::INFINITY;
    for (i, a) in codevectors.iter().enumerate() {
        for b in &codevectors[i + 1..] {
            best = best.min(euclid(a.as_slice(), b.as_slice()));
        }
    }
    Ok(best)
}

/// Ordered set of `N >= 2` distinct codevectors of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    codevectors: Vec<FeatureVector>,
    delta0: f64,
}

impl Codebook {
    pub fn new(codevectors: Vec<FeatureVector>) -> Result<Self> {
        let delta0 = compute_delta0(&codevectors)?;
        if delta0 <= 0.0 {
            return Err(Error::InvalidCodebook(
                "duplicate codevectors (minimum pairwise distance is 0)".into(),
            ));
        }
        Ok(Self {
            codevectors,
            delta0,
        })
    }

    /// Builds a codebook from raw rows.
    pub fn from_rows<I, R>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: Into<Vec<f64>>,
    {
        let vectors = rows
            .into_iter()
            .map(|r| FeatureVector::new(r.into()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub fn len(&self) -> usize {
        self.codevectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codevectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.codevectors[0].dim()
    }

    /// Minimum pairwise codevector distance.
    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn get(&self, index: usize) -> Option<&FeatureVector> {
        self.codevectors.get(index)
    }

    pub fn codevectors(&self) -> &[FeatureVector] {
        &self.codevectors
    }

    pub fn iter(&self) -> impl Iterator<Item = &FeatureVector> {
        self.codevectors.iter()
    }

    /// Distance from `x` to codevector `index`. `x` must already be
    /// dimension-checked.
    #[inline]
    pub(crate) fn dist_to(&self, x: &[f64], index: usize) -> f64 {
        euclid(x, self.codevectors[index].as_slice())
    }

    /// Serializes to the `VQCB` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("VQCB 1 {} {}\n", self.dim(), self.len());
        for c in &self.codevectors {
            let mut first = true;
            for v in c.as_slice() {
                if !first {
                    out.push(' ');
                }
                first = false;
                // `Display` for f64 is the shortest string that parses back
                // to the same value.
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty codebook file".into(),
        })?;
        let fields: Vec<&str> = header.split(' ').collect();
        let (k, n) = match fields.as_slice() {
            ["VQCB", "1", k, n] => (parse_count(k, 1)?, parse_count(n, 1)?),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("expected header `VQCB 1 <k> <N>`, got `{header}`"),
                })
            }
        };
        let mut rows = Vec::with_capacity(n);
        for (idx, line) in lines {
            let lineno = idx + 1;
            if rows.len() == n {
                if line.is_empty() {
                    continue;
                }
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("trailing data after {n} codevectors"),
                });
            }
            let row = line
                .split(' ')
                .map(|s| {
                    s.parse::<f64>().map_err(|e| Error::Parse {
                        line: lineno,
                        msg: format!("bad number `{s}`: {e}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != k {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {k} components, got {}", row.len()),
                });
            }
            rows.push(FeatureVector::new(row)?);
        }
        if rows.len() != n {
            return Err(Error::Parse {
                line: rows.len() + 2,
                msg: format!("expected {n} codevectors, got {}", rows.len()),
            });
        }
        Self::new(rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_count(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|e| Error::Parse {
        line,
        msg: format!("bad count `{s}`: {e}"),
    })
}

/// Exhaustive nearest-codevector search.
///
/// Evaluates exactly `N` distances and returns `(index, distance)` of the
/// closest codevector, preferring the smallest index on ties.
pub fn full_search(x: &FeatureVector, codebook: &Codebook) -> Result<(usize, f64)> {
    check_dim(codebook.dim(), x.dim())?;
    Ok(nearest_in(x.as_slice(), codebook, 0..codebook.len()))
}

/// Argmin over `candidates` (visited in the given order; strict `<` keeps
/// the first minimum).
pub(crate) fn nearest_in(
    x: &[f64],
    codebook: &Codebook,
    candidates: impl IntoIterator<Item = usize>,
) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for i in candidates {
        let d = codebook.dist_to(x, i);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&fv(&[0.0, 0.0]), &fv(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(
            distance(&fv(&[1.0, 2.0, 3.0]), &fv(&[1.0, 2.0, 3.0])).unwrap(),
            0.0
        );
        assert_eq!(distance(&fv(&[0.0]), &fv(&[10.0])).unwrap(), 10.0);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let err = distance(&fv(&[0.0]), &fv(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn vector_rejects_empty_and_nonfinite() {
        assert!(FeatureVector::new(vec![]).is_err());
        assert!(FeatureVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(FeatureVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn delta0_examples() {
        let c = [fv(&[0.0, 0.0]), fv(&[3.0, 4.0]), fv(&[6.0, 8.0])];
        assert_eq!(compute_delta0(&c).unwrap(), 5.0);
        assert_eq!(compute_delta0(&[fv(&[0.0]), fv(&[10.0])]).unwrap(), 10.0);

        let dup = vec![fv(&[1.0, 1.0]), fv(&[1.0, 1.0])];
        assert_eq!(compute_delta0(&dup).unwrap(), 0.0);
        assert!(matches!(
            Codebook::new(dup),
            Err(Error::InvalidCodebook(_))
        ));
    }

    #[test]
    fn delta0_needs_two() {
        assert!(compute_delta0(&[fv(&[1.0])]).is_err());
        assert!(Codebook::from_rows([vec![1.0]]).is_err());
    }

    #[test]
    fn codebook_rejects_mixed_dims() {
        assert!(matches!(
            Codebook::from_rows([vec![1.0], vec![1.0, 2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn full_search_exact_match_and_tie() {
        let cb = Codebook::from_rows([vec![0.0, 0.0], vec![5.0, 5.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(full_search(&fv(&[1.0, 1.0]), &cb).unwrap(), (2, 0.0));

        let cb = Codebook::from_rows([vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(full_search(&fv(&[0.5]), &cb).unwrap(), (0, 0.5));
    }

    #[test]
    fn full_search_dimension_mismatch() {
        let cb = Codebook::from_rows([vec![0.0], vec![1.0]]).unwrap();
        assert!(full_search(&fv(&[0.0, 0.0]), &cb).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let cb = Codebook::from_rows([
            vec![0.1, 1.0 / 3.0],
            vec![-2.5e-17, 1e300],
            vec![255.0, 7.0],
        ])
        .unwrap();
        let text = cb.to_text();
        assert!(text.starts_with("VQCB 1 2 3\n"));
        assert_eq!(text.lines().nth(3).unwrap(), "255 7");
        let back = Codebook::from_text(&text).unwrap();
        assert_eq!(back, cb);
    }

    #[test]
    fn text_format_errors() {
        assert!(Codebook::from_text("").is_err());
        assert!(Codebook::from_text("VQCB 2 1 2\n0\n1\n").is_err());
        assert!(Codebook::from_text("VQCB 1 1 2\n0\n").is_err());
        assert!(Codebook::from_text("VQCB 1 1 2\n0\n1\n2\n").is_err());
        assert!(Codebook::from_text("VQCB 1 2 2\n0 1\n1\n").is_err());
        assert!(Codebook::from_text("VQCB 1 1 2\n0\nx\n").is_err());
    }
}
