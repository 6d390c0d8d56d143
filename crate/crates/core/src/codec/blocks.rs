//! Image ⇄ block-vector conversion.
//!
//! Blocks are visited in row-major block order and each block is flattened
//! row-major. Images whose size is not a multiple of the block are padded by
//! edge replication; [`deblockify`] crops the padding back off.

use crate::codec::pgm::ImageGray8;
use crate::error::{Error, Result};
use crate::vq::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockGeometry {
    pub block_w: usize,
    pub block_h: usize,
}

impl Default for BlockGeometry {
    fn default() -> Self {
        Self {
            block_w: 2,
            block_h: 1,
        }
    }
}

impl BlockGeometry {
    pub fn new(block_w: usize, block_h: usize) -> Result<Self> {
        if block_w == 0 || block_h == 0 {
            return Err(Error::InvalidParameter(format!(
                "block dimensions must be positive, got {block_w}x{block_h}"
            )));
        }
        Ok(Self { block_w, block_h })
    }

    /// Vector dimension `k`.
    pub fn dim(&self) -> usize {
        self.block_w * self.block_h
    }

    /// Number of blocks per row and per column for a `w`×`h` image.
    pub fn grid(&self, w: usize, h: usize) -> (usize, usize) {
        (w.div_ceil(self.block_w), h.div_ceil(self.block_h))
    }

    pub fn block_count(&self, w: usize, h: usize) -> usize {
        let (bx, by) = self.grid(w, h);
        bx * by
    }
}

pub fn blockify(img: &ImageGray8, geom: BlockGeometry) -> Vec<FeatureVector> {
    let (bx, by) = geom.grid(img.width(), img.height());
    let mut out = Vec::with_capacity(bx * by);
    for row in 0..by {
        for col in 0..bx {
            let mut v = Vec::with_capacity(geom.dim());
            for dy in 0..geom.block_h {
                let y = (row * geom.block_h + dy).min(img.height() - 1);
                for dx in 0..geom.block_w {
                    let x = (col * geom.block_w + dx).min(img.width() - 1);
                    v.push(f64::from(img.get(x, y)));
                }
            }
            out.push(FeatureVector::new(v).expect("pixel values are finite"));
        }
    }
    out
}

/// Rounds half away from zero, then clamps to `[0, 255]`.
pub fn to_pixel(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Reassembles a `width`×`height` image from block vectors.
pub fn deblockify<V: AsRef<[f64]>>(
    vectors: &[V],
    geom: BlockGeometry,
    width: usize,
    height: usize,
) -> Result<ImageGray8> {
    let (bx, by) = geom.grid(width, height);
    if vectors.len() != bx * by {
        return Err(Error::InvalidParameter(format!(
            "{width}x{height} image with {}x{} blocks needs {} vectors, got {}",
            geom.block_w,
            geom.block_h,
            bx * by,
            vectors.len()
        )));
    }
    let mut pixels = vec![0u8; width * height];
    for (b, v) in vectors.iter().enumerate() {
        let v = v.as_ref();
        if v.len() != geom.dim() {
            return Err(Error::DimensionMismatch {
                expected: geom.dim(),
                actual: v.len(),
            });
        }
        let (col, row) = (b % bx, b / bx);
        for dy in 0..geom.block_h {
            let y = row * geom.block_h + dy;
            if y >= height {
                break;
            }
            for dx in 0..geom.block_w {
                let x = col * geom.block_w + dx;
                if x < width {
                    pixels[y * width + x] = to_pixel(v[dy * geom.block_w + dx]);
                }
            }
        }
    }
    ImageGray8::new(width, height, pixels)
}
