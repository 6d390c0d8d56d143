//! `VQIX` index stream.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! b"VQIX"
//! u32 version (= 1)
//! u32 codebook size N
//! u32 block_w
//! u32 block_h
//! u32 image width
//! u32 image height
//! u16 index × block count, row-major block order
//! ```

use std::fs;
use std::path::Path;

use crate::codec::blocks::BlockGeometry;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"VQIX";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 6 * 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexStream {
    pub codebook_size: u32,
    pub geometry: BlockGeometry,
    pub width: u32,
    pub height: u32,
    pub indices: Vec<u16>,
}

impl IndexStream {
    pub fn new(
        codebook_size: usize,
        geometry: BlockGeometry,
        width: usize,
        height: usize,
        indices: Vec<u16>,
    ) -> Result<Self> {
        if codebook_size > 1 << 16 {
            return Err(Error::IndexStream(format!(
                "codebook size {codebook_size} exceeds 65536"
            )));
        }
        let to_u32 = |v: usize, what: &str| {
            u32::try_from(v).map_err(|_| Error::IndexStream(format!("{what} {v} exceeds u32")))
        };
        let s = Self {
            codebook_size: to_u32(codebook_size, "codebook size")?,
            geometry,
            width: to_u32(width, "width")?,
            height: to_u32(height, "height")?,
            indices,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::IndexStream("zero image dimension".into()));
        }
        if self.geometry.block_w == 0 || self.geometry.block_h == 0 {
            return Err(Error::IndexStream("zero block dimension".into()));
        }
        let want = self
            .geometry
            .block_count(self.width as usize, self.height as usize);
        if self.indices.len() != want {
            return Err(Error::IndexStream(format!(
                "expected {want} indices, got {}",
                self.indices.len()
            )));
        }
        if let Some(&bad) = self
            .indices
            .iter()
            .find(|&&i| u32::from(i) >= self.codebook_size)
        {
            return Err(Error::IndexStream(format!(
                "index {bad} out of range for codebook of {}",
                self.codebook_size
            )));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 2 * self.indices.len());
        out.extend_from_slice(MAGIC);
        for field in [
            VERSION,
            self.codebook_size,
            self.geometry.block_w as u32,
            self.geometry.block_h as u32,
            self.width,
            self.height,
        ] {
            out.extend_from_slice(&field.to_le_bytes());
        }
        for &i in &self.indices {
            out.extend_from_slice(&i.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        if data.len() < HEADER_LEN {
            return Err(Error::IndexStream(format!(
                "header needs {HEADER_LEN} bytes, got {}",
                data.len()
            )));
        }
        if &data[..4] != MAGIC {
            return Err(Error::IndexStream("bad magic".into()));
        }
        let field = |i: usize| {
            let at = 4 + 4 * i;
            u32::from_le_bytes(data[at..at + 4].try_into().unwrap())
        };
        let version = field(0);
        if version != VERSION {
            return Err(Error::IndexStream(format!("unsupported version {version}")));
        }
        let body = &data[HEADER_LEN..];
        if body.len() % 2 != 0 {
            return Err(Error::IndexStream("odd-length index body".into()));
        }
        let s = Self {
            codebook_size: field(1),
            geometry: BlockGeometry {
                block_w: field(2) as usize,
                block_h: field(3) as usize,
            },
            width: field(4),
            height: field(5),
            indices: body
                .chunks_exact(2)
                .map(|c| u16::from_le_bytes([c[0], c[1]]))
                .collect(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }
}
