//! 8-bit grayscale images and PGM (P2/P5) I/O.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageGray8 {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl ImageGray8 {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> u8) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }
}

struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::Pgm(format!("bad {what}: {e}")))
    }
}

/// Parses a P2 or P5 PGM with maxval 255.
pub fn parse_pgm(data: &[u8]) -> Result<ImageGray8> {
    if data.len() < 2 {
        return Err(Error::Pgm("missing magic number".into()));
    }
    let binary = match &data[..2] {
        b"P5" => true,
        b"P2" => false,
        m => {
            return Err(Error::Pgm(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(m)
            )))
        }
    };
    let mut tok = Tokens { data, pos: 2 };
    let width = tok.number("width")?;
    let height = tok.number("height")?;
    let maxval = tok.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Pgm(format!("only maxval 255 is supported, got {maxval}")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pgm("image dimensions overflow".into()))?;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        match data.get(tok.pos) {
            Some(c) if c.is_ascii_whitespace() => tok.pos += 1,
            _ => return Err(Error::Pgm("missing whitespace after header".into())),
        }
        let raster = &data[tok.pos..];
        if raster.len() < count {
            return Err(Error::Pgm(format!(
                "truncated raster: expected {count} bytes, got {}",
                raster.len()
            )));
        }
        raster[..count].to_vec()
    } else {
        let mut px = Vec::with_capacity(count);
        for _ in 0..count {
            let v = tok
                .number("pixel")
                .map_err(|_| Error::Pgm(format!("truncated raster after {} pixels", px.len())))?;
            if v > 255 {
                return Err(Error::Pgm(format!("pixel value {v} exceeds maxval")));
            }
            px.push(v as u8);
        }
        px
    };
    ImageGray8::new(width, height, pixels).map_err(|e| Error::Pgm(e.to_string()))
}

/// Canonical P5 encoding: `P5\n<w> <h>\n255\n` followed by the raster.
pub fn write_pgm(img: &ImageGray8) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<ImageGray8> {
    parse_pgm(&fs::read(path)?)
}

pub fn save_pgm(img: &ImageGray8, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_pgm(img))?;
    Ok(())
}
