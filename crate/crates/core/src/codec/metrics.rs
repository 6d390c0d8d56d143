use crate::codec::pgm::ImageGray8;
use crate::error::{Error, Result};

/// Mean squared error over all pixels.
pub fn mse(a: &ImageGray8, b: &ImageGray8) -> Result<f64> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::InvalidParameter(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&p, &q)| {
            let d = u64::from(p.abs_diff(q));
            d * d
        })
        .sum();
    Ok(sum as f64 / a.pixels().len() as f64)
}

/// Peak signal-to-noise ratio in dB, `+inf` for identical images.
pub fn psnr(original: &ImageGray8, decoded: &ImageGray8) -> Result<f64> {
    let e = mse(original, decoded)?;
    if e == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / e).log10())
}
