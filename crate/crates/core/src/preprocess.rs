//! Slice conditioning ahead of segmentation.
//!
//! The chain is fixed: black out the top and bottom bands, push the tumour
//! intensity band up to 210-230 and everything else down to 10-30, draw a
//! dark vertical strip through the image centre, then close and open.

use crate::image::GrayImage;
use crate::morphology::{close, make_disk, open};

/// Value of the central strip, the middle of the 10-30 band.
pub const STRIP_VALUE: u8 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessParams {
    /// Fraction of rows blacked out at the top and again at the bottom. Default 0.20.
    pub blackout_fraction: f64,
    /// Tumour intensity band, inclusive. Defaults 110 and 130.
    pub band_lo: u8,
    pub band_hi: u8,
    /// Central strip width as a fraction of the image width. Default 0.06.
    pub strip_width_fraction: f64,
    /// Disk radii of the cleanup closing and opening. Default 3 each.
    pub cleanup_radius_close: usize,
    pub cleanup_radius_open: usize,
}

impl Default for PreprocessParams {
    fn default() -> Self {
        Self {
            blackout_fraction: 0.20,
            band_lo: 110,
            band_hi: 130,
            strip_width_fraction: 0.06,
            cleanup_radius_close: 3,
            cleanup_radius_open: 3,
        }
    }
}

/// Rows `[0, k)` and `[H - k, H)` with `k = floor(fraction * H)`.
fn band_rows(height: usize, fraction: f64) -> usize {
    assert!((0.0..0.5).contains(&fraction), "blackout fraction must be in [0, 0.5)");
    (fraction * height as f64).floor() as usize
}

pub fn blackout_bands(img: &GrayImage, fraction: f64) -> GrayImage {
    let (w, h) = img.dims();
    let k = band_rows(h, fraction);
    let mut out = img.clone();
    let data = out.as_mut_slice();
    data[..k * w].fill(0);
    data[(h - k) * w..].fill(0);
    out
}

/// In-band values map linearly onto 210-230, all others onto 10-30.
pub fn remap_intensity(img: &GrayImage, band_lo: u8, band_hi: u8) -> GrayImage {
    assert!(band_lo < band_hi, "band_lo must be below band_hi");
    let span = (band_hi - band_lo) as f64;
    let mut lut = [0u8; 256];
    for (v, slot) in lut.iter_mut().enumerate() {
        let v8 = v as u8;
        *slot = if (band_lo..=band_hi).contains(&v8) {
            210 + (20.0 * (v8 - band_lo) as f64 / span).round() as u8
        } else {
            10 + (20.0 * v as f64 / 255.0).round() as u8
        };
    }
    img.map(|v| lut[v as usize])
}

/// Columns `W/2 - floor(w/2) ..= W/2 + floor(w/2)` with `w = floor(width_fraction * W)`.
///
/// Returns `None` when the strip width rounds down to zero.
pub fn strip_columns(width: usize, width_fraction: f64) -> Option<(usize, usize)> {
    let strip = (width_fraction * width as f64).floor() as usize;
    if strip == 0 || width == 0 {
        return None;
    }
    let c = width / 2;
    let half = strip / 2;
    Some((c.saturating_sub(half), (c + half).min(width - 1)))
}

/// Overwrites the central strip with [`STRIP_VALUE`] between the blackout bands.
pub fn apply_central_strip(img: &GrayImage, width_fraction: f64, blackout_fraction: f64) -> GrayImage {
    assert!(
        width_fraction > 0.0 && width_fraction <= 0.3,
        "strip width fraction must be in (0, 0.3]"
    );
    let (w, h) = img.dims();
    let mut out = img.clone();
    let Some((x0, x1)) = strip_columns(w, width_fraction) else {
        return out;
    };
    let k = band_rows(h, blackout_fraction);
    for y in k..h - k {
        for x in x0..=x1 {
            out.set(x, y, STRIP_VALUE);
        }
    }
    out
}

/// Closing with `disk(close_radius)` then opening with `disk(open_radius)`.
pub fn cleanup(img: &GrayImage, close_radius: usize, open_radius: usize) -> GrayImage {
    assert!(close_radius >= 1 && open_radius >= 1, "cleanup radii must be >= 1");
    open(&close(img, &make_disk(close_radius)), &make_disk(open_radius))
}

/// The whole conditioning chain in its fixed order.
pub fn preprocess(img: &GrayImage, p: &PreprocessParams) -> GrayImage {
    let img = blackout_bands(img, p.blackout_fraction);
    let img = remap_intensity(&img, p.band_lo, p.band_hi);
    let img = apply_central_strip(&img, p.strip_width_fraction, p.blackout_fraction);
    cleanup(&img, p.cleanup_radius_close, p.cleanup_radius_open)
}
