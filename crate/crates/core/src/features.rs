//! The three region descriptors fed to the classifier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;

pub const FEATURE_NAMES: [&str; 3] = ["size_px", "mean_intensity", "center_distance_px"];

/// Pixel extremities of a region, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x1: usize,
    pub x2: usize,
    pub y1: usize,
    pub y2: usize,
}

impl BoundingBox {
    /// Integer-truncated midpoint of each side.
    pub fn center(&self) -> (usize, usize) {
        ((self.x1 + self.x2) / 2, (self.y1 + self.y2) / 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionFeatures {
    pub size_px: u64,
    pub mean_intensity: f64,
    pub center_distance_px: f64,
    pub center: (usize, usize),
    pub bbox: BoundingBox,
}

impl RegionFeatures {
    /// `(size, mean, distance)` in classifier order.
    pub fn vector(&self) -> [f64; 3] {
        [self.size_px as f64, self.mean_intensity, self.center_distance_px]
    }
}

/// Number of pixels with a non-zero value.
pub fn region_size(region: &GrayImage) -> u64 {
    region.as_slice().iter().filter(|&&v| v > 0).count() as u64
}

/// Mean of the non-zero pixels.
pub fn mean_intensity(region: &GrayImage) -> Result<f64> {
    let (n, sum) = region
        .as_slice()
        .iter()
        .filter(|&&v| v > 0)
        .fold((0u64, 0u64), |(n, s), &v| (n + 1, s + v as u64));
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    Ok(sum as f64 / n as f64)
}

pub fn bounding_box(region: &GrayImage) -> Result<BoundingBox> {
    let mut bbox: Option<BoundingBox> = None;
    for y in 0..region.height() {
        for (x, &v) in region.row(y).iter().enumerate() {
            if v == 0 {
                continue;
            }
            let b = bbox.get_or_insert(BoundingBox { x1: x, x2: x, y1: y, y2: y });
            b.x1 = b.x1.min(x);
            b.x2 = b.x2.max(x);
            b.y2 = y;
        }
    }
    bbox.ok_or(Error::EmptyRegion)
}

/// Midpoint of the bounding box of the non-zero pixels.
pub fn center_pixel(region: &GrayImage) -> Result<(usize, usize)> {
    Ok(bounding_box(region)?.center())
}

/// Horizontal distance from the vertical line `x = width / 2`.
pub fn center_distance(center: (usize, usize), width: usize) -> f64 {
    (center.0 as f64 - width as f64 / 2.0).abs()
}

pub fn feature_vector(region: &GrayImage) -> Result<RegionFeatures> {
    let bbox = bounding_box(region)?;
    let center = bbox.center();
    Ok(RegionFeatures {
        size_px: region_size(region),
        mean_intensity: mean_intensity(region)?,
        center_distance_px: center_distance(center, region.width()),
        center,
        bbox,
    })
}
