//! Reading CT slices from disk and turning them into 8-bit images.

pub mod dicom;
pub mod pgm;
mod series;

pub use dicom::{encode_dicom, parse_dicom, CtFields, DicomObject, Tag, TransferSyntax};
pub use series::{load_series, CtSeries, SeriesOptions};

use crate::image::GrayImage;

/// Linear HU window given as `(center, width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub center: f64,
    pub width: f64,
}

impl Window {
    pub const fn new(center: f64, width: f64) -> Self {
        Self { center, width }
    }

    /// Maps one HU value to 8 bits. Rounds half away from zero.
    #[inline]
    pub fn apply(&self, hu: f64) -> u8 {
        let lo = self.center - self.width / 2.0;
        (255.0 * (hu - lo) / self.width).round().clamp(0.0, 255.0) as u8
    }
}

impl Default for Window {
    /// Lung/soft-tissue compromise: center -300 HU, width 1400 HU.
    fn default() -> Self {
        Self::new(-300.0, 1400.0)
    }
}

/// Rescales stored values to HU and windows them into an 8-bit image.
///
/// Panics if `window.width` is not positive.
pub fn to_gray8(obj: &DicomObject, window: Window) -> GrayImage {
    assert!(window.width > 0.0, "window width must be positive");
    let data = obj
        .pixel_data
        .iter()
        .map(|&v| window.apply(obj.hounsfield(v)))
        .collect();
    GrayImage::from_vec(obj.cols, obj.rows, data).expect("rows * cols pixels")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_floor_ceiling_and_midpoint() {
        let w = Window::new(-300.0, 1400.0);
        assert_eq!(w.apply(-1000.0), 0);
        assert_eq!(w.apply(400.0), 255);
        assert_eq!(w.apply(-300.0), 128);
        assert_eq!(w.apply(-5000.0), 0);
        assert_eq!(w.apply(5000.0), 255);
    }

    #[test]
    fn to_gray8_applies_rescale() {
        let obj = DicomObject::from_fields(CtFields {
            patient_id: "P".into(),
            instance_number: 1,
            rows: 1,
            cols: 3,
            bits_allocated: 16,
            pixel_representation: 0,
            rescale_slope: 1.0,
            rescale_intercept: -1024.0,
            slice_thickness_mm: 5.0,
            pixel_spacing_mm: (1.0, 1.0),
            pixel_data: vec![24, 724, 1424],
        });
        let img = to_gray8(&obj, Window::default());
        assert_eq!(img.as_slice(), &[0, 128, 255]);
    }

    proptest::proptest! {
        #[test]
        fn window_is_monotone(a in -3000.0f64..3000.0, b in -3000.0f64..3000.0,
                              c in -1000.0f64..1000.0, w in 1.0f64..4000.0) {
            let win = Window::new(c, w);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            proptest::prop_assert!(win.apply(lo) <= win.apply(hi));
        }
    }
}
