use crate::image::{BinaryMask, Connectivity, GrayImage};
use crate::morphology::{
    close_by_reconstruction, erode, make_disk, open_by_reconstruction, regional_maxima,
};

/// Radius of the disk that erodes the dark region into background markers.
const BACKGROUND_EROSION_RADIUS: usize = 2;

/// Foreground and background seeds for the watershed. Never overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerSet {
    pub foreground: BinaryMask,
    pub background: BinaryMask,
}

impl MarkerSet {
    pub fn union(&self) -> BinaryMask {
        self.foreground.or(&self.background)
    }
}

/// Opening-by-reconstruction then closing-by-reconstruction with `disk(radius)`.
pub fn marker_surface(pre: &GrayImage, disk_radius: usize) -> GrayImage {
    let se = make_disk(disk_radius);
    close_by_reconstruction(&open_by_reconstruction(pre, &se), &se)
}

/// Otsu threshold `t`: the split `{v < t} / {v >= t}` maximising the
/// between-class variance. The first maximum wins. Images with a single
/// grey level get `max + 1`, so every pixel falls below the threshold.
pub fn otsu_threshold(img: &GrayImage) -> u16 {
    let mut hist = [0u64; 256];
    for &v in img.as_slice() {
        hist[v as usize] += 1;
    }
    let total: u64 = hist.iter().sum();
    let total_sum: f64 = hist.iter().enumerate().map(|(v, &c)| v as f64 * c as f64).sum();
    let mut best: Option<(f64, usize)> = None;
    let (mut w0, mut s0) = (0u64, 0f64);
    for (k, &count) in hist.iter().enumerate().take(255) {
        w0 += count;
        s0 += k as f64 * count as f64;
        let w1 = total - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let m0 = s0 / w0 as f64;
        let m1 = (total_sum - s0) / w1 as f64;
        let between = w0 as f64 * w1 as f64 * (m0 - m1) * (m0 - m1);
        if best.map_or(true, |(b, _)| between > b) {
            best = Some((between, k));
        }
    }
    match best {
        Some((_, k)) => k as u16 + 1,
        None => img.max_value().map_or(0, |m| m as u16 + 1),
    }
}

/// Splits the regional maxima of the flattened surface by its Otsu threshold.
pub fn markers_from_surface(surface: &GrayImage) -> MarkerSet {
    let maxima = regional_maxima(surface, Connectivity::Eight);
    let t = otsu_threshold(surface);
    let bright = BinaryMask::from_image(surface, |v| v as u16 >= t);
    let dark = bright.not();
    let foreground = maxima.and(&bright);
    let dark_core = BinaryMask::from_image(
        &erode(&dark.to_image(), &make_disk(BACKGROUND_EROSION_RADIUS)),
        |v| v > 0,
    );
    let background = maxima.and(&dark).or(&dark_core);
    MarkerSet {
        foreground,
        background,
    }
}

/// Foreground/background markers of a preprocessed slice.
pub fn compute_markers(pre: &GrayImage, disk_radius: usize) -> MarkerSet {
    markers_from_surface(&marker_surface(pre, disk_radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs(centres: &[(i32, i32, i32)]) -> GrayImage {
        GrayImage::from_fn(120, 80, |x, y| {
            let inside = centres
                .iter()
                .any(|&(cx, cy, r)| (x as i32 - cx).pow(2) + (y as i32 - cy).pow(2) <= r * r);
            if inside { 215 } else { 20 }
        })
    }

    fn components(mask: &BinaryMask) -> usize {
        let (w, h) = mask.dims();
        let mut seen = vec![false; w * h];
        let mut n = 0;
        for s in 0..w * h {
            if !mask.as_slice()[s] || seen[s] {
                continue;
            }
            n += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(p) = stack.pop() {
                for q in Connectivity::Eight.neighbors(p, w, h) {
                    if mask.as_slice()[q] && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        n
    }

    #[test]
    fn otsu_two_levels_and_constant() {
        let img = GrayImage::from_fn(10, 10, |x, _| if x < 5 { 20 } else { 215 });
        assert_eq!(otsu_threshold(&img), 21);
        assert_eq!(otsu_threshold(&GrayImage::filled(4, 4, 20)), 21);
    }

    #[test]
    fn dark_image_has_no_foreground() {
        let m = compute_markers(&GrayImage::filled(40, 30, 20), 8);
        assert!(m.foreground.is_empty());
        assert_eq!(m.background.count(), 40 * 30);
    }

    #[test]
    fn one_blob_one_foreground_component() {
        let img = blobs(&[(60, 40, 20)]);
        let m = compute_markers(&img, 8);
        assert_eq!(components(&m.foreground), 1);
        assert!(m.foreground.get(60, 40));
        assert!(m.foreground.and(&m.background).is_empty());
        for (i, &f) in m.foreground.as_slice().iter().enumerate() {
            if f {
                assert_eq!(img.as_slice()[i], 215, "foreground stays inside the blob");
            }
        }
    }

    #[test]
    fn two_blobs_two_components() {
        let img = blobs(&[(30, 40, 15), (90, 40, 18)]);
        let m = compute_markers(&img, 8);
        assert_eq!(components(&m.foreground), 2);
    }
}
