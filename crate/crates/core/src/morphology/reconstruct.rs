use std::collections::VecDeque;

use log::warn;

use super::basic::{dilate, erode};
use super::se::StructuringElement;
use crate::error::Result;
use crate::image::{Connectivity, GrayImage};

/// Grayscale reconstruction by dilation of `marker` under `mask`, 8-connected.
///
/// Marker values above the mask are clamped to it first.
pub fn reconstruct_by_dilation(marker: &GrayImage, mask: &GrayImage) -> Result<GrayImage> {
    reconstruct_by_dilation_with(marker, mask, Connectivity::Eight)
}

/// Reconstruction by dilation with an explicit connectivity.
///
/// Hybrid raster/anti-raster scan followed by FIFO propagation of the pixels
/// that can still grow.
pub fn reconstruct_by_dilation_with(
    marker: &GrayImage,
    mask: &GrayImage,
    conn: Connectivity,
) -> Result<GrayImage> {
    marker.check_same_dims(mask)?;
    let (w, h) = mask.dims();
    let limit = mask.as_slice();
    let mut out = marker.clone();
    let mut clamped = 0usize;
    for (j, &i) in out.as_mut_slice().iter_mut().zip(limit) {
        if *j > i {
            *j = i;
            clamped += 1;
        }
    }
    if clamped > 0 {
        warn!("reconstruction marker exceeded mask at {clamped} pixels; clamped");
    }
    if w == 0 || h == 0 {
        return Ok(out);
    }

    // Causal half-neighbourhood for the forward raster; mirrored for the backward one.
    let causal: &[(isize, isize)] = match conn {
        Connectivity::Four => &[(-1, 0), (0, -1)],
        Connectivity::Eight => &[(-1, 0), (-1, -1), (0, -1), (1, -1)],
    };
    let j = out.as_mut_slice();
    let at = |x: usize, y: usize, dx: isize, dy: isize| -> Option<usize> {
        let nx = x as isize + dx;
        let ny = y as isize + dy;
        (nx >= 0 && ny >= 0 && nx < w as isize && ny < h as isize).then(|| ny as usize * w + nx as usize)
    };

    for y in 0..h {
        for x in 0..w {
            let p = y * w + x;
            let mut v = j[p];
            for &(dx, dy) in causal {
                if let Some(q) = at(x, y, dx, dy) {
                    v = v.max(j[q]);
                }
            }
            j[p] = v.min(limit[p]);
        }
    }

    let mut queue = VecDeque::new();
    for y in (0..h).rev() {
        for x in (0..w).rev() {
            let p = y * w + x;
            let mut v = j[p];
            for &(dx, dy) in causal {
                if let Some(q) = at(x, y, -dx, -dy) {
                    v = v.max(j[q]);
                }
            }
            v = v.min(limit[p]);
            j[p] = v;
            let can_grow = causal.iter().any(|&(dx, dy)| {
                at(x, y, -dx, -dy).is_some_and(|q| j[q] < v && j[q] < limit[q])
            });
            if can_grow {
                queue.push_back(p);
            }
        }
    }

    while let Some(p) = queue.pop_front() {
        let v = j[p];
        for q in conn.neighbors(p, w, h) {
            if j[q] < v && j[q] != limit[q] {
                j[q] = v.min(limit[q]);
                queue.push_back(q);
            }
        }
    }
    Ok(out)
}

/// Reconstruction by erosion, the complement dual of
/// [`reconstruct_by_dilation`]. Expects `marker >= mask`.
pub fn reconstruct_by_erosion(marker: &GrayImage, mask: &GrayImage) -> Result<GrayImage> {
    Ok(reconstruct_by_dilation(&marker.complement(), &mask.complement())?.complement())
}

/// Erosion followed by reconstruction by dilation under the original.
pub fn open_by_reconstruction(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    reconstruct_by_dilation(&erode(img, se), img).expect("erosion keeps dimensions")
}

/// Dilation followed by reconstruction by erosion over the original.
pub fn close_by_reconstruction(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    reconstruct_by_erosion(&dilate(img, se), img).expect("dilation keeps dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphology::{make_disk, open};

    #[test]
    fn marker_equal_to_mask_is_fixpoint() {
        let img = GrayImage::from_fn(6, 5, |x, y| (x * 40 + y * 7) as u8);
        assert_eq!(reconstruct_by_dilation(&img, &img).unwrap(), img);
        assert_eq!(reconstruct_by_erosion(&img, &img).unwrap(), img);
    }

    #[test]
    fn zero_marker_stays_zero() {
        let mask = GrayImage::from_fn(6, 5, |x, y| (x * 40 + y * 7) as u8);
        let zero = GrayImage::new(6, 5);
        assert_eq!(reconstruct_by_dilation(&zero, &mask).unwrap(), zero);
        let full = GrayImage::filled(6, 5, 255);
        assert_eq!(reconstruct_by_erosion(&full, &mask).unwrap(), full);
    }

    #[test]
    fn dimension_mismatch() {
        let a = GrayImage::new(3, 3);
        let b = GrayImage::new(3, 4);
        assert!(matches!(reconstruct_by_dilation(&a, &b), Err(crate::Error::Shape(..))));
        assert!(reconstruct_by_erosion(&a, &b).is_err());
    }

    #[test]
    fn reconstruction_recovers_connected_peak_only() {
        // Two bright squares; the marker touches only the left one.
        let mask = GrayImage::from_fn(12, 5, |x, y| {
            if (1..4).contains(&y) && ((1..4).contains(&x) || (7..10).contains(&x)) { 200 } else { 10 }
        });
        let mut marker = GrayImage::new(12, 5);
        marker.set(2, 2, 200);
        let r = reconstruct_by_dilation(&marker, &mask).unwrap();
        assert_eq!(r.get(1, 1), 200);
        assert_eq!(r.get(8, 2), 10);
        assert_eq!(r.get(0, 0), 10);
    }

    #[test]
    fn opening_by_reconstruction_keeps_large_removes_small() {
        let img = GrayImage::from_fn(60, 40, |x, y| {
            let d1 = (x as i32 - 20).pow(2) + (y as i32 - 20).pow(2);
            let d2 = (x as i32 - 48).pow(2) + (y as i32 - 20).pow(2);
            if d1 <= 12 * 12 { 200 } else if d2 <= 9 { 180 } else { 20 }
        });
        let se = make_disk(4);
        let r = open_by_reconstruction(&img, &se);
        assert_eq!(r.get(20, 20), 200);
        assert_eq!(r.get(20, 8), 200, "edge of large disk preserved exactly");
        assert_eq!(r.get(48, 20), 20, "speck removed");
        let o = open(&img, &se);
        assert!(r.as_slice().iter().zip(o.as_slice()).all(|(a, b)| a >= b));
    }
}
