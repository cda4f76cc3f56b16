use crate::error::{Error, Result};
use crate::image::{BinaryMask, Connectivity, GrayImage};

use super::reconstruct::reconstruct_by_erosion;

/// Plateaus with no strictly brighter neighbour.
pub fn regional_maxima(img: &GrayImage, conn: Connectivity) -> BinaryMask {
    let (w, h) = img.dims();
    let v = img.as_slice();
    let mut visited = vec![false; v.len()];
    let mut result = BinaryMask::new(w, h);
    let mut plateau = Vec::new();
    let mut stack = Vec::new();
    for start in 0..v.len() {
        if visited[start] {
            continue;
        }
        let level = v[start];
        let mut is_max = true;
        plateau.clear();
        visited[start] = true;
        stack.push(start);
        while let Some(p) = stack.pop() {
            plateau.push(p);
            for q in conn.neighbors(p, w, h) {
                if v[q] > level {
                    is_max = false;
                } else if v[q] == level && !visited[q] {
                    visited[q] = true;
                    stack.push(q);
                }
            }
        }
        if is_max {
            let bits = result.as_mut_slice();
            for &p in &plateau {
                bits[p] = true;
            }
        }
    }
    result
}

/// Plateaus with no strictly darker neighbour.
pub fn regional_minima(img: &GrayImage, conn: Connectivity) -> BinaryMask {
    regional_maxima(&img.complement(), conn)
}

/// Modifies `img` so that its regional minima are exactly the marker pixels.
///
/// Markers are forced to 0 and every other pixel is raised to at least
/// `img + 1` (saturating), then the result is reconstructed by erosion from
/// the marker image so no other minimum survives.
pub fn impose_minima(img: &GrayImage, markers: &BinaryMask) -> Result<GrayImage> {
    if img.dims() != markers.dims() {
        return Err(Error::Shape(img.dims(), markers.dims()));
    }
    if markers.is_empty() {
        return Err(Error::EmptyMarker);
    }
    let (w, h) = img.dims();
    let forced: Vec<u8> = markers.as_slice().iter().map(|&m| if m { 0 } else { 255 }).collect();
    let raised: Vec<u8> = img
        .as_slice()
        .iter()
        .zip(&forced)
        .map(|(&v, &f)| v.saturating_add(1).min(f))
        .collect();
    let forced = GrayImage::from_vec(w, h, forced)?;
    let raised = GrayImage::from_vec(w, h, raised)?;
    reconstruct_by_erosion(&forced, &raised)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_is_one_maximum() {
        let img = GrayImage::filled(4, 3, 17);
        assert_eq!(regional_maxima(&img, Connectivity::Eight).count(), 12);
        assert_eq!(regional_minima(&img, Connectivity::Four).count(), 12);
    }

    #[test]
    fn single_peak() {
        let mut img = GrayImage::new(5, 5);
        img.set(2, 2, 9);
        let m = regional_maxima(&img, Connectivity::Eight);
        assert_eq!(m.count(), 1);
        assert!(m.get(2, 2));
    }

    #[test]
    fn ramp_maximum_is_last_column() {
        let img = GrayImage::from_fn(6, 4, |x, _| x as u8);
        let m = regional_maxima(&img, Connectivity::Eight);
        assert_eq!(m, BinaryMask::from_fn(6, 4, |x, _| x == 5));
    }

    #[test]
    fn connectivity_matters_for_diagonal_plateaus() {
        // Diagonal pair of 5s next to a 6 that touches only one of them in 4-connectivity.
        let img = GrayImage::from_vec(3, 2, vec![5, 0, 0, 0, 5, 6]).unwrap();
        let m8 = regional_maxima(&img, Connectivity::Eight);
        let m4 = regional_maxima(&img, Connectivity::Four);
        assert!(!m8.get(0, 0), "8-connected plateau touches the 6");
        assert!(m4.get(0, 0), "4-connected (0,0) is isolated");
        assert!(m4.get(2, 1) && m8.get(2, 1));
    }

    #[test]
    fn impose_minima_cases() {
        let img = GrayImage::from_fn(5, 5, |x, y| (x * 13 + y * 29) as u8);
        let all = BinaryMask::full(5, 5);
        assert_eq!(impose_minima(&img, &all).unwrap(), GrayImage::new(5, 5));
        assert!(matches!(impose_minima(&img, &BinaryMask::new(5, 5)), Err(Error::EmptyMarker)));

        let flat = GrayImage::filled(5, 5, 50);
        let mut one = BinaryMask::new(5, 5);
        one.set(3, 1, true);
        let out = impose_minima(&flat, &one).unwrap();
        assert_eq!(out.get(3, 1), 0);
        assert!(out.as_slice().iter().enumerate().all(|(i, &v)| i == 8 || v > 0));
        assert_eq!(regional_minima(&out, Connectivity::Eight), one);
    }
}
