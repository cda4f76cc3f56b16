use std::collections::VecDeque;

use super::markers::MarkerSet;
use crate::error::{Error, Result};
use crate::image::{Connectivity, GrayImage};
use crate::morphology::impose_minima;

/// Label of watershed-line pixels.
pub const RIDGE: u32 = 0;
const UNLABELED: u32 = u32::MAX;

/// Per-pixel basin labels; [`RIDGE`] marks watershed lines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelGrid {
    width: usize,
    height: usize,
    labels: Vec<u32>,
}

impl LabelGrid {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    /// Highest basin label in use.
    pub fn basin_count(&self) -> u32 {
        self.labels.iter().copied().max().unwrap_or(RIDGE)
    }
}

/// Marker-controlled watershed with 4-connected flooding.
///
/// Each 4-connected component of foreground or background markers seeds
/// its own basin, numbered from 1 in raster order. The image first gets
/// its minima imposed at the markers; pixels then pop from a bucket queue
/// in increasing grey level (FIFO within a level). A popped pixel whose
/// labelled neighbours all agree joins that basin; otherwise it becomes
/// ridge. Pixels sealed off by ridge are ridge too.
pub fn watershed(img: &GrayImage, markers: &MarkerSet) -> Result<LabelGrid> {
    let (w, h) = img.dims();
    let union = markers.union();
    if union.is_empty() {
        return Err(Error::NoMarker);
    }
    let surface = impose_minima(img, &union)?;
    let level_of = surface.as_slice();
    let fg = markers.foreground.as_slice();
    let bg = markers.background.as_slice();
    let conn = Connectivity::Four;

    let mut labels = vec![UNLABELED; w * h];
    let mut next_label = 1u32;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if labels[start] != UNLABELED || !(fg[start] || bg[start]) {
            continue;
        }
        let same_kind = |p: usize| if fg[start] { fg[p] } else { bg[p] };
        labels[start] = next_label;
        stack.push(start);
        while let Some(p) = stack.pop() {
            for q in conn.neighbors(p, w, h) {
                if labels[q] == UNLABELED && same_kind(q) {
                    labels[q] = next_label;
                    stack.push(q);
                }
            }
        }
        next_label += 1;
    }

    let mut buckets: Vec<VecDeque<usize>> = vec![VecDeque::new(); 256];
    let mut queued = vec![false; w * h];
    for p in 0..w * h {
        if labels[p] == UNLABELED {
            continue;
        }
        for q in conn.neighbors(p, w, h) {
            if labels[q] == UNLABELED && !queued[q] {
                queued[q] = true;
                buckets[level_of[q] as usize].push_back(q);
            }
        }
    }

    let mut level = 0usize;
    while level < 256 {
        let Some(p) = buckets[level].pop_front() else {
            level += 1;
            continue;
        };
        let mut seen = UNLABELED;
        let mut conflict = false;
        for q in conn.neighbors(p, w, h) {
            let l = labels[q];
            if l == UNLABELED || l == RIDGE {
                continue;
            }
            if seen == UNLABELED {
                seen = l;
            } else if seen != l {
                conflict = true;
                break;
            }
        }
        if conflict {
            labels[p] = RIDGE;
            continue;
        }
        debug_assert_ne!(seen, UNLABELED, "queued pixels always touch a basin");
        labels[p] = seen;
        for q in conn.neighbors(p, w, h) {
            if labels[q] == UNLABELED && !queued[q] {
                queued[q] = true;
                let prio = (level_of[q] as usize).max(level);
                buckets[prio].push_back(q);
            }
        }
    }

    for l in labels.iter_mut() {
        if *l == UNLABELED {
            *l = RIDGE;
        }
    }
    Ok(LabelGrid {
        width: w,
        height: h,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::BinaryMask;

    #[test]
    fn five_pixel_profile() {
        let img = GrayImage::from_vec(5, 1, vec![3, 1, 3, 1, 3]).unwrap();
        let fg = BinaryMask::from_fn(5, 1, |x, _| x == 1);
        let bg = BinaryMask::from_fn(5, 1, |x, _| x == 3);
        let labels = watershed(&img, &MarkerSet { foreground: fg, background: bg }).unwrap();
        assert_eq!(labels.as_slice(), &[1, 1, 0, 2, 2]);
    }

    #[test]
    fn single_marker_floods_everything() {
        let img = GrayImage::from_fn(9, 7, |x, y| ((x * 31 + y * 17) % 251) as u8);
        let fg = BinaryMask::from_fn(9, 7, |x, y| x == 4 && y == 3);
        let labels = watershed(&img, &MarkerSet { foreground: fg, background: BinaryMask::new(9, 7) }).unwrap();
        assert!(labels.as_slice().iter().all(|&l| l == 1));
    }

    #[test]
    fn no_markers_is_an_error() {
        let img = GrayImage::new(3, 3);
        let none = MarkerSet { foreground: BinaryMask::new(3, 3), background: BinaryMask::new(3, 3) };
        assert!(matches!(watershed(&img, &none), Err(Error::NoMarker)));
    }
}
