use super::markers::MarkerSet;
use super::watershed::{LabelGrid, RIDGE};
use crate::error::{Error, Result};
use crate::image::{BinaryMask, Connectivity, GrayImage};

/// One mask per basin seeded by foreground markers alone.
///
/// A mask holds its basin plus the ridge pixels 4-adjacent to it. A ridge
/// pixel bordering several candidate basins goes to the lowest label, so
/// the masks are pairwise disjoint. Masks come out in label order.
pub fn candidate_masks(labels: &LabelGrid, markers: &MarkerSet) -> Vec<BinaryMask> {
    let (w, h) = labels.dims();
    let n = labels.basin_count() as usize;
    let mut has_fg = vec![false; n + 1];
    let mut has_bg = vec![false; n + 1];
    let l = labels.as_slice();
    for (p, &lab) in l.iter().enumerate() {
        has_fg[lab as usize] |= markers.foreground.as_slice()[p];
        has_bg[lab as usize] |= markers.background.as_slice()[p];
    }
    let is_candidate = |lab: u32| lab != RIDGE && has_fg[lab as usize] && !has_bg[lab as usize];
    let ids: Vec<u32> = (1..=n as u32).filter(|&lab| is_candidate(lab)).collect();
    if ids.is_empty() {
        return Vec::new();
    }
    let mut slot = vec![usize::MAX; n + 1];
    for (i, &lab) in ids.iter().enumerate() {
        slot[lab as usize] = i;
    }

    let mut masks = vec![BinaryMask::new(w, h); ids.len()];
    for (p, &lab) in l.iter().enumerate() {
        if lab != RIDGE {
            if let Some(mask) = masks.get_mut(slot[lab as usize]) {
                mask.as_mut_slice()[p] = true;
            }
            continue;
        }
        let owner = Connectivity::Four
            .neighbors(p, w, h)
            .map(|q| l[q])
            .filter(|&lab| is_candidate(lab))
            .min();
        if let Some(lab) = owner {
            masks[slot[lab as usize]].as_mut_slice()[p] = true;
        }
    }
    masks
}

/// Original pixels inside the mask, zero elsewhere.
pub fn extract_region(original: &GrayImage, mask: &BinaryMask) -> Result<GrayImage> {
    if original.dims() != mask.dims() {
        return Err(Error::Shape(original.dims(), mask.dims()));
    }
    let (w, h) = original.dims();
    let data = original
        .as_slice()
        .iter()
        .zip(mask.as_slice())
        .map(|(&v, &m)| if m { v } else { 0 })
        .collect();
    GrayImage::from_vec(w, h, data)
}
