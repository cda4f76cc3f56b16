//! Marker-controlled watershed segmentation of preprocessed slices.
//!
//! [`compute_markers`] flattens the slice with opening- and
//! closing-by-reconstruction, takes its regional maxima and splits them into
//! foreground (at or above the Otsu threshold) and background markers.
//! [`watershed`] floods the marker-imposed image; [`candidate_masks`] keeps
//! the basins grown from foreground markers only.

mod candidates;
mod markers;
mod watershed;

pub use candidates::{candidate_masks, extract_region};
pub use markers::{compute_markers, marker_surface, markers_from_surface, otsu_threshold, MarkerSet};
pub use watershed::{watershed, LabelGrid, RIDGE};
