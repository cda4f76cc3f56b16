//! Automated tumour detection in lung CT series.
//!
//! Each slice runs through a fixed chain:
//!
//! 1. [`ingest`]: DICOM (or PGM) slices are windowed to 8 bits and stacked.
//! 2. [`preprocess`]: band blackout, tumour-band intensity remap, a central
//!    vertical strip, then closing followed by opening.
//! 3. [`segment`]: reconstruction filters with a radius-8 disk, regional
//!    maxima split by an Otsu threshold into foreground/background markers,
//!    then a marker-controlled watershed whose basins become candidate masks.
//! 4. [`features`]: size, mean intensity and horizontal distance of the
//!    region centre from the image's vertical midline.
//! 5. [`ensemble`]: bagged decision trees vote; the vote fraction is the
//!    reported confidence.
//! 6. [`analytics`]: positives are aggregated into a per-series report.
//!
//! [`pipeline`] wires these together; [`phantom`] generates synthetic series
//! and feature corpora for tests and demos. The `book/` directory at the
//! repository root walks through each stage with runnable snippets.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod features;
pub mod image;
pub mod ingest;
pub mod morphology;
pub mod phantom;
pub mod pipeline;
pub mod preprocess;
pub mod segment;

pub use error::{Error, ErrorKind, Result};
pub use image::{BinaryMask, Connectivity, GrayImage};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ingest.md")]
    mod ingest {}
    #[doc = include_str!("../../../book/src/morphology.md")]
    mod morphology {}
    #[doc = include_str!("../../../book/src/preprocess.md")]
    mod preprocess {}
    #[doc = include_str!("../../../book/src/segmentation.md")]
    mod segmentation {}
    #[doc = include_str!("../../../book/src/features.md")]
    mod features {}
    #[doc = include_str!("../../../book/src/ensemble.md")]
    mod ensemble {}
    #[doc = include_str!("../../../book/src/analytics.md")]
    mod analytics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
