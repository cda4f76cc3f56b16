//! Flat grayscale morphology on [`GrayImage`](crate::GrayImage).
//!
//! All neighbourhoods are clipped at the image border: out-of-image pixels
//! never take part in a minimum or maximum. Reconstruction and regional
//! extrema are 8-connected unless a connectivity is passed explicitly.

mod basic;
mod extrema;
mod reconstruct;
mod se;

pub use basic::{close, dilate, erode, open};
pub use extrema::{impose_minima, regional_maxima, regional_minima};
pub use reconstruct::{
    close_by_reconstruction, open_by_reconstruction, reconstruct_by_dilation,
    reconstruct_by_dilation_with, reconstruct_by_erosion,
};
pub use se::{make_disk, StructuringElement};
