//! The per-slice chain and the series-level drivers built on it.

mod config;

use std::collections::BTreeSet;

use log::debug;
use rayon::prelude::*;

pub use config::PipelineConfig;

use crate::analytics::{build_report, SeriesReport, SliceDetection};
use crate::dataset::{FeatureRow, UNLABELED};
use crate::ensemble::BaggedModel;
use crate::error::{Error, Result};
use crate::features::{feature_vector, RegionFeatures};
use crate::image::{BinaryMask, GrayImage};
use crate::ingest::CtSeries;
use crate::preprocess::preprocess;
use crate::segment::{candidate_masks, extract_region, marker_surface, markers_from_surface, watershed};

/// A segmented region and its features.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub mask: BinaryMask,
    pub features: RegionFeatures,
}

/// Preprocess, mark, flood and describe the candidate regions of one slice.
///
/// The watershed floods the reconstruction-filtered surface the markers
/// come from. Features are measured on the original slice; candidates with
/// no non-zero original pixel are dropped.
pub fn segment_slice(slice: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<Candidate>> {
    let pre = preprocess(slice, &cfg.preprocess);
    let surface = marker_surface(&pre, cfg.disk_radius);
    let markers = markers_from_surface(&surface);
    if markers.foreground.is_empty() {
        return Ok(Vec::new());
    }
    let labels = watershed(&surface, &markers)?;
    let mut out = Vec::new();
    for mask in candidate_masks(&labels, &markers) {
        let region = extract_region(slice, &mask)?;
        match feature_vector(&region) {
            Ok(features) => out.push(Candidate { mask, features }),
            Err(Error::EmptyRegion) => debug!("candidate covers only zero pixels; dropped"),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Candidates of every slice, in slice order. Slices run in parallel.
pub fn segment_series(series: &CtSeries, cfg: &PipelineConfig) -> Result<Vec<Vec<Candidate>>> {
    series
        .slices
        .par_iter()
        .enumerate()
        .map(|(index, slice)| {
            segment_slice(slice, cfg).map_err(|e| Error::Slice {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Classifies every candidate and aggregates the positives.
pub fn analyze_series(series: &CtSeries, model: &BaggedModel, cfg: &PipelineConfig) -> Result<SeriesReport> {
    let candidates = segment_series(series, cfg)?;
    Ok(classify_candidates(series, candidates, model))
}

/// Report over already segmented candidates, one list per slice.
pub fn classify_candidates(series: &CtSeries, candidates: Vec<Vec<Candidate>>, model: &BaggedModel) -> SeriesReport {
    let mut detections = Vec::new();
    for (index, slice_candidates) in candidates.into_iter().enumerate() {
        for c in slice_candidates {
            let p = model.predict(&c.features.vector());
            if p.label != 1 {
                continue;
            }
            detections.push(SliceDetection {
                slice_index: index,
                instance_number: series.instance_numbers.get(index).copied(),
                area_px: c.features.size_px,
                center: c.features.center,
                confidence: p.confidence,
                features: c.features,
                mask: c.mask,
            });
        }
    }
    build_report(
        &series.patient_id,
        detections,
        series.slice_thickness_mm,
        series.pixel_spacing_mm,
    )
}

/// One CSV row per candidate.
///
/// With `positive_slices`, rows on listed slices get label 1 and all
/// others 0; without it every row is unlabelled.
pub fn extract_features(
    series: &CtSeries,
    positive_slices: Option<&BTreeSet<usize>>,
    cfg: &PipelineConfig,
) -> Result<Vec<FeatureRow>> {
    let candidates = segment_series(series, cfg)?;
    let mut rows = Vec::new();
    for (index, slice_candidates) in candidates.iter().enumerate() {
        let label = match positive_slices {
            Some(set) => i8::from(set.contains(&index)),
            None => UNLABELED,
        };
        for c in slice_candidates {
            rows.push(FeatureRow::new(&series.patient_id, index, &c.features, label));
        }
    }
    Ok(rows)
}

/// Copy of `original` with each mask's boundary drawn at 255.
pub fn overlay<'a>(original: &GrayImage, masks: impl IntoIterator<Item = &'a BinaryMask>) -> GrayImage {
    let mut out = original.clone();
    for mask in masks {
        for (px, &edge) in out.as_mut_slice().iter_mut().zip(mask.boundary().as_slice()) {
            if edge {
                *px = 255;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bright_disk_becomes_a_candidate() {
        let img = GrayImage::from_fn(256, 256, |x, y| {
            let d = (x as i32 - 178).pow(2) + (y as i32 - 128).pow(2);
            if d <= 20 * 20 { 115 } else { 60 }
        });
        let found = segment_slice(&img, &PipelineConfig::default()).unwrap();
        let disk = found
            .iter()
            .find(|c| c.mask.get(178, 128))
            .expect("disk is segmented");
        let f = disk.features;
        assert_eq!(f.center, (178, 128));
        assert_eq!(f.center_distance_px, 50.0);
        assert!((100.0..=115.0).contains(&f.mean_intensity), "{f:?}");
        assert!((1257..1600).contains(&f.size_px), "{f:?}");
    }

    #[test]
    fn overlay_marks_boundary_only() {
        let img = GrayImage::filled(6, 6, 40);
        let mask = BinaryMask::from_fn(6, 6, |x, y| (1..5).contains(&x) && (1..5).contains(&y));
        let out = overlay(&img, [&mask]);
        assert_eq!(out.as_slice().iter().filter(|&&v| v == 255).count(), 12);
        assert_eq!(out.get(2, 2), 40);
        assert_eq!(out.get(0, 0), 40);
    }
}
