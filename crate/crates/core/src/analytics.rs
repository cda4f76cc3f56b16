//! Per-series tumour report built from positive detections.

use std::fmt::Write as _;

use serde::Serialize;

use crate::features::RegionFeatures;
use crate::image::BinaryMask;

/// One positively classified region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceDetection {
    /// 0-based position in the instance-ordered series.
    pub slice_index: usize,
    pub instance_number: Option<i64>,
    pub area_px: u64,
    pub center: (usize, usize),
    /// Fraction of trees voting tumour.
    pub confidence: f64,
    pub features: RegionFeatures,
    #[serde(skip)]
    pub mask: BinaryMask,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesReport {
    pub patient_id: String,
    pub slice_thickness_mm: f64,
    pub pixel_spacing_mm: (f64, f64),
    pub positives: Vec<SliceDetection>,
    /// Distinct slice indices with at least one detection, ascending.
    pub positive_slices: Vec<usize>,
    pub max_area_px: u64,
    /// Slice of the largest detection; the lowest index wins ties.
    pub max_area_slice: Option<usize>,
    /// Sum of areas times slice thickness, in px·mm.
    pub volume_px_mm: f64,
    /// Sum of areas times pixel area times slice thickness, in mm³.
    pub volume_mm3: f64,
    pub mean_confidence: f64,
}

/// Aggregates detections; several detections on one slice stay separate
/// entries and all count towards the volume.
pub fn build_report(
    patient_id: &str,
    mut detections: Vec<SliceDetection>,
    thickness_mm: f64,
    spacing_mm: (f64, f64),
) -> SeriesReport {
    assert!(thickness_mm > 0.0, "slice thickness must be positive");
    detections.sort_by_key(|d| d.slice_index);
    let mut max_area_px = 0;
    let mut max_area_slice = None;
    for d in &detections {
        if d.area_px > max_area_px {
            max_area_px = d.area_px;
            max_area_slice = Some(d.slice_index);
        }
    }
    let total_area: u64 = detections.iter().map(|d| d.area_px).sum();
    let mut positive_slices: Vec<usize> = detections.iter().map(|d| d.slice_index).collect();
    positive_slices.dedup();
    let mean_confidence = if detections.is_empty() {
        0.0
    } else {
        detections.iter().map(|d| d.confidence).sum::<f64>() / detections.len() as f64
    };
    SeriesReport {
        patient_id: patient_id.to_string(),
        slice_thickness_mm: thickness_mm,
        pixel_spacing_mm: spacing_mm,
        positive_slices,
        max_area_px,
        max_area_slice,
        volume_px_mm: total_area as f64 * thickness_mm,
        volume_mm3: total_area as f64 * spacing_mm.0 * spacing_mm.1 * thickness_mm,
        mean_confidence,
        positives: detections,
    }
}

impl SeriesReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "patient: {}", self.patient_id);
        if self.positives.is_empty() {
            let _ = writeln!(s, "no tumour found");
            return s;
        }
        let _ = writeln!(s, "positive slices: {}", join(&self.positive_slices));
        for d in &self.positives {
            let _ = writeln!(
                s,
                "  slice {:>4}  area {:>6} px  centre ({}, {})  confidence {:.1}%",
                d.slice_index,
                d.area_px,
                d.center.0,
                d.center.1,
                d.confidence * 100.0
            );
        }
        if let Some(slice) = self.max_area_slice {
            let _ = writeln!(s, "max cross-sectional area: {} px on slice {}", self.max_area_px, slice);
        }
        let _ = writeln!(s, "approximate volume: {:.1} px·mm ({:.1} mm³)", self.volume_px_mm, self.volume_mm3);
        let _ = writeln!(s, "mean confidence: {:.1}%", self.mean_confidence * 100.0);
        s
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}
