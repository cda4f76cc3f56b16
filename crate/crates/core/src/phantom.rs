//! Synthetic chest series and feature corpora with known ground truth.
//!
//! Slices are drawn directly in the 8-bit windowed domain: air 0, soft
//! tissue around 140, lung parenchyma around 60. Tumours are uniform disks
//! inside a lung whose grey level lies in the tumour band. Distractors
//! cover the other in-band structures a real slice shows: a trachea ring
//! at the midline, small vessel cross-sections and pleural plaques near
//! the chest wall.

use std::fs;
use std::path::Path;

use crate::dataset::FeatureRow;
use crate::ensemble::Rng;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::ingest::dicom::{encode_dicom, CtFields, DicomObject, TransferSyntax};
use crate::ingest::pgm::encode_pgm;
use crate::ingest::{CtSeries, Window};

const TISSUE: f64 = 140.0;
const LUNG: f64 = 60.0;
const LUNG_OFFSET: f64 = 110.0;
const LUNG_AXES: (f64, f64) = (80.0, 150.0);
const BODY_AXES: (f64, f64) = (235.0, 200.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PhantomConfig {
    pub width: usize,
    pub height: usize,
    pub n_slices: usize,
    /// Slices carrying the tumour, 0-based.
    pub tumour_slices: Vec<usize>,
    pub seed: u64,
    pub distractors: bool,
    pub patient_id: String,
    pub slice_thickness_mm: f64,
    pub pixel_spacing_mm: (f64, f64),
}

impl Default for PhantomConfig {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            n_slices: 80,
            tumour_slices: (30..35).collect(),
            seed: 1,
            distractors: true,
            patient_id: "PHANTOM-0001".into(),
            slice_thickness_mm: 5.0,
            pixel_spacing_mm: (0.7, 0.7),
        }
    }
}

/// A disk drawn into one slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedDisk {
    pub slice_index: usize,
    pub center: (usize, usize),
    pub radius: usize,
    pub value: u8,
}

impl PlantedDisk {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let dx = x as i64 - self.center.0 as i64;
        let dy = y as i64 - self.center.1 as i64;
        dx * dx + dy * dy <= (self.radius * self.radius) as i64
    }

    /// Exact lattice pixel count.
    pub fn area(&self) -> usize {
        let r = self.radius as i64;
        (-r..=r)
            .map(|dy| {
                let mut half = 0;
                while (half + 1) * (half + 1) + dy * dy <= r * r {
                    half += 1;
                }
                (2 * half + 1) as usize
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct Phantom {
    pub series: CtSeries,
    pub tumours: Vec<PlantedDisk>,
}

impl Phantom {
    pub fn tumour_slices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.tumours.iter().map(|t| t.slice_index).collect();
        v.dedup();
        v
    }
}

fn in_ellipse(x: f64, y: f64, c: (f64, f64), axes: (f64, f64)) -> bool {
    let dx = (x - c.0) / axes.0;
    let dy = (y - c.1) / axes.1;
    dx * dx + dy * dy <= 1.0
}

fn range(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.unit()
}

fn pick(rng: &mut Rng, lo: usize, hi: usize) -> usize {
    lo + rng.below(hi - lo + 1)
}

fn stamp(img: &mut GrayImage, d: &PlantedDisk) {
    let (w, h) = img.dims();
    let r = d.radius;
    for y in d.center.1.saturating_sub(r)..(d.center.1 + r + 1).min(h) {
        for x in d.center.0.saturating_sub(r)..(d.center.0 + r + 1).min(w) {
            if d.contains(x, y) {
                img.set(x, y, d.value);
            }
        }
    }
}

fn clear_of(p: (f64, f64), r: f64, taken: &[(f64, f64, f64)], gap: f64) -> bool {
    taken
        .iter()
        .all(|&(x, y, rr)| ((p.0 - x).powi(2) + (p.1 - y).powi(2)).sqrt() > r + rr + gap)
}

/// Chest phantom with a spherical tumour across `tumour_slices`.
///
/// The tumour centre sits 85-105 px from the midline in a randomly chosen
/// lung; its cross-section radius stays within 20-30 px and its grey level
/// within 110-120.
pub fn generate_series(cfg: &PhantomConfig) -> Phantom {
    let (w, h) = (cfg.width, cfg.height);
    let mut rng = Rng::new(cfg.seed);
    let cx = w as f64 / 2.0;
    let cy = h as f64 / 2.0;
    let scale = w as f64 / 512.0;

    let side = if rng.below(2) == 0 { -1.0 } else { 1.0 };
    let t_offset = range(&mut rng, 85.0, 105.0) * scale;
    let t_center = (
        (cx + side * t_offset).round(),
        (cy + range(&mut rng, -60.0, 60.0) * scale).round(),
    );
    let r_max = range(&mut rng, 26.0, 30.0);
    let mid = match (cfg.tumour_slices.first(), cfg.tumour_slices.last()) {
        (Some(&a), Some(&b)) => (a + b) as f64 / 2.0,
        _ => 0.0,
    };
    let half_span = cfg.tumour_slices.len() as f64 / 2.0 + 0.5;

    let mut slices = Vec::with_capacity(cfg.n_slices);
    let mut tumours = Vec::new();
    for z in 0..cfg.n_slices {
        let mut img = GrayImage::from_fn(w, h, |x, y| {
            let (fx, fy) = (x as f64, y as f64);
            if !in_ellipse(fx, fy, (cx, cy), (BODY_AXES.0 * scale, BODY_AXES.1 * scale)) {
                return 0;
            }
            let lung_axes = (LUNG_AXES.0 * scale, LUNG_AXES.1 * scale);
            let in_lung = in_ellipse(fx, fy, (cx - LUNG_OFFSET * scale, cy), lung_axes)
                || in_ellipse(fx, fy, (cx + LUNG_OFFSET * scale, cy), lung_axes);
            let (base, spread) = if in_lung { (LUNG, 10.0) } else { (TISSUE, 2.0) };
            (base + range(&mut rng, -spread, spread)).round() as u8
        });

        let mut taken: Vec<(f64, f64, f64)> = Vec::new();
        if cfg.tumour_slices.contains(&z) {
            let dz = (z as f64 - mid) / half_span;
            let r = (r_max * (1.0 - dz * dz).max(0.0).sqrt()).round().clamp(20.0, 30.0) * scale;
            let disk = PlantedDisk {
                slice_index: z,
                center: (t_center.0 as usize, t_center.1 as usize),
                radius: r.round().max(1.0) as usize,
                value: pick(&mut rng, 110, 120) as u8,
            };
            stamp(&mut img, &disk);
            taken.push((t_center.0, t_center.1, r));
            tumours.push(disk);
        }

        if cfg.distractors {
            draw_trachea(&mut img, scale);
            taken.push((cx, cy, 35.0 * scale));
            for _ in 0..pick(&mut rng, 1, 3) {
                let r = range(&mut rng, 9.0, 13.0) * scale;
                let s = if rng.below(2) == 0 { -1.0 } else { 1.0 };
                let p = (
                    cx + s * range(&mut rng, 60.0, 150.0) * scale,
                    cy + range(&mut rng, -90.0, 90.0) * scale,
                );
                if clear_of(p, r, &taken, 15.0 * scale) {
                    taken.push((p.0, p.1, r));
                    let disk = PlantedDisk {
                        slice_index: z,
                        center: (p.0.round() as usize, p.1.round() as usize),
                        radius: r.round() as usize,
                        value: pick(&mut rng, 110, 130) as u8,
                    };
                    stamp(&mut img, &disk);
                }
            }
            if rng.below(3) == 0 {
                let r = range(&mut rng, 10.0, 18.0) * scale;
                let s = if rng.below(2) == 0 { -1.0 } else { 1.0 };
                let p = (
                    cx + s * range(&mut rng, 160.0, 190.0) * scale,
                    cy + range(&mut rng, -60.0, 60.0) * scale,
                );
                if clear_of(p, r, &taken, 15.0 * scale) {
                    taken.push((p.0, p.1, r));
                    let disk = PlantedDisk {
                        slice_index: z,
                        center: (p.0.round() as usize, p.1.round() as usize),
                        radius: r.round() as usize,
                        value: pick(&mut rng, 112, 128) as u8,
                    };
                    stamp(&mut img, &disk);
                }
            }
        }
        slices.push((z as i64 + 1, img));
    }
    let series = CtSeries::new(
        cfg.patient_id.clone(),
        slices,
        cfg.slice_thickness_mm,
        cfg.pixel_spacing_mm,
    )
    .expect("phantom slices are consistent");
    Phantom { series, tumours }
}

/// In-band annulus around the image centre; the central strip later cuts
/// it into two crescents next to the midline.
fn draw_trachea(img: &mut GrayImage, scale: f64) {
    let (w, h) = img.dims();
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let (inner, outer) = (15.0 * scale, 35.0 * scale);
    for y in 0..h {
        for x in 0..w {
            let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
            if d >= inner && d <= outer {
                img.set(x, y, 122);
            }
        }
    }
}

/// Hounsfield value that `window` maps back onto `v`.
pub fn hu_for(v: u8, window: Window) -> i32 {
    let lo = window.center - window.width / 2.0;
    (lo + v as f64 * window.width / 255.0).round() as i32
}

/// Writes `slice_NNNN.dcm` files (explicit VR, 16-bit, intercept -1024).
pub fn write_dicom_series(series: &CtSeries, dir: &Path, window: Window) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (img, &instance) in series.slices.iter().zip(&series.instance_numbers) {
        let obj = DicomObject::from_fields(CtFields {
            patient_id: series.patient_id.clone(),
            instance_number: instance,
            rows: img.height(),
            cols: img.width(),
            bits_allocated: 16,
            pixel_representation: 0,
            rescale_slope: 1.0,
            rescale_intercept: -1024.0,
            slice_thickness_mm: series.slice_thickness_mm,
            pixel_spacing_mm: series.pixel_spacing_mm,
            pixel_data: img
                .as_slice()
                .iter()
                .map(|&v| (hu_for(v, window) + 1024).max(0))
                .collect(),
        });
        let path = dir.join(format!("slice_{instance:04}.dcm"));
        fs::write(&path, encode_dicom(&obj, TransferSyntax::ExplicitVrLittleEndian))
            .map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Writes `slice_NNNN.pgm` files.
pub fn write_pgm_series(series: &CtSeries, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (img, &instance) in series.slices.iter().zip(&series.instance_numbers) {
        let path = dir.join(format!("slice_{instance:04}.pgm"));
        fs::write(&path, encode_pgm(img)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Labelled feature rows, alternating positive and negative.
///
/// Positives: size 1000-5000 px, mean 100-120, distance 80-110 px.
/// Negatives rotate through five kinds of non-tumour region: too small,
/// near the midline, near the chest wall, very large, and off-band mean.
/// Rows are grouped ten to a synthetic patient.
pub fn feature_corpus(n: usize, seed: u64) -> Vec<FeatureRow> {
    let mut rng = Rng::new(seed);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let positive = i % 2 == 0;
        let [size, mean, dist] = if positive {
            [
                range(&mut rng, 1000.0, 5000.0),
                range(&mut rng, 100.0, 120.0),
                range(&mut rng, 80.0, 110.0),
            ]
        } else {
            match (i / 2) % 5 {
                0 => [
                    range(&mut rng, 100.0, 900.0),
                    range(&mut rng, 95.0, 130.0),
                    range(&mut rng, 40.0, 200.0),
                ],
                1 => [
                    range(&mut rng, 300.0, 5000.0),
                    range(&mut rng, 95.0, 130.0),
                    range(&mut rng, 0.0, 60.0),
                ],
                2 => [
                    range(&mut rng, 300.0, 5000.0),
                    range(&mut rng, 95.0, 130.0),
                    range(&mut rng, 125.0, 250.0),
                ],
                3 => [
                    range(&mut rng, 6000.0, 60000.0),
                    range(&mut rng, 20.0, 200.0),
                    range(&mut rng, 0.0, 250.0),
                ],
                _ => {
                    let mean = if rng.below(2) == 0 {
                        range(&mut rng, 20.0, 95.0)
                    } else {
                        range(&mut rng, 125.0, 220.0)
                    };
                    [range(&mut rng, 300.0, 8000.0), mean, range(&mut rng, 0.0, 250.0)]
                }
            }
        };
        rows.push(FeatureRow {
            patient_id: format!("SYN-{:04}", i / 10),
            slice_index: i % 10,
            size_px: size.round() as u64,
            mean_intensity: mean,
            center_distance_px: dist,
            label: i8::from(positive),
        });
    }
    rows
}
