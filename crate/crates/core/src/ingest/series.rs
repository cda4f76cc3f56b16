use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;

use super::dicom::{parse_dicom, DEFAULT_SLICE_THICKNESS_MM};
use super::pgm::parse_pgm;
use super::{to_gray8, Window};
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// An ordered stack of 8-bit slices from one patient.
#[derive(Debug, Clone, PartialEq)]
pub struct CtSeries {
    pub patient_id: String,
    pub slices: Vec<GrayImage>,
    /// Instance number of each slice, strictly increasing.
    pub instance_numbers: Vec<i64>,
    pub slice_thickness_mm: f64,
    /// `(row, column)` spacing in millimetres.
    pub pixel_spacing_mm: (f64, f64),
}

impl CtSeries {
    /// Assembles a series from unordered `(instance number, slice)` pairs.
    pub fn new(
        patient_id: impl Into<String>,
        mut slices: Vec<(i64, GrayImage)>,
        slice_thickness_mm: f64,
        pixel_spacing_mm: (f64, f64),
    ) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::EmptySeries(PathBuf::new()));
        }
        if !(slice_thickness_mm > 0.0) {
            return Err(Error::Config(format!(
                "slice thickness must be positive, got {slice_thickness_mm}"
            )));
        }
        slices.sort_by_key(|(n, _)| *n);
        let dims = slices[0].1.dims();
        for pair in slices.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateInstance(pair[0].0));
            }
        }
        if let Some((n, s)) = slices.iter().find(|(_, s)| s.dims() != dims) {
            return Err(Error::SeriesShape {
                expected: dims,
                found: s.dims(),
                path: PathBuf::from(format!("instance {n}")),
            });
        }
        let (instance_numbers, slices) = slices.into_iter().unzip();
        Ok(Self {
            patient_id: patient_id.into(),
            slices,
            instance_numbers,
            slice_thickness_mm,
            pixel_spacing_mm,
        })
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.slices[0].dims()
    }
}

/// How to turn files into slices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub window: Window,
    /// Used for PGM slices, which carry no geometry.
    pub pgm_slice_thickness_mm: f64,
    pub pgm_pixel_spacing_mm: (f64, f64),
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            window: Window::default(),
            pgm_slice_thickness_mm: DEFAULT_SLICE_THICKNESS_MM,
            pgm_pixel_spacing_mm: (1.0, 1.0),
        }
    }
}

struct LoadedSlice {
    path: PathBuf,
    patient_id: String,
    instance: i64,
    thickness: f64,
    spacing: (f64, f64),
    image: GrayImage,
}

/// Reads every DICOM (or PGM) file in `dir` into an ordered series.
///
/// Files that are neither format are skipped with a warning. Metadata comes
/// from the lowest-numbered slice.
pub fn load_series(dir: &Path, opts: &SeriesOptions) -> Result<CtSeries> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();

    let dir_name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());

    let loaded: Vec<Option<LoadedSlice>> = paths
        .par_iter()
        .enumerate()
        .map(|(pos, path)| load_one(path, pos, &dir_name, opts))
        .collect::<Result<_>>()?;
    let mut loaded: Vec<LoadedSlice> = loaded.into_iter().flatten().collect();
    if loaded.is_empty() {
        return Err(Error::EmptySeries(dir.to_path_buf()));
    }

    loaded.sort_by_key(|s| s.instance);
    let first = &loaded[0];
    for s in &loaded[1..] {
        if s.patient_id != first.patient_id {
            return Err(Error::MixedSeries(first.patient_id.clone(), s.patient_id.clone()));
        }
        if s.image.dims() != first.image.dims() {
            return Err(Error::SeriesShape {
                expected: first.image.dims(),
                found: s.image.dims(),
                path: s.path.clone(),
            });
        }
    }
    let patient_id = first.patient_id.clone();
    let thickness = first.thickness;
    let spacing = first.spacing;
    CtSeries::new(
        patient_id,
        loaded.into_iter().map(|s| (s.instance, s.image)).collect(),
        thickness,
        spacing,
    )
}

fn load_one(path: &Path, pos: usize, dir_name: &str, opts: &SeriesOptions) -> Result<Option<LoadedSlice>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() >= 132 && &bytes[128..132] == b"DICM" {
        let obj = parse_dicom(&bytes)?;
        return Ok(Some(LoadedSlice {
            path: path.to_path_buf(),
            patient_id: obj.patient_id.clone(),
            instance: obj.instance_number,
            thickness: obj.slice_thickness_mm,
            spacing: obj.pixel_spacing_mm,
            image: to_gray8(&obj, opts.window),
        }));
    }
    match parse_pgm(&bytes) {
        Ok(image) => Ok(Some(LoadedSlice {
            path: path.to_path_buf(),
            patient_id: dir_name.to_string(),
            instance: trailing_number(path).unwrap_or(pos as i64 + 1),
            thickness: opts.pgm_slice_thickness_mm,
            spacing: opts.pgm_pixel_spacing_mm,
            image,
        })),
        Err(_) => {
            warn!("skipping {}: neither DICOM nor PGM", path.display());
            Ok(None)
        }
    }
}

/// `slice_0042.pgm` -> 42.
fn trailing_number(path: &Path) -> Option<i64> {
    let stem = path.file_stem()?.to_str()?;
    let digits: String = stem
        .chars()
        .rev()
        .take_while(char::is_ascii_digit)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    digits.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_numbers() {
        assert_eq!(trailing_number(Path::new("a/slice_0042.pgm")), Some(42));
        assert_eq!(trailing_number(Path::new("a/slice.pgm")), None);
    }

    #[test]
    fn new_sorts_and_validates() {
        let img = |v| GrayImage::filled(2, 2, v);
        let s = CtSeries::new("P", vec![(3, img(3)), (1, img(1)), (2, img(2))], 5.0, (1.0, 1.0)).unwrap();
        assert_eq!(s.instance_numbers, vec![1, 2, 3]);
        assert_eq!(s.slices[0].get(0, 0), 1);
        assert!(matches!(
            CtSeries::new("P", vec![(1, img(0)), (1, img(0))], 5.0, (1.0, 1.0)),
            Err(Error::DuplicateInstance(1))
        ));
        assert!(matches!(
            CtSeries::new("P", vec![(1, img(0)), (2, GrayImage::new(3, 2))], 5.0, (1.0, 1.0)),
            Err(Error::SeriesShape { .. })
        ));
    }
}
