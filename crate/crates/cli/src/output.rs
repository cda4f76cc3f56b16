//! Result folders, PNG overlays and metadata side files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use log::warn;
use lungct::GrayImage;

use crate::exit::{Context, Failure};

/// Folder name for a patient ID: anything outside `[A-Za-z0-9._-]` becomes `_`.
pub fn sanitize(patient_id: &str) -> String {
    let s: String = patient_id
        .trim()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') { c } else { '_' })
        .collect();
    if s.is_empty() || s.chars().all(|c| c == '.') {
        "unknown".to_string()
    } else {
        s
    }
}

pub fn overlay_name(slice_index: usize) -> String {
    format!("slice_{slice_index:03}.png")
}

/// Creates `<root>/<patient>/`. An existing folder is reused: stale
/// overlays are removed and the report files get overwritten.
pub fn patient_dir(root: &Path, patient_id: &str) -> Result<PathBuf, Failure> {
    let dir = root.join(sanitize(patient_id));
    if dir.exists() {
        warn!("{} already exists; overwriting previous results", dir.display());
        for entry in fs::read_dir(&dir).or_fail(format!("listing {}", dir.display()))? {
            let path = entry.or_fail("reading directory entry")?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("slice_") && name.ends_with(".png") {
                fs::remove_file(&path).or_fail(format!("removing {}", path.display()))?;
            }
        }
    } else {
        fs::create_dir_all(&dir).or_fail(format!("creating {}", dir.display()))?;
    }
    Ok(dir)
}

pub fn write_png(img: &GrayImage, path: &Path) -> Result<(), Failure> {
    let (w, h) = img.dims();
    let buf = image::GrayImage::from_raw(w as u32, h as u32, img.as_slice().to_vec())
        .expect("buffer matches dimensions");
    buf.save(path)
        .map_err(|e| Failure::new(crate::exit::OTHER, anyhow::Error::new(e).context(format!("writing {}", path.display()))))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).or_fail(format!("writing {}", path.display()))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json value serialises") + "\n";
    write_text(path, &text)
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// `model.bin` → `model.bin.meta.json`.
pub fn sidecar(model: &Path) -> PathBuf {
    let mut name = model.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    model.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitize_keeps_safe_characters() {
        assert_eq!(sanitize("LUNG-042"), "LUNG-042");
        assert_eq!(sanitize("a/b c"), "a_b_c");
        assert_eq!(sanitize(".."), "unknown");
        assert_eq!(sanitize(""), "unknown");
        assert_eq!(sanitize("R_0.1"), "R_0.1");
    }

    #[test]
    fn sidecar_appends_suffix() {
        assert_eq!(sidecar(Path::new("out/m.lctm")), PathBuf::from("out/m.lctm.meta.json"));
    }

    #[test]
    fn existing_folder_loses_only_stale_overlays() {
        let root = tempfile::tempdir().unwrap();
        let dir = root.path().join("P1");
        fs::create_dir(&dir).unwrap();
        fs::write(dir.join("slice_007.png"), b"old").unwrap();
        fs::write(dir.join("notes.txt"), b"mine").unwrap();
        let again = patient_dir(root.path(), "P1").unwrap();
        assert_eq!(again, dir);
        assert!(!dir.join("slice_007.png").exists());
        assert!(dir.join("notes.txt").exists());
    }
}
