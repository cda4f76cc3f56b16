//! Feature CSV rows, the per-patient labels file, and train/test splitting.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::ensemble::{Rng, Sample};
use crate::error::{Error, Result};
use crate::features::RegionFeatures;

pub const CSV_HEADER: [&str; 6] = [
    "patient_id",
    "slice_index",
    "size_px",
    "mean_intensity",
    "center_distance_px",
    "label",
];

/// Label value of rows with no ground truth.
pub const UNLABELED: i8 = -1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub patient_id: String,
    pub slice_index: usize,
    pub size_px: u64,
    pub mean_intensity: f64,
    pub center_distance_px: f64,
    pub label: i8,
}

impl FeatureRow {
    pub fn new(patient_id: &str, slice_index: usize, f: &RegionFeatures, label: i8) -> Self {
        Self {
            patient_id: patient_id.to_string(),
            slice_index,
            size_px: f.size_px,
            mean_intensity: f.mean_intensity,
            center_distance_px: f.center_distance_px,
            label,
        }
    }

    pub fn features(&self) -> [f64; 3] {
        [self.size_px as f64, self.mean_intensity, self.center_distance_px]
    }

    /// `None` for unlabelled rows.
    pub fn sample(&self) -> Option<Sample> {
        (self.label >= 0).then(|| Sample::new(self.features(), self.label as u8))
    }
}

/// Writes the header even when `rows` is empty.
pub fn write_rows<W: Write>(out: W, rows: &[FeatureRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<FeatureRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Row {
            line: 1,
            message: format!("expected header {}, found {}", CSV_HEADER.join(","), header.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.deserialize::<FeatureRow>().enumerate() {
        let line = i + 2;
        let row = rec.map_err(|e| Error::Row { line, message: e.to_string() })?;
        let bad = |message: &str| Err(Error::Row { line, message: message.to_string() });
        if !(-1..=1).contains(&row.label) {
            return bad("label must be -1, 0 or 1");
        }
        if row.size_px == 0 {
            return bad("size_px must be at least 1");
        }
        if !row.mean_intensity.is_finite() || !row.center_distance_px.is_finite() {
            return bad("features must be finite");
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Positive slice indices per patient, parsed from lines `patient_id: i,j,k`.
///
/// Blank lines and lines starting with `#` are ignored. An empty index list
/// marks a patient with no tumour slices.
pub fn parse_labels(text: &str) -> Result<BTreeMap<String, BTreeSet<usize>>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Labels { line, message };
        let (id, list) = trimmed
            .split_once(':')
            .ok_or_else(|| err("expected `patient_id: i,j,k`".into()))?;
        let id = id.trim();
        if id.is_empty() {
            return Err(err("empty patient id".into()));
        }
        let mut slices = BTreeSet::new();
        for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v = tok
                .parse::<usize>()
                .map_err(|_| err(format!("bad slice index {tok:?}")))?;
            slices.insert(v);
        }
        if out.insert(id.to_string(), slices).is_some() {
            return Err(err(format!("patient {id} listed twice")));
        }
    }
    Ok(out)
}

pub fn format_labels(labels: &BTreeMap<String, BTreeSet<usize>>) -> String {
    labels
        .iter()
        .map(|(id, s)| {
            let list: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("{id}: {}\n", list.join(","))
        })
        .collect()
}

/// Granularity of the train/test split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// All rows of a patient land on the same side.
    #[default]
    Patient,
    Slice,
}

impl std::str::FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "patient" => Ok(SplitMode::Patient),
            "slice" => Ok(SplitMode::Slice),
            other => Err(Error::Config(format!("split must be `patient` or `slice`, got {other:?}"))),
        }
    }
}

/// Seeded split with `ceil(fraction * units)` units on the training side.
///
/// Units are patients or rows depending on `mode`. Row order within each
/// side follows the input.
pub fn split_rows(
    rows: &[FeatureRow],
    train_fraction: f64,
    mode: SplitMode,
    seed: u64,
) -> Result<(Vec<FeatureRow>, Vec<FeatureRow>)> {
    if !(train_fraction > 0.0 && train_fraction <= 1.0) {
        return Err(Error::Config(format!("train fraction must be in (0, 1], got {train_fraction}")));
    }
    let mut rng = Rng::new(seed);
    let keep = |units: usize| ((train_fraction * units as f64).ceil() as usize).min(units);
    let in_train: Vec<bool> = match mode {
        SplitMode::Slice => {
            let mut order: Vec<usize> = (0..rows.len()).collect();
            rng.shuffle(&mut order);
            let mut flags = vec![false; rows.len()];
            for &i in &order[..keep(rows.len())] {
                flags[i] = true;
            }
            flags
        }
        SplitMode::Patient => {
            let ids: BTreeSet<&str> = rows.iter().map(|r| r.patient_id.as_str()).collect();
            let mut ids: Vec<&str> = ids.into_iter().collect();
            rng.shuffle(&mut ids);
            let chosen: BTreeSet<&str> = ids[..keep(ids.len())].iter().copied().collect();
            rows.iter().map(|r| chosen.contains(r.patient_id.as_str())).collect()
        }
    };
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (row, flag) in rows.iter().zip(in_train) {
        if flag { train.push(row.clone()) } else { test.push(row.clone()) }
    }
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, slice: usize, label: i8) -> FeatureRow {
        FeatureRow {
            patient_id: id.into(),
            slice_index: slice,
            size_px: 1963,
            mean_intensity: 115.5,
            center_distance_px: 95.0,
            label,
        }
    }

    #[test]
    fn csv_round_trip_and_empty_header() {
        let rows = vec![row("P1", 3, 1), row("P1", 4, -1)];
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        assert_eq!(read_rows(buf.as_slice()).unwrap(), rows);

        let mut empty = Vec::new();
        write_rows(&mut empty, &[]).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim(), CSV_HEADER.join(","));
    }

    #[test]
    fn csv_rejects_bad_rows() {
        let text = "patient_id,slice_index,size_px,mean_intensity,center_distance_px,label\nP,1,10,1.0,2.0,7\n";
        assert!(matches!(read_rows(text.as_bytes()), Err(Error::Row { line: 2, .. })));
        let text = "a,b\n1,2\n";
        assert!(matches!(read_rows(text.as_bytes()), Err(Error::Row { line: 1, .. })));
        let text = "patient_id,slice_index,size_px,mean_intensity,center_distance_px,label\nP,x,10,1.0,2.0,1\n";
        assert!(read_rows(text.as_bytes()).is_err());
    }

    #[test]
    fn labels_file() {
        let parsed = parse_labels("# truth\nP1: 30, 31,32\n\nP2:\n").unwrap();
        assert_eq!(parsed["P1"], BTreeSet::from([30, 31, 32]));
        assert!(parsed["P2"].is_empty());
        assert_eq!(parse_labels(&format_labels(&parsed)).unwrap(), parsed);
        assert!(matches!(parse_labels("P1 30,31"), Err(Error::Labels { line: 1, .. })));
        assert!(matches!(parse_labels("P1: 3\nP1: 4"), Err(Error::Labels { line: 2, .. })));
        assert!(matches!(parse_labels("\nP1: a"), Err(Error::Labels { line: 2, .. })));
    }

    #[test]
    fn patient_split_keeps_patients_together() {
        let rows: Vec<FeatureRow> = (0..50).map(|i| row(&format!("P{}", i % 5), i, (i % 2) as i8)).collect();
        let (train, test) = split_rows(&rows, 0.6, SplitMode::Patient, 4).unwrap();
        assert_eq!(train.len(), 30);
        assert_eq!(test.len(), 20);
        let a: BTreeSet<_> = train.iter().map(|r| &r.patient_id).collect();
        assert!(test.iter().all(|r| !a.contains(&r.patient_id)));
        let (train, test) = split_rows(&rows, 0.6, SplitMode::Slice, 4).unwrap();
        assert_eq!((train.len(), test.len()), (30, 20));
    }
}
