use std::collections::BTreeSet;

use lungct::dataset::UNLABELED;
use lungct::ensemble::{train_bagged, Sample, TrainParams};
use lungct::ingest::{load_series, SeriesOptions};
use lungct::phantom::{feature_corpus, generate_series, write_dicom_series, PhantomConfig};
use lungct::pipeline::{analyze_series, extract_features, segment_series, PipelineConfig};

fn model() -> lungct::ensemble::BaggedModel {
    let samples: Vec<Sample> = feature_corpus(500, 2024).iter().filter_map(|r| r.sample()).collect();
    train_bagged(&samples, &TrainParams::default()).unwrap()
}

#[test]
fn tumour_free_series_has_no_positives() {
    let ph = generate_series(&PhantomConfig {
        tumour_slices: vec![],
        seed: 11,
        ..PhantomConfig::default()
    });
    let report = analyze_series(&ph.series, &model(), &PipelineConfig::default()).unwrap();
    assert!(report.positives.is_empty(), "{:?}", report.positive_slices);
    assert_eq!(report.max_area_slice, None);
    assert_eq!(report.volume_mm3, 0.0);
}

#[test]
fn dicom_round_trip_preserves_pixels_and_results() {
    let ph = generate_series(&PhantomConfig {
        n_slices: 6,
        tumour_slices: vec![2, 3],
        seed: 4,
        ..PhantomConfig::default()
    });
    let cfg = PipelineConfig::default();
    let dir = tempfile::tempdir().unwrap();
    write_dicom_series(&ph.series, dir.path(), cfg.window).unwrap();
    let loaded = load_series(dir.path(), &SeriesOptions::default()).unwrap();
    assert_eq!(loaded.slices, ph.series.slices);
    assert_eq!(loaded.patient_id, ph.series.patient_id);
    assert_eq!(loaded.pixel_spacing_mm, ph.series.pixel_spacing_mm);
    assert_eq!(loaded.slice_thickness_mm, ph.series.slice_thickness_mm);

    let report = analyze_series(&loaded, &model(), &cfg).unwrap();
    assert_eq!(report.positive_slices, vec![2, 3]);
}

#[test]
fn features_carry_slice_labels() {
    let ph = generate_series(&PhantomConfig {
        n_slices: 5,
        tumour_slices: vec![1, 2],
        seed: 9,
        ..PhantomConfig::default()
    });
    let cfg = PipelineConfig::default();
    let positives: BTreeSet<usize> = [1, 2].into();
    let rows = extract_features(&ph.series, Some(&positives), &cfg).unwrap();
    let per_slice = segment_series(&ph.series, &cfg).unwrap();
    assert_eq!(rows.len(), per_slice.iter().map(Vec::len).sum::<usize>());
    for r in &rows {
        assert_eq!(r.label, i8::from(positives.contains(&r.slice_index)));
    }
    // every planted slice produced at least one candidate
    let seen: BTreeSet<usize> = rows.iter().filter(|r| r.label == 1).map(|r| r.slice_index).collect();
    assert_eq!(seen, positives);

    let unlabelled = extract_features(&ph.series, None, &cfg).unwrap();
    assert!(unlabelled.iter().all(|r| r.label == UNLABELED));
    assert_eq!(unlabelled.len(), rows.len());
}
