use std::collections::BTreeMap;
use std::time::Instant;

use log::info;
use lungct::analytics::SliceDetection;
use lungct::ensemble::load_model;
use lungct::ingest::load_series;
use lungct::pipeline::{analyze_series, overlay, PipelineConfig};
use serde_json::json;

use crate::args::AnalyzeArgs;
use crate::exit::{Context, Failure, INGEST, MODEL};
use crate::output;

pub fn analyze(args: &AnalyzeArgs, cfg: &PipelineConfig) -> Result<(), Failure> {
    let started = output::unix_now();
    let clock = Instant::now();
    let model = load_model(&args.model).or_exit(MODEL, format!("loading model {}", args.model.display()))?;
    let series = load_series(&args.series, &cfg.series_options())
        .or_exit(INGEST, format!("loading series {}", args.series.display()))?;
    info!("{}: {} slices of {:?}", series.patient_id, series.len(), series.dims());

    let report = analyze_series(&series, &model, cfg).or_fail("segmentation")?;
    let dir = output::patient_dir(&cfg.output_dir, &report.patient_id)?;

    let mut by_slice: BTreeMap<usize, Vec<&SliceDetection>> = BTreeMap::new();
    for d in &report.positives {
        by_slice.entry(d.slice_index).or_default().push(d);
    }
    for (&index, detections) in &by_slice {
        let img = overlay(&series.slices[index], detections.iter().map(|d| &d.mask));
        output::write_png(&img, &dir.join(output::overlay_name(index)))?;
    }
    output::write_text(&dir.join("report.json"), &report.to_json())?;
    output::write_text(&dir.join("report.txt"), &report.to_text())?;

    // Everything run-specific lives here so report.json stays reproducible.
    let meta = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "started_unix": started,
        "finished_unix": output::unix_now(),
        "elapsed_s": clock.elapsed().as_secs_f64(),
        "series_dir": args.series.display().to_string(),
        "model": args.model.display().to_string(),
        "n_slices": series.len(),
        "threads": rayon::current_num_threads(),
        "config": cfg.to_text(),
    });
    output::write_json(&dir.join("run_meta.json"), &meta)?;

    print!("{}", report.to_text());
    println!("results: {}", dir.display());
    Ok(())
}
