use std::fs::{self, File};
use std::io::{self, Write};

use log::{info, warn};
use lungct::dataset::{parse_labels, write_rows};
use lungct::ingest::load_series;
use lungct::pipeline::{self, PipelineConfig};

use crate::args::ExtractArgs;
use crate::exit::{Context, Failure, DATA, INGEST, OTHER};

pub fn extract_features(args: &ExtractArgs, cfg: &PipelineConfig) -> Result<(), Failure> {
    let labels = match &args.labels {
        Some(path) => {
            let text = fs::read_to_string(path).or_exit(DATA, format!("reading {}", path.display()))?;
            Some(parse_labels(&text).or_exit(DATA, format!("labels file {}", path.display()))?)
        }
        None => None,
    };

    let mut rows = Vec::new();
    for dir in &args.series {
        let series = load_series(dir, &cfg.series_options())
            .or_exit(INGEST, format!("loading series {}", dir.display()))?;
        let positives = labels.as_ref().and_then(|l| {
            let found = l.get(&series.patient_id);
            if found.is_none() {
                warn!("{} is not in the labels file; its rows stay unlabelled", series.patient_id);
            }
            found
        });
        let found = pipeline::extract_features(&series, positives, cfg).or_fail(format!("segmenting {}", dir.display()))?;
        info!("{}: {} candidate rows", series.patient_id, found.len());
        rows.extend(found);
    }

    match &args.output {
        Some(path) => {
            let file = File::create(path).or_fail(format!("creating {}", path.display()))?;
            write_rows(file, &rows).or_exit(OTHER, format!("writing {}", path.display()))
        }
        None => {
            let mut out = io::stdout().lock();
            write_rows(&mut out, &rows).or_exit(OTHER, "writing CSV")?;
            out.flush().or_fail("writing CSV")
        }
    }
}
