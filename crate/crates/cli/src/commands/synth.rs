use std::fs::{self, File};

use lungct::dataset::{format_labels, write_rows};
use lungct::phantom::{feature_corpus, generate_series, write_dicom_series, write_pgm_series, PhantomConfig};
use lungct::pipeline::PipelineConfig;

use crate::args::{CorpusArgs, PhantomArgs};
use crate::exit::{Context, Failure, OTHER};

pub fn phantom(args: &PhantomArgs, cfg: &PipelineConfig) -> Result<(), Failure> {
    if let Some(&bad) = args.tumour_slices.0.iter().find(|&&s| s >= args.slices) {
        return Err(Failure::msg(OTHER, format!("tumour slice {bad} is outside 0..{}", args.slices)));
    }
    let pc = PhantomConfig {
        n_slices: args.slices,
        tumour_slices: args.tumour_slices.0.clone(),
        seed: args.phantom_seed,
        distractors: !args.no_distractors,
        patient_id: args.patient_id.clone(),
        ..PhantomConfig::default()
    };
    let ph = generate_series(&pc);
    if args.pgm {
        write_pgm_series(&ph.series, &args.dir).or_fail("writing PGM slices")?;
    } else {
        write_dicom_series(&ph.series, &args.dir, cfg.window).or_fail("writing DICOM slices")?;
    }
    let slices = ph.tumour_slices();
    if let Some(path) = &args.labels_out {
        let labels = [(ph.series.patient_id.clone(), slices.iter().copied().collect())].into();
        fs::write(path, format_labels(&labels)).or_fail(format!("writing {}", path.display()))?;
    }
    println!("{}: {} slices in {}", ph.series.patient_id, ph.series.len(), args.dir.display());
    for t in &ph.tumours {
        println!(
            "  tumour slice {:>3}  centre ({}, {})  radius {}  value {}",
            t.slice_index, t.center.0, t.center.1, t.radius, t.value
        );
    }
    Ok(())
}

pub fn corpus(args: &CorpusArgs) -> Result<(), Failure> {
    let rows = feature_corpus(args.rows, args.corpus_seed);
    let file = File::create(&args.output).or_fail(format!("creating {}", args.output.display()))?;
    write_rows(file, &rows).or_fail(format!("writing {}", args.output.display()))?;
    println!("{} rows written to {}", rows.len(), args.output.display());
    Ok(())
}
