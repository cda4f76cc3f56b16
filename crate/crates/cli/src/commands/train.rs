use lungct::dataset::split_rows;
use lungct::ensemble::{cross_validate, evaluate, save_model, train_bagged, Sample};
use lungct::pipeline::PipelineConfig;
use lungct::Error;
use serde_json::json;

use super::read_feature_csv;
use crate::args::TrainArgs;
use crate::exit::{Context, Failure, DATA};
use crate::output;

pub fn train(args: &TrainArgs, cfg: &PipelineConfig) -> Result<(), Failure> {
    let rows = read_feature_csv(&args.features)?;
    let labelled: Vec<_> = rows.into_iter().filter(|r| r.label >= 0).collect();
    let first = labelled.first().ok_or_else(|| Failure::new(DATA, Error::EmptyTrainingSet))?.label;
    if labelled.iter().all(|r| r.label == first) {
        return Err(Failure::new(DATA, Error::SingleClass(first as u8)));
    }

    let (train_rows, test_rows) =
        split_rows(&labelled, cfg.train_fraction, cfg.split, cfg.train.seed).or_fail("splitting rows")?;
    let samples: Vec<Sample> = train_rows.iter().filter_map(|r| r.sample()).collect();
    let cv = cross_validate(&samples, cfg.cv_folds, &cfg.train)
        .or_exit(DATA, format!("{}-fold cross-validation", cfg.cv_folds))?;
    let model = train_bagged(&samples, &cfg.train).or_exit(DATA, "training")?;
    save_model(&model, &args.model).or_fail(format!("writing {}", args.model.display()))?;

    println!("training rows: {}  held-out rows: {}", train_rows.len(), test_rows.len());
    println!(
        "{}-fold CV mean accuracy: {:.2}%",
        cfg.cv_folds,
        100.0 * cv.mean_accuracy
    );
    let holdout = if test_rows.is_empty() {
        None
    } else {
        let preds: Vec<u8> = test_rows.iter().map(|r| model.predict(&r.features()).label).collect();
        let truth: Vec<u8> = test_rows.iter().map(|r| r.label as u8).collect();
        let m = evaluate(&preds, &truth).or_fail("held-out evaluation")?;
        println!(
            "held-out accuracy {:.2}%  sensitivity {:.2}%  specificity {:.2}%",
            100.0 * m.accuracy,
            100.0 * m.sensitivity,
            100.0 * m.specificity
        );
        Some(m)
    };
    println!("model: {}", args.model.display());

    let meta = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "created_unix": output::unix_now(),
        "features_csv": args.features.display().to_string(),
        "params": model.params(),
        "feature_names": model.meta().feature_names,
        "n_train": train_rows.len(),
        "n_holdout": test_rows.len(),
        "cv_folds": cfg.cv_folds,
        "cv": cv,
        "holdout": holdout,
        "config": cfg.to_text(),
    });
    output::write_json(&output::sidecar(&args.model), &meta)
}
