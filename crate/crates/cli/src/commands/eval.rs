use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use log::warn;
use lungct::ensemble::{evaluate, load_model, Metrics};
use lungct::pipeline::PipelineConfig;

use super::read_feature_csv;
use crate::args::EvalArgs;
use crate::exit::{Context, Failure, DATA, MODEL, OTHER};

type SliceKey = (String, usize);

pub fn eval(args: &EvalArgs, _cfg: &PipelineConfig) -> Result<(), Failure> {
    let metrics = match (&args.predictions, &args.labels, &args.model, &args.features) {
        (Some(pred), Some(labels), None, None) => eval_joined(pred, labels)?,
        (None, None, Some(model), Some(features)) => eval_model(model, features, args.write_predictions.as_deref())?,
        _ => {
            return Err(Failure::msg(
                OTHER,
                "give either --predictions with --labels, or --model with --features",
            ))
        }
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&metrics).expect("metrics serialise"));
    } else {
        let c = metrics.confusion;
        println!("TP {}  FN {}  FP {}  TN {}", c.tp, c.fn_, c.fp, c.tn);
        println!("accuracy    {:.2}%", 100.0 * metrics.accuracy);
        println!("sensitivity {:.2}%", 100.0 * metrics.sensitivity);
        println!("specificity {:.2}%", 100.0 * metrics.specificity);
    }
    Ok(())
}

/// Reads `patient_id`, `slice_index` and `column` by header name and folds
/// rows to slice level: a slice is 1 if any of its rows is 1. Rows whose
/// value is -1 are skipped.
fn slice_values(path: &Path, column: &str) -> Result<BTreeMap<SliceKey, u8>, Failure> {
    let bad = |msg: String| Failure::msg(DATA, format!("{}: {msg}", path.display()));
    let file = File::open(path).or_exit(DATA, format!("opening {}", path.display()))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (pid, slice, value) = (col("patient_id")?, col("slice_index")?, col(column)?);
    let mut out = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| bad(e.to_string()))?;
        let index: usize = record[slice]
            .trim()
            .parse()
            .map_err(|_| bad(format!("line {line}: bad slice_index {:?}", &record[slice])))?;
        let v: i64 = record[value]
            .trim()
            .parse()
            .map_err(|_| bad(format!("line {line}: bad {column} {:?}", &record[value])))?;
        let v = match v {
            -1 => continue,
            0 | 1 => v as u8,
            _ => return Err(bad(format!("line {line}: {column} must be -1, 0 or 1"))),
        };
        let slot = out.entry((record[pid].trim().to_string(), index)).or_insert(0);
        *slot = (*slot).max(v);
    }
    Ok(out)
}

fn eval_joined(pred_path: &Path, label_path: &Path) -> Result<Metrics, Failure> {
    let preds = slice_values(pred_path, "prediction")?;
    let labels = slice_values(label_path, "label")?;
    let mut p = Vec::new();
    let mut t = Vec::new();
    for (key, &label) in &labels {
        if let Some(&pred) = preds.get(key) {
            p.push(pred);
            t.push(label);
        }
    }
    let unmatched = preds.len() - p.len();
    if unmatched > 0 {
        warn!("{unmatched} predicted slices have no label and were ignored");
    }
    if labels.len() > p.len() {
        warn!("{} labelled slices have no prediction and were ignored", labels.len() - p.len());
    }
    evaluate(&p, &t).or_exit(DATA, "evaluation")
}

fn eval_model(model_path: &Path, features: &Path, write: Option<&Path>) -> Result<Metrics, Failure> {
    let model = load_model(model_path).or_exit(MODEL, format!("loading model {}", model_path.display()))?;
    let rows = read_feature_csv(features)?;
    let labelled: Vec<_> = rows.iter().filter(|r| r.label >= 0).collect();
    let preds: Vec<u8> = labelled.iter().map(|r| model.predict(&r.features()).label).collect();
    let truth: Vec<u8> = labelled.iter().map(|r| r.label as u8).collect();
    if let Some(path) = write {
        let file = File::create(path).or_fail(format!("creating {}", path.display()))?;
        let mut w = csv::Writer::from_writer(file);
        let io_fail = |e: csv::Error| Failure::new(OTHER, anyhow::Error::new(e).context(format!("writing {}", path.display())));
        w.write_record(["patient_id", "slice_index", "prediction", "confidence"]).map_err(io_fail)?;
        for r in &rows {
            let p = model.predict(&r.features());
            w.write_record([
                r.patient_id.clone(),
                r.slice_index.to_string(),
                p.label.to_string(),
                p.confidence.to_string(),
            ])
            .map_err(io_fail)?;
        }
        w.flush().or_fail(format!("writing {}", path.display()))?;
    }
    evaluate(&preds, &truth).or_exit(DATA, "evaluation")
}
