use serde::Serialize;

use super::bagged::{fit, TrainParams};
use super::rng::Rng;
use super::Sample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

/// Offset separating the shuffle stream from the per-fold model seeds.
const SHUFFLE_STREAM: u64 = 0xC0FF_EE00_D15E_A5E5;

/// k-fold cross-validation.
///
/// Samples are shuffled by a stream derived from `params.seed` and cut into
/// `k` folds whose sizes differ by at most one (larger folds first). Fold
/// `i` is scored by a model trained on the other folds with seed
/// `params.seed + i + 1`.
pub fn cross_validate(samples: &[Sample], k: usize, params: &TrainParams) -> Result<CvReport> {
    let n = samples.len();
    if k < 2 || k > n {
        return Err(Error::FoldTooSmall { samples: n, folds: k });
    }
    let first = samples[0].label;
    if samples.iter().all(|s| s.label == first) {
        return Err(Error::SingleClass(first));
    }
    let mut order: Vec<usize> = (0..n).collect();
    Rng::new(params.seed ^ SHUFFLE_STREAM).shuffle(&mut order);

    let mut fold_accuracies = Vec::with_capacity(k);
    let mut start = 0;
    for fold in 0..k {
        let size = n / k + usize::from(fold < n % k);
        let test = &order[start..start + size];
        let train: Vec<Sample> = order[..start]
            .iter()
            .chain(&order[start + size..])
            .map(|&i| samples[i])
            .collect();
        let fold_params = TrainParams {
            seed: params.seed.wrapping_add(fold as u64 + 1),
            ..*params
        };
        let model = fit(&train, &fold_params)?;
        let correct = test
            .iter()
            .filter(|&&i| model.predict(&samples[i].features).label == samples[i].label)
            .count();
        fold_accuracies.push(correct as f64 / size as f64);
        start += size;
    }
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / k as f64;
    Ok(CvReport {
        fold_accuracies,
        mean_accuracy,
    })
}
