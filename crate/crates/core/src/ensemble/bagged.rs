use rayon::prelude::*;
use serde::Serialize;

use super::rng::Rng;
use super::tree::{train_tree, DecisionTree, TreeParams};
use super::Sample;
use crate::error::{Error, Result};
use crate::features::FEATURE_NAMES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrainParams {
    pub n_trees: usize,
    pub min_leaf: usize,
    pub max_depth: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        Self {
            n_trees: 30,
            min_leaf: 5,
            max_depth: 12,
            seed: 0,
        }
    }
}

impl TrainParams {
    pub fn tree_params(&self) -> TreeParams {
        TreeParams {
            min_leaf: self.min_leaf,
            max_depth: self.max_depth,
        }
    }
}

/// Facts about the training run stored alongside the trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingMeta {
    pub n_samples: u64,
    pub feature_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaggedModel {
    pub(crate) trees: Vec<DecisionTree>,
    pub(crate) params: TrainParams,
    pub(crate) meta: TrainingMeta,
}

/// Majority-vote outcome of a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: u8,
    /// Fraction of trees voting 1.
    pub confidence: f64,
    pub votes: usize,
}

impl BaggedModel {
    pub fn from_parts(trees: Vec<DecisionTree>, params: TrainParams, meta: TrainingMeta) -> Result<Self> {
        if trees.is_empty() || trees.len() != params.n_trees {
            return Err(Error::ModelFormat(format!(
                "model declares {} trees but holds {}",
                params.n_trees,
                trees.len()
            )));
        }
        Ok(Self { trees, params, meta })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn params(&self) -> &TrainParams {
        &self.params
    }

    pub fn meta(&self) -> &TrainingMeta {
        &self.meta
    }

    /// Label 1 needs a strict majority of trees.
    pub fn predict(&self, x: &[f64; 3]) -> Prediction {
        let votes = self.trees.iter().filter(|t| t.predict(x) == 1).count();
        let n = self.trees.len();
        Prediction {
            label: u8::from(2 * votes > n),
            confidence: votes as f64 / n as f64,
            votes,
        }
    }
}

/// Trains `n_trees` trees on bootstrap resamples drawn from one seeded stream.
///
/// All resamples are drawn up front in tree order, so the model does not
/// depend on how the trees are later scheduled across threads.
pub fn train_bagged(samples: &[Sample], params: &TrainParams) -> Result<BaggedModel> {
    let first = samples.first().ok_or(Error::EmptyTrainingSet)?;
    if samples.iter().all(|s| s.label == first.label) {
        return Err(Error::SingleClass(first.label));
    }
    fit(samples, params)
}

/// [`train_bagged`] without the two-class check; cross-validation folds may
/// legitimately be single-class.
pub(crate) fn fit(samples: &[Sample], params: &TrainParams) -> Result<BaggedModel> {
    if samples.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if params.n_trees == 0 {
        return Err(Error::Config("n_trees must be at least 1".into()));
    }
    let n = samples.len();
    let mut rng = Rng::new(params.seed);
    let resamples: Vec<Vec<Sample>> = (0..params.n_trees)
        .map(|_| (0..n).map(|_| samples[rng.below(n)]).collect())
        .collect();
    let tree_params = params.tree_params();
    let trees = resamples
        .par_iter()
        .map(|bag| train_tree(bag, &tree_params))
        .collect::<Result<Vec<_>>>()?;
    Ok(BaggedModel {
        trees,
        params: *params,
        meta: TrainingMeta {
            n_samples: n as u64,
            feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        },
    })
}
