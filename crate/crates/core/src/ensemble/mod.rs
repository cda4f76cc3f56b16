//! Bagged decision trees over the three region features.
//!
//! Every tree sees a bootstrap resample of the training set and all three
//! features. Prediction is a plain majority vote, ties going to 0, and the
//! fraction of trees voting 1 is reported as the confidence.

mod bagged;
mod cv;
mod metrics;
mod persist;
mod rng;
mod tree;

pub use bagged::{train_bagged, BaggedModel, Prediction, TrainParams, TrainingMeta};
pub use cv::{cross_validate, CvReport};
pub use metrics::{evaluate, Confusion, Metrics};
pub use persist::{decode_model, encode_model, load_model, save_model, MODEL_MAGIC, MODEL_VERSION};
pub use rng::Rng;
pub use tree::{train_tree, DecisionTree, Node, TreeParams};

/// One labelled feature vector: `(size_px, mean_intensity, center_distance_px)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub features: [f64; 3],
    pub label: u8,
}

impl Sample {
    pub fn new(features: [f64; 3], label: u8) -> Self {
        assert!(label <= 1, "labels are 0 or 1");
        Self { features, label }
    }
}
