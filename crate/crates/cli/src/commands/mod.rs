mod analyze;
mod eval;
mod extract;
mod synth;
mod train;

pub use analyze::analyze;
pub use eval::eval;
pub use extract::extract_features;
pub use synth::{corpus, phantom};
pub use train::train;

use std::fs::File;
use std::path::Path;

use lungct::dataset::{read_rows, FeatureRow};

use crate::exit::{Context, Failure, DATA};

/// Any failure reading a features CSV, including a missing file, is a data error.
fn read_feature_csv(path: &Path) -> Result<Vec<FeatureRow>, Failure> {
    let file = File::open(path).or_exit(DATA, format!("opening {}", path.display()))?;
    read_rows(file).or_exit(DATA, format!("reading {}", path.display()))
}
