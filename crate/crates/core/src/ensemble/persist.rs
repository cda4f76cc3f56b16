//! Binary model file.
//!
//! All integers little-endian:
//!
//! ```text
//! "LCTM"  u32 version  u32 n_trees  u64 seed  u32 min_leaf  u32 max_depth
//! u64 n_samples  u32 n_features  { u16 len, utf-8 name } * n_features
//! per tree: u32 n_nodes, then per node
//!   u8 0 (leaf)   u32 n0  u32 n1
//!   u8 1 (split)  u8 feature  f64 threshold  u32 left  u32 right
//! ```

use std::fs;
use std::path::Path;

use super::bagged::{BaggedModel, TrainParams, TrainingMeta};
use super::tree::{DecisionTree, Node};
use crate::error::{Error, Result};

pub const MODEL_MAGIC: &[u8; 4] = b"LCTM";
pub const MODEL_VERSION: u32 = 1;

pub fn encode_model(model: &BaggedModel) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MODEL_MAGIC);
    out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
    out.extend_from_slice(&(model.trees.len() as u32).to_le_bytes());
    out.extend_from_slice(&model.params.seed.to_le_bytes());
    out.extend_from_slice(&(model.params.min_leaf as u32).to_le_bytes());
    out.extend_from_slice(&(model.params.max_depth as u32).to_le_bytes());
    out.extend_from_slice(&model.meta.n_samples.to_le_bytes());
    out.extend_from_slice(&(model.meta.feature_names.len() as u32).to_le_bytes());
    for name in &model.meta.feature_names {
        out.extend_from_slice(&(name.len() as u16).to_le_bytes());
        out.extend_from_slice(name.as_bytes());
    }
    for tree in &model.trees {
        out.extend_from_slice(&(tree.nodes().len() as u32).to_le_bytes());
        for node in tree.nodes() {
            match *node {
                Node::Leaf { n0, n1 } => {
                    out.push(0);
                    out.extend_from_slice(&n0.to_le_bytes());
                    out.extend_from_slice(&n1.to_le_bytes());
                }
                Node::Split { feature, threshold, left, right } => {
                    out.push(1);
                    out.push(feature);
                    out.extend_from_slice(&threshold.to_le_bytes());
                    out.extend_from_slice(&left.to_le_bytes());
                    out.extend_from_slice(&right.to_le_bytes());
                }
            }
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::ModelFormat(format!("truncated at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// Guards allocations against absurd counts in corrupt files.
    fn count(&mut self, min_record: usize) -> Result<usize> {
        let n = self.u32()? as usize;
        if n.saturating_mul(min_record) > self.buf.len() - self.pos {
            return Err(Error::ModelFormat(format!("count {n} exceeds file size")));
        }
        Ok(n)
    }
}

pub fn decode_model(bytes: &[u8]) -> Result<BaggedModel> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4).ok() != Some(MODEL_MAGIC.as_slice()) {
        return Err(Error::ModelFormat("missing LCTM magic".into()));
    }
    let version = r.u32()?;
    if version != MODEL_VERSION {
        return Err(Error::ModelVersion {
            found: version,
            expected: MODEL_VERSION,
        });
    }
    let n_trees = r.u32()? as usize;
    let seed = r.u64()?;
    let min_leaf = r.u32()? as usize;
    let max_depth = r.u32()? as usize;
    let n_samples = r.u64()?;
    let n_features = r.count(2)?;
    let mut feature_names = Vec::with_capacity(n_features);
    for _ in 0..n_features {
        let len = r.u16()? as usize;
        let name = std::str::from_utf8(r.take(len)?)
            .map_err(|_| Error::ModelFormat("feature name is not UTF-8".into()))?;
        feature_names.push(name.to_string());
    }
    let mut trees = Vec::new();
    for _ in 0..n_trees {
        let n_nodes = r.count(9)?;
        let mut nodes = Vec::with_capacity(n_nodes);
        for _ in 0..n_nodes {
            nodes.push(match r.u8()? {
                0 => Node::Leaf { n0: r.u32()?, n1: r.u32()? },
                1 => Node::Split {
                    feature: r.u8()?,
                    threshold: r.f64()?,
                    left: r.u32()?,
                    right: r.u32()?,
                },
                k => return Err(Error::ModelFormat(format!("unknown node kind {k}"))),
            });
        }
        trees.push(DecisionTree::from_nodes(nodes)?);
    }
    if r.pos != bytes.len() {
        return Err(Error::ModelFormat(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    let params = TrainParams {
        n_trees,
        min_leaf,
        max_depth,
        seed,
    };
    BaggedModel::from_parts(trees, params, TrainingMeta { n_samples, feature_names })
}

pub fn save_model(model: &BaggedModel, path: &Path) -> Result<()> {
    fs::write(path, encode_model(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<BaggedModel> {
    decode_model(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{train_bagged, Sample};

    fn model() -> BaggedModel {
        let data: Vec<Sample> = (0..40)
            .map(|i| Sample::new([i as f64, (i * 7 % 13) as f64, 0.5], u8::from(i % 3 == 0)))
            .collect();
        train_bagged(&data, &TrainParams { n_trees: 4, min_leaf: 2, ..TrainParams::default() }).unwrap()
    }

    #[test]
    fn round_trip() {
        let m = model();
        assert_eq!(decode_model(&encode_model(&m)).unwrap(), m);
    }

    #[test]
    fn truncation_and_trailing_bytes() {
        let bytes = encode_model(&model());
        for cut in [0, 3, 8, 20, bytes.len() - 1] {
            assert!(matches!(decode_model(&bytes[..cut]), Err(Error::ModelFormat(_))), "cut {cut}");
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(decode_model(&extra), Err(Error::ModelFormat(_))));
    }

    #[test]
    fn version_bump() {
        let mut bytes = encode_model(&model());
        bytes[4] = 2;
        assert!(matches!(
            decode_model(&bytes),
            Err(Error::ModelVersion { found: 2, expected: 1 })
        ));
    }
}
