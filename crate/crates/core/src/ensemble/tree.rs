use std::cmp::Ordering;

use super::Sample;
use crate::error::{Error, Result};

/// Flattened tree node. Children always sit after their parent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Leaf { n0: u32, n1: u32 },
    Split { feature: u8, threshold: f64, left: u32, right: u32 },
}

/// Binary tree stored in preorder; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub min_leaf: usize,
    pub max_depth: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            min_leaf: 5,
            max_depth: 12,
        }
    }
}

impl DecisionTree {
    /// Rebuilds a tree from flattened nodes, checking the layout.
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::ModelFormat("tree without nodes".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            if let Node::Split { feature, threshold, left, right } = *node {
                let ok = |c: u32| (c as usize) > i && (c as usize) < nodes.len();
                if feature > 2 || !ok(left) || !ok(right) || left == right || threshold.is_nan() {
                    return Err(Error::ModelFormat(format!("bad split record at node {i}")));
                }
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => {
                    1 + walk(nodes, left as usize).max(walk(nodes, right as usize))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    /// Class counts of the leaf `x` falls into; `x[f] <= threshold` goes left.
    pub fn leaf_counts(&self, x: &[f64; 3]) -> (u32, u32) {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { n0, n1 } => return (n0, n1),
                Node::Split { feature, threshold, left, right } => {
                    i = if x[feature as usize] <= threshold { left } else { right } as usize;
                }
            }
        }
    }

    /// Majority class of the reached leaf, 0 on a tie.
    pub fn predict(&self, x: &[f64; 3]) -> u8 {
        let (n0, n1) = self.leaf_counts(x);
        u8::from(n1 > n0)
    }
}

/// Greedy CART learner minimising weighted Gini impurity.
///
/// Candidate thresholds are midpoints between consecutive distinct values.
/// A node splits whenever it is impure, under `max_depth`, and some split
/// leaves at least `min_leaf` samples on both sides. Ties in impurity go to
/// the lowest feature index, then the lowest threshold.
pub fn train_tree(samples: &[Sample], params: &TreeParams) -> Result<DecisionTree> {
    if samples.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut nodes = Vec::new();
    let idx: Vec<usize> = (0..samples.len()).collect();
    grow(samples, idx, 0, params, &mut nodes);
    Ok(DecisionTree { nodes })
}

fn grow(samples: &[Sample], idx: Vec<usize>, depth: usize, p: &TreeParams, nodes: &mut Vec<Node>) -> u32 {
    let at = nodes.len();
    let n1 = idx.iter().filter(|&&i| samples[i].label == 1).count();
    let n0 = idx.len() - n1;
    nodes.push(Node::Leaf { n0: n0 as u32, n1: n1 as u32 });
    if n0 == 0 || n1 == 0 || depth >= p.max_depth {
        return at as u32;
    }
    let Some(split) = best_split(samples, &idx, p.min_leaf.max(1)) else {
        return at as u32;
    };
    let (l, r): (Vec<usize>, Vec<usize>) = idx
        .into_iter()
        .partition(|&i| samples[i].features[split.feature] <= split.threshold);
    let left = grow(samples, l, depth + 1, p, nodes);
    let right = grow(samples, r, depth + 1, p, nodes);
    nodes[at] = Node::Split {
        feature: split.feature as u8,
        threshold: split.threshold,
        left,
        right,
    };
    at as u32
}

struct Split {
    feature: usize,
    threshold: f64,
}

/// Purity score `(a_l^2 + b_l^2)/n_l + (a_r^2 + b_r^2)/n_r` as an exact
/// fraction; larger means lower weighted Gini impurity.
#[derive(Clone, Copy)]
struct Score {
    num: u128,
    den: u128,
}

impl Score {
    fn new(l: (u64, u64), r: (u64, u64)) -> Self {
        let nl = (l.0 + l.1) as u128;
        let nr = (r.0 + r.1) as u128;
        let sq = |c: (u64, u64)| (c.0 as u128).pow(2) + (c.1 as u128).pow(2);
        Self {
            num: sq(l) * nr + sq(r) * nl,
            den: nl * nr,
        }
    }

    fn cmp(&self, other: &Score) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

pub(crate) fn midpoint(a: f64, b: f64) -> f64 {
    let mid = a + (b - a) / 2.0;
    if mid < b { mid } else { a }
}

fn best_split(samples: &[Sample], idx: &[usize], min_leaf: usize) -> Option<Split> {
    let n = idx.len();
    if n < 2 * min_leaf {
        return None;
    }
    let total1 = idx.iter().filter(|&&i| samples[i].label == 1).count() as u64;
    let total0 = n as u64 - total1;
    let mut best: Option<(Score, Split)> = None;
    let mut order = idx.to_vec();
    for f in 0..3 {
        order.sort_by(|&a, &b| samples[a].features[f].total_cmp(&samples[b].features[f]));
        let (mut l0, mut l1) = (0u64, 0u64);
        for k in 0..n - 1 {
            if samples[order[k]].label == 1 { l1 += 1 } else { l0 += 1 }
            let here = samples[order[k]].features[f];
            let next = samples[order[k + 1]].features[f];
            let nl = k + 1;
            if here == next || nl < min_leaf || n - nl < min_leaf {
                continue;
            }
            let score = Score::new((l0, l1), (total0 - l0, total1 - l1));
            if best.as_ref().map_or(true, |(b, _)| score.cmp(b) == Ordering::Greater) {
                best = Some((score, Split { feature: f, threshold: midpoint(here, next) }));
            }
        }
    }
    best.map(|(_, s)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64, y: u8) -> Sample {
        Sample::new([x, 0.0, 0.0], y)
    }

    #[test]
    fn pure_set_is_one_leaf() {
        let t = train_tree(&[s(1.0, 1), s(2.0, 1), s(3.0, 1)], &TreeParams::default()).unwrap();
        assert_eq!(t.nodes(), &[Node::Leaf { n0: 0, n1: 3 }]);
    }

    #[test]
    fn separable_pair_splits_at_midpoint() {
        let p = TreeParams { min_leaf: 1, max_depth: 12 };
        let t = train_tree(&[s(1.0, 0), s(3.0, 1)], &p).unwrap();
        assert_eq!(
            t.nodes()[0],
            Node::Split { feature: 0, threshold: 2.0, left: 1, right: 2 }
        );
        assert_eq!(t.predict(&[1.5, 0.0, 0.0]), 0);
        assert_eq!(t.predict(&[2.5, 0.0, 0.0]), 1);
    }

    #[test]
    fn min_leaf_blocks_small_splits() {
        let data = [s(1.0, 0), s(2.0, 0), s(3.0, 1), s(4.0, 1)];
        let t = train_tree(&data, &TreeParams { min_leaf: 3, max_depth: 12 }).unwrap();
        assert_eq!(t.nodes().len(), 1);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(train_tree(&[], &TreeParams::default()), Err(Error::EmptyTrainingSet)));
    }

    #[test]
    fn depth_limit() {
        let data: Vec<Sample> = (0..64).map(|i| s(i as f64, (i % 2) as u8)).collect();
        let t = train_tree(&data, &TreeParams { min_leaf: 1, max_depth: 3 }).unwrap();
        assert!(t.depth() <= 3);
    }

    #[test]
    fn midpoint_never_reaches_upper_value() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        assert_eq!(midpoint(a, b), a);
        assert_eq!(midpoint(2.0, 4.0), 3.0);
    }
}
