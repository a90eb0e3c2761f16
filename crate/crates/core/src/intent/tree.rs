use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{FeatureKind, FeatureVector};

/// Maximum number of splits on any root-to-leaf path.
pub const MAX_DEPTH: usize = 8;
/// Gain ratios closer than this count as tied.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Preferred,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingSample {
    pub features: FeatureVector,
    pub label: Label,
    pub generation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    Split {
        feature: FeatureKind,
        /// Samples with `value <= threshold` go left.
        threshold: f64,
        gain_ratio: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
    Leaf {
        label: Label,
        /// Fraction of the training samples reaching this leaf that were preferred.
        confidence: f64,
        n: usize,
    },
}

impl Node {
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: Node,
    /// Mean normalized features of the preferred samples, if any.
    pub preferred_centroid: Option<[f64; FeatureVector::LEN]>,
}

fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}

/// Gain ratio of a binary split given `(preferred, rejected)` counts on each side.
pub fn gain_ratio(left: (usize, usize), right: (usize, usize)) -> f64 {
    let n_left = left.0 + left.1;
    let n_right = right.0 + right.1;
    let n = (n_left + n_right) as f64;
    if n_left == 0 || n_right == 0 {
        return 0.0;
    }
    let parent = entropy(&[left.0 + right.0, left.1 + right.1]);
    let children = n_left as f64 / n * entropy(&[left.0, left.1]) + n_right as f64 / n * entropy(&[right.0, right.1]);
    let split_info = entropy(&[n_left, n_right]);
    (parent - children) / split_info
}

struct Row {
    x: [f64; FeatureVector::LEN],
    preferred: bool,
}

struct Split {
    feature: usize,
    threshold: f64,
    ratio: f64,
}

fn midpoint(a: f64, b: f64) -> f64 {
    let m = (a + b) / 2.0;
    if a <= m && m < b {
        m
    } else {
        a
    }
}

/// Best split over every feature and every midpoint between adjacent distinct
/// values. Ties within [`TIE_EPS`] keep the lowest feature, then threshold.
fn best_split(rows: &[&Row]) -> Option<Split> {
    let total_pos = rows.iter().filter(|r| r.preferred).count();
    let total_neg = rows.len() - total_pos;
    let mut best: Option<Split> = None;
    for feature in 0..FeatureVector::LEN {
        let mut values: Vec<(f64, bool)> = rows.iter().map(|r| (r.x[feature], r.preferred)).collect();
        values.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (mut pos, mut neg) = (0, 0);
        for i in 0..values.len() - 1 {
            if values[i].1 {
                pos += 1;
            } else {
                neg += 1;
            }
            let (v, next) = (values[i].0, values[i + 1].0);
            if v == next {
                continue;
            }
            let ratio = gain_ratio((pos, neg), (total_pos - pos, total_neg - neg));
            if best.as_ref().is_none_or(|b| ratio > b.ratio + TIE_EPS) {
                best = Some(Split { feature, threshold: midpoint(v, next), ratio });
            }
        }
    }
    best
}

fn leaf(rows: &[&Row]) -> Node {
    let pos = rows.iter().filter(|r| r.preferred).count();
    let confidence = pos as f64 / rows.len() as f64;
    let label = if confidence > 0.5 { Label::Preferred } else { Label::Rejected };
    Node::Leaf { label, confidence, n: rows.len() }
}

fn grow(rows: &[&Row], depth: usize) -> Node {
    let pos = rows.iter().filter(|r| r.preferred).count();
    if pos == 0 || pos == rows.len() || rows.len() < 2 || depth >= MAX_DEPTH {
        return leaf(rows);
    }
    // Impure nodes split even at zero gain (XOR-like data has none at the
    // first level); only identical feature vectors end up unsplittable.
    let Some(split) = best_split(rows) else {
        return leaf(rows);
    };
    let (left, right): (Vec<&Row>, Vec<&Row>) = rows.iter().partition(|r| r.x[split.feature] <= split.threshold);
    Node::Split {
        feature: FeatureKind::ALL[split.feature],
        threshold: split.threshold,
        gain_ratio: split.ratio,
        left: Box::new(grow(&left, depth + 1)),
        right: Box::new(grow(&right, depth + 1)),
    }
}

/// Top-down gain-ratio induction with midpoint thresholds and no pruning.
/// The result does not depend on the order of `samples`.
pub fn train(samples: &[TrainingSample]) -> Result<DecisionTree> {
    if samples.is_empty() {
        return Err(Error::Training("no training samples".into()));
    }
    if let Some(bad) = samples.iter().find(|s| s.features.as_array().iter().any(|x| !x.is_finite())) {
        return Err(Error::Training(format!("non-finite features in generation {}", bad.generation)));
    }
    let rows: Vec<Row> = samples
        .iter()
        .map(|s| Row { x: s.features.as_array(), preferred: s.label == Label::Preferred })
        .collect();
    let refs: Vec<&Row> = rows.iter().collect();

    let mut preferred: Vec<[f64; FeatureVector::LEN]> = samples
        .iter()
        .filter(|s| s.label == Label::Preferred)
        .map(|s| s.features.normalized())
        .collect();
    preferred.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    });
    let preferred_centroid = (!preferred.is_empty()).then(|| {
        let mut c = [0.0; FeatureVector::LEN];
        for p in &preferred {
            for (ci, pi) in c.iter_mut().zip(p) {
                *ci += pi;
            }
        }
        c.map(|x| x / preferred.len() as f64)
    });

    Ok(DecisionTree { root: grow(&refs, 0), preferred_centroid })
}

/// Root-to-leaf descent; returns the leaf label and its preferred-confidence.
pub fn classify(tree: &DecisionTree, f: &FeatureVector) -> (Label, f64) {
    let x = f.as_array();
    let mut node = &tree.root;
    loop {
        match node {
            Node::Leaf { label, confidence, .. } => return (*label, *confidence),
            Node::Split { feature, threshold, left, right, .. } => {
                node = if x[feature.index()] <= *threshold { left } else { right };
            }
        }
    }
}
