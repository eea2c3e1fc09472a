use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Matrix, MlError, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Smallest allowed child size.
    pub min_leaf: usize,
    /// Candidate features per split; `None` means `floor(sqrt(d))`.
    pub max_features: Option<usize>,
    /// Tree `t` draws from stream `(seed, t)`.
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            min_leaf: 1,
            max_features: None,
            seed: super::DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    /// Class counts of the training rows that reached this leaf.
    Leaf { counts: Vec<u32> },
}

/// Nodes in pre-order; the root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn leaf_for(&self, row: &[f64]) -> &[u32] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { counts } => return counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if row[*feature as usize] <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    }
                }
            }
        }
    }

    /// Majority class of the leaf reached by `row` (lowest index on ties).
    pub fn predict_row(&self, row: &[f64]) -> usize {
        argmax(self.leaf_for(row).iter().map(|&c| c as f64))
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left as usize).max(go(nodes, *right as usize)),
            }
        }
        go(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<DecisionTree>,
    pub n_classes: usize,
    pub n_features: usize,
    pub max_features: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub labels: Vec<usize>,
    /// Vote shares, `rows × n_classes`.
    pub probabilities: Matrix,
}

/// First index of the maximum.
pub(crate) fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

pub fn forest_train(x: &Matrix, y: &[usize], n_classes: usize, params: &ForestParams) -> Result<Forest, MlError> {
    let (n, d) = (x.rows(), x.cols());
    if n != y.len() {
        return Err(MlError::LengthMismatch { rows: n, labels: y.len() });
    }
    if n < 2 {
        return Err(MlError::TooFewRows { needed: 2, found: n });
    }
    if params.n_trees == 0 || params.min_leaf == 0 || d == 0 || n_classes == 0 {
        return Err(MlError::InvalidParam(format!(
            "n_trees {}, min_leaf {}, features {d}, classes {n_classes}",
            params.n_trees, params.min_leaf
        )));
    }
    if let Some(&label) = y.iter().find(|&&l| l >= n_classes) {
        return Err(MlError::LabelOutOfRange { label, n_classes });
    }
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(MlError::NonFinite);
    }
    let max_features = params
        .max_features
        .unwrap_or_else(|| (d as f64).sqrt().floor() as usize)
        .clamp(1, d);
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(params.seed, t as u64).rng();
            let sample: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n) as u32).collect();
            TreeBuilder {
                x,
                y,
                n_classes,
                max_features,
                min_leaf: params.min_leaf,
            }
            .build(sample, &mut rng)
        })
        .collect();
    Ok(Forest {
        trees,
        n_classes,
        n_features: d,
        max_features,
        seed: params.seed,
    })
}

pub fn forest_predict(f: &Forest, x: &Matrix) -> Result<Prediction, MlError> {
    f.predict(x)
}

impl Forest {
    pub fn predict(&self, x: &Matrix) -> Result<Prediction, MlError> {
        if x.cols() != self.n_features {
            return Err(MlError::DimensionMismatch {
                expected: self.n_features,
                found: x.cols(),
            });
        }
        let rows: Vec<(usize, Vec<f64>)> = (0..x.rows())
            .into_par_iter()
            .map(|r| {
                let probs = self.vote_shares(x.row(r));
                (argmax(probs.iter().copied()), probs)
            })
            .collect();
        let mut probabilities = Matrix::zeros(rows.len(), self.n_classes);
        let mut labels = Vec::with_capacity(rows.len());
        for (r, (label, p)) in rows.into_iter().enumerate() {
            probabilities.row_mut(r).copy_from_slice(&p);
            labels.push(label);
        }
        Ok(Prediction { labels, probabilities })
    }

    pub fn vote_shares(&self, row: &[f64]) -> Vec<f64> {
        let mut votes = vec![0u32; self.n_classes];
        for t in &self.trees {
            votes[t.predict_row(row)] += 1;
        }
        let total = self.trees.len() as f64;
        votes.into_iter().map(|v| v as f64 / total).collect()
    }
}

struct TreeBuilder<'a> {
    x: &'a Matrix,
    y: &'a [usize],
    n_classes: usize,
    max_features: usize,
    min_leaf: usize,
}

/// Best split found on one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// Σ_children Σ_c count²/size; larger means lower weighted Gini.
    pub score: f64,
}

impl TreeBuilder<'_> {
    fn counts(&self, rows: &[u32]) -> Vec<u32> {
        let mut c = vec![0u32; self.n_classes];
        for &r in rows {
            c[self.y[r as usize]] += 1;
        }
        c
    }

    fn build(&self, sample: Vec<u32>, rng: &mut impl Rng) -> DecisionTree {
        let mut nodes = Vec::new();
        // (node slot, rows)
        let mut stack = vec![(0usize, sample)];
        nodes.push(Node::Leaf { counts: vec![] });
        let d = self.x.cols();
        let mut features: Vec<usize> = (0..d).collect();
        while let Some((slot, rows)) = stack.pop() {
            let counts = self.counts(&rows);
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            if pure || rows.len() < 2 * self.min_leaf {
                nodes[slot] = Node::Leaf { counts };
                continue;
            }
            features.shuffle(rng);
            let mut best: Option<Split> = None;
            for (tried, &f) in features.iter().enumerate() {
                // keep drawing past the candidate budget only while nothing splits
                if tried >= self.max_features && best.is_some() {
                    break;
                }
                if let Some(s) = best_split_on_feature(self.x, self.y, self.n_classes, &rows, f, self.min_leaf) {
                    if best.map_or(true, |b| s.score > b.score) {
                        best = Some(s);
                    }
                }
            }
            let Some(split) = best else {
                nodes[slot] = Node::Leaf { counts };
                continue;
            };
            let (left, right): (Vec<u32>, Vec<u32>) = rows
                .iter()
                .partition(|&&r| self.x.get(r as usize, split.feature) <= split.threshold);
            let l = nodes.len();
            nodes.push(Node::Leaf { counts: vec![] });
            nodes.push(Node::Leaf { counts: vec![] });
            nodes[slot] = Node::Split {
                feature: split.feature as u32,
                threshold: split.threshold,
                left: l as u32,
                right: l as u32 + 1,
            };
            stack.push((l + 1, right));
            stack.push((l, left));
        }
        DecisionTree { nodes }
    }
}

/// Best midpoint threshold on one feature, or `None` when the feature is
/// constant on `rows` or no cut leaves `min_leaf` rows on both sides.
pub fn best_split_on_feature(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    rows: &[u32],
    feature: usize,
    min_leaf: usize,
) -> Option<Split> {
    let mut pairs: Vec<(f64, usize)> = rows.iter().map(|&r| (x.get(r as usize, feature), y[r as usize])).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pairs.len();
    let mut right = vec![0f64; n_classes];
    for &(_, c) in &pairs {
        right[c] += 1.0;
    }
    let mut left = vec![0f64; n_classes];
    let (mut sum_l, mut sum_r) = (0.0, right.iter().map(|c| c * c).sum::<f64>());
    let mut best: Option<Split> = None;
    for i in 0..n - 1 {
        let c = pairs[i].1;
        // incremental Σ count² updates
        sum_l += 2.0 * left[c] + 1.0;
        sum_r -= 2.0 * right[c] - 1.0;
        left[c] += 1.0;
        right[c] -= 1.0;
        let (a, b) = (pairs[i].0, pairs[i + 1].0);
        let nl = i + 1;
        if a == b || nl < min_leaf || n - nl < min_leaf {
            continue;
        }
        let score = sum_l / nl as f64 + sum_r / (n - nl) as f64;
        if best.map_or(true, |s| score > s.score) {
            let mut threshold = a + (b - a) / 2.0;
            if threshold >= b {
                threshold = a;
            }
            best = Some(Split {
                feature,
                threshold,
                score,
            });
        }
    }
    best
}
