use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::dataset::{StageLabel, N_STAGES};

/// Square count matrix; rows are true classes, columns predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sum(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }

    pub fn col_sum(&self, c: usize) -> u64 {
        self.counts.iter().map(|r| r[c]).sum()
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn from_indices(n: usize, truth: &[usize], pred: &[usize]) -> Result<Self, EvalError> {
        if truth.len() != pred.len() {
            return Err(EvalError::LengthMismatch {
                truth: truth.len(),
                pred: pred.len(),
            });
        }
        let mut cm = Self::zeros(n);
        for (&t, &p) in truth.iter().zip(pred) {
            if t >= n || p >= n {
                return Err(EvalError::LabelOutOfRange(t.max(p)));
            }
            cm.counts[t][p] += 1;
        }
        Ok(cm)
    }
}

/// Five-class confusion matrix in canonical class order.
pub fn confusion(truth: &[StageLabel], pred: &[StageLabel]) -> Result<ConfusionMatrix, EvalError> {
    let idx = |v: &[StageLabel]| v.iter().map(|l| l.index()).collect::<Vec<_>>();
    ConfusionMatrix::from_indices(N_STAGES, &idx(truth), &idx(pred))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FScores {
    pub per_class: Vec<f64>,
    /// Classes seen in truth or prediction; only these enter the macro mean.
    pub included: Vec<bool>,
    /// Mean over included classes; 0 when none is included.
    pub macro_f: f64,
}

pub fn fscore(cm: &ConfusionMatrix) -> FScores {
    let n = cm.n_classes();
    let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let mut per_class = Vec::with_capacity(n);
    let mut included = Vec::with_capacity(n);
    for c in 0..n {
        let tp = cm.counts[c][c];
        let (row, col) = (cm.row_sum(c), cm.col_sum(c));
        let p = ratio(tp, col);
        let r = ratio(tp, row);
        per_class.push(if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) });
        included.push(row + col > 0);
    }
    let kept: Vec<f64> = per_class.iter().zip(&included).filter(|(_, &i)| i).map(|(f, _)| *f).collect();
    let macro_f = if kept.is_empty() {
        0.0
    } else {
        kept.iter().sum::<f64>() / kept.len() as f64
    };
    FScores {
        per_class,
        included,
        macro_f,
    }
}
