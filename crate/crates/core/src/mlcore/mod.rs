//! PCA, random undersampling, random forests and a KNN baseline.
//!
//! Every stochastic step draws from an [`RngStream`], identified by a master
//! seed and a stream id, so results do not depend on thread scheduling.

mod forest;
mod knn;
mod matrix;
mod pca;
mod rng;

pub use forest::{best_split_on_feature, forest_predict, forest_train, DecisionTree, Forest, ForestParams, Node, Prediction, Split};
pub use knn::{knn_predict, DEFAULT_K};
pub use matrix::Matrix;
pub use pca::{pca_fit, pca_transform, PcaModel};
pub use rng::{RngStream, DEFAULT_SEED};

use thiserror::Error;

use crate::dataset::StageLabel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlError {
    #[error("dimension mismatch: expected {expected} columns, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("PCA k = {k} out of range 1..={max}")]
    PcaK { k: usize, max: usize },
    #[error("need at least {needed} training rows, got {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("label {label} out of range for {n_classes} classes")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("non-finite value in input")]
    NonFinite,
}

/// Keep every non-W row and `round(p · N_W)` W rows drawn uniformly without
/// replacement. Returned indices are in ascending order.
pub fn rus_wake(labels: &[StageLabel], p: f64, rng: &RngStream) -> Result<Vec<usize>, MlError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(MlError::InvalidParam(format!("RUS fraction {p} not in (0, 1]")));
    }
    let wake: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == StageLabel::W).collect();
    let keep = (p * wake.len() as f64).round() as usize;
    let mut out: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] != StageLabel::W).collect();
    if keep == wake.len() {
        out.extend(&wake);
    } else {
        let mut r = rng.rng();
        out.extend(rand::seq::index::sample(&mut r, wake.len(), keep).into_iter().map(|j| wake[j]));
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use StageLabel::*;

    #[test]
    fn rus_thirty_percent() {
        let mut labels = vec![W; 100];
        labels.extend([S2; 20]);
        labels.extend([Rem; 5]);
        let idx = rus_wake(&labels, 0.30, &RngStream::new(1234, 7)).unwrap();
        assert_eq!(idx.iter().filter(|&&i| labels[i] == W).count(), 30);
        assert!((100..125).all(|i| idx.contains(&i)));
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rus_identity_and_determinism() {
        let labels = [W, S1, W, W, S2, W];
        assert_eq!(rus_wake(&labels, 1.0, &RngStream::new(1, 0)).unwrap(), (0..6).collect::<Vec<_>>());
        let a = rus_wake(&labels, 0.5, &RngStream::new(9, 3)).unwrap();
        let b = rus_wake(&labels, 0.5, &RngStream::new(9, 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2 + 2);
    }

    #[test]
    fn rus_rejects_bad_fraction() {
        assert!(rus_wake(&[W], 0.0, &RngStream::new(1, 0)).is_err());
        assert!(rus_wake(&[W], 1.5, &RngStream::new(1, 0)).is_err());
    }
}
