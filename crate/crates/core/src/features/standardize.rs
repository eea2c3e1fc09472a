use serde::{Deserialize, Serialize};

use super::{FeatureError, FeatureMatrix};
use crate::mlcore::Matrix;

/// Per-column training statistics. `scale` is the population standard
/// deviation, forced to 1 for constant columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationStats {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl StandardizationStats {
    pub fn identity(cols: usize) -> Self {
        Self {
            mean: vec![0.0; cols],
            scale: vec![1.0; cols],
        }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn fit(values: &Matrix) -> Result<Self, FeatureError> {
        let n = values.rows();
        if n < 2 {
            return Err(FeatureError::TooFewRows(n));
        }
        let d = values.cols();
        let mut mean = vec![0.0; d];
        for r in values.iter_rows() {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut var = vec![0.0; d];
        let mut constant = vec![true; d];
        let first = values.row(0);
        for r in values.iter_rows() {
            for (j, v) in r.iter().enumerate() {
                let dv = v - mean[j];
                var[j] += dv * dv;
                constant[j] &= *v == first[j];
            }
        }
        // constant columns are detected exactly; their computed variance may be rounding noise
        let scale = var
            .into_iter()
            .zip(constant)
            .map(|(s, c)| {
                let sd = (s / n as f64).sqrt();
                if c || !(sd > 0.0 && sd.is_finite()) {
                    1.0
                } else {
                    sd
                }
            })
            .collect();
        Ok(Self { mean, scale })
    }

    pub fn apply(&self, values: &Matrix) -> Result<Matrix, FeatureError> {
        if values.cols() != self.len() {
            return Err(FeatureError::DimensionMismatch {
                expected: self.len(),
                found: values.cols(),
            });
        }
        let mut out = values.clone();
        for r in 0..out.rows() {
            self.apply_row(out.row_mut(r));
        }
        Ok(out)
    }

    /// In-place on one row; the caller guarantees the length.
    pub fn apply_row(&self, row: &mut [f64]) {
        for ((v, m), s) in row.iter_mut().zip(&self.mean).zip(&self.scale) {
            *v = (*v - m) / s;
        }
    }
}

pub fn fit_standardizer(train: &FeatureMatrix) -> Result<StandardizationStats, FeatureError> {
    StandardizationStats::fit(&train.values)
}

pub fn apply_standardizer(stats: &StandardizationStats, m: &FeatureMatrix) -> Result<FeatureMatrix, FeatureError> {
    Ok(FeatureMatrix {
        values: stats.apply(&m.values)?,
        column_meta: m.column_meta.clone(),
        row_meta: m.row_meta.clone(),
    })
}
