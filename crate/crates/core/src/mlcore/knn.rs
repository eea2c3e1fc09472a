use rayon::prelude::*;

use super::forest::argmax;
use super::{Matrix, MlError};

pub const DEFAULT_K: usize = 5;

/// Euclidean k-nearest-neighbour vote. Equal distances prefer the lower
/// training row; equal vote counts prefer the lower class index.
pub fn knn_predict(
    x_train: &Matrix,
    y_train: &[usize],
    x_test: &Matrix,
    k: usize,
    n_classes: usize,
) -> Result<Vec<usize>, MlError> {
    if k == 0 || k > x_train.rows() {
        return Err(MlError::InvalidParam(format!("k = {k} with {} training rows", x_train.rows())));
    }
    if x_train.rows() != y_train.len() {
        return Err(MlError::LengthMismatch {
            rows: x_train.rows(),
            labels: y_train.len(),
        });
    }
    if x_test.cols() != x_train.cols() {
        return Err(MlError::DimensionMismatch {
            expected: x_train.cols(),
            found: x_test.cols(),
        });
    }
    if let Some(&label) = y_train.iter().find(|&&l| l >= n_classes) {
        return Err(MlError::LabelOutOfRange { label, n_classes });
    }
    Ok((0..x_test.rows())
        .into_par_iter()
        .map(|r| {
            let q = x_test.row(r);
            let mut dist: Vec<(f64, usize)> = x_train
                .iter_rows()
                .enumerate()
                .map(|(i, t)| (t.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(), i))
                .collect();
            let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if k < dist.len() {
                dist.select_nth_unstable_by(k - 1, cmp);
            }
            let mut votes = vec![0.0; n_classes];
            for &(_, i) in &dist[..k] {
                votes[y_train[i]] += 1.0;
            }
            argmax(votes.into_iter())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> Matrix {
        Matrix::from_rows(&v.iter().map(|&x| vec![x]).collect::<Vec<_>>())
    }

    #[test]
    fn k1_exact_match() {
        let x = col(&[0.0, 5.0, 9.0]);
        assert_eq!(knn_predict(&x, &[2, 0, 1], &col(&[5.0]), 1, 3).unwrap(), vec![0]);
    }

    #[test]
    fn k_all_gives_majority() {
        let x = col(&[0.0, 1.0, 2.0, 100.0]);
        let y = [1, 1, 1, 0];
        assert_eq!(knn_predict(&x, &y, &col(&[100.0, -5.0]), 4, 2).unwrap(), vec![1, 1]);
    }

    #[test]
    fn three_point_line() {
        let x = col(&[0.0, 1.0, 10.0]);
        assert_eq!(knn_predict(&x, &[0, 0, 1], &col(&[0.4]), 3, 2).unwrap(), vec![0]);
    }

    #[test]
    fn distance_tie_prefers_lower_row() {
        // query 1.0 is equidistant from rows 0 and 1
        let x = col(&[0.0, 2.0]);
        assert_eq!(knn_predict(&x, &[1, 0], &col(&[1.0]), 1, 2).unwrap(), vec![1]);
    }

    #[test]
    fn vote_tie_prefers_lower_class() {
        let x = col(&[0.0, 1.0]);
        assert_eq!(knn_predict(&x, &[1, 0], &col(&[0.0]), 2, 2).unwrap(), vec![0]);
    }

    #[test]
    fn bad_k() {
        let x = col(&[0.0]);
        assert!(knn_predict(&x, &[0], &x, 0, 1).is_err());
        assert!(knn_predict(&x, &[0], &x, 2, 1).is_err());
    }
}
