use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{Matrix, MlError};

/// Principal components in row form (`k × d`, orthonormal rows).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    pub components: Matrix,
    /// Sample variance (n − 1 denominator) along each component, descending.
    pub explained_variance: Vec<f64>,
}

impl PcaModel {
    pub fn k(&self) -> usize {
        self.components.rows()
    }

    pub fn d(&self) -> usize {
        self.mean.len()
    }

    pub fn transform_row(&self, row: &[f64], out: &mut [f64]) {
        for (c, o) in out.iter_mut().enumerate() {
            *o = self
                .components
                .row(c)
                .iter()
                .zip(row)
                .zip(&self.mean)
                .map(|((w, x), m)| w * (x - m))
                .sum();
        }
    }

    pub fn transform(&self, x: &Matrix) -> Result<Matrix, MlError> {
        if x.cols() != self.d() {
            return Err(MlError::DimensionMismatch {
                expected: self.d(),
                found: x.cols(),
            });
        }
        let mut out = Matrix::zeros(x.rows(), self.k());
        for r in 0..x.rows() {
            self.transform_row(x.row(r), out.row_mut(r));
        }
        Ok(out)
    }

    /// Map component scores back to the input space.
    pub fn inverse_transform(&self, z: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(z.rows(), self.d());
        for r in 0..z.rows() {
            let o = out.row_mut(r);
            o.copy_from_slice(&self.mean);
            for (c, &s) in z.row(r).iter().enumerate() {
                for (v, w) in o.iter_mut().zip(self.components.row(c)) {
                    *v += s * w;
                }
            }
        }
        out
    }
}

/// Fit the top `k` principal components. Uses the `d × d` covariance when
/// `d ≤ rows`, otherwise the `rows × rows` Gram matrix.
pub fn pca_fit(x: &Matrix, k: usize) -> Result<PcaModel, MlError> {
    let (n, d) = (x.rows(), x.cols());
    if n < 2 {
        return Err(MlError::TooFewRows { needed: 2, found: n });
    }
    let max = (n - 1).min(d);
    if k == 0 || k > max {
        return Err(MlError::PcaK { k, max });
    }
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(MlError::NonFinite);
    }
    let mut mean = vec![0.0; d];
    for r in x.iter_rows() {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let xc = DMatrix::from_fn(n, d, |i, j| x.get(i, j) - mean[j]);
    let denom = (n - 1) as f64;

    let (vectors, values): (Vec<Vec<f64>>, Vec<f64>) = if d <= n {
        let cov = (xc.transpose() * &xc) / denom;
        let (vals, vecs) = sorted_eigen(cov);
        let comps = (0..k).map(|c| vecs.column(c).iter().copied().collect()).collect();
        (comps, vals[..k].to_vec())
    } else {
        let gram = (&xc * xc.transpose()) / denom;
        let (vals, vecs) = sorted_eigen(gram);
        let scale_tol = vals.first().copied().unwrap_or(0.0).max(0.0) * 1e-12;
        let mut comps = Vec::with_capacity(k);
        let mut used = Vec::with_capacity(k);
        for c in 0..k {
            if vals[c] <= scale_tol {
                break;
            }
            // v = Xcᵀ u / sqrt(λ (n − 1))
            let v = xc.transpose() * vecs.column(c);
            let norm = v.norm();
            comps.push(v.iter().map(|e| e / norm).collect());
            used.push(vals[c]);
        }
        (comps, used)
    };
    let mut values = values.into_iter().map(|v| v.max(0.0)).collect::<Vec<_>>();
    let mut components = orthonormalize(vectors, d, k);
    values.resize(k, 0.0);
    for comp in &mut components {
        // largest-magnitude entry positive; first such entry on ties
        let mut best = 0;
        for (i, v) in comp.iter().enumerate() {
            if v.abs() > comp[best].abs() {
                best = i;
            }
        }
        if comp[best] < 0.0 {
            comp.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Ok(PcaModel {
        mean,
        components: Matrix::from_rows(&components),
        explained_variance: values,
    })
}

pub fn pca_transform(m: &PcaModel, x: &Matrix) -> Result<Matrix, MlError> {
    m.transform(x)
}

/// Eigenpairs sorted by descending eigenvalue (stable on ties).
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Modified Gram-Schmidt over the given vectors, then completion from the
/// canonical basis until `k` orthonormal vectors exist.
fn orthonormalize(vectors: Vec<Vec<f64>>, d: usize, k: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(k);
    let push = |out: &mut Vec<Vec<f64>>, mut v: Vec<f64>| {
        for _ in 0..2 {
            for q in out.iter() {
                let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            out.push(v);
        }
    };
    for v in vectors {
        if out.len() == k {
            break;
        }
        push(&mut out, v);
    }
    let mut e = 0;
    while out.len() < k && e < d {
        let mut basis = vec![0.0; d];
        basis[e] = 1.0;
        push(&mut out, basis);
        e += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn axis_aligned() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 - 10.0, 0.0, 0.0]).collect();
        let m = pca_fit(&Matrix::from_rows(&rows), 1).unwrap();
        let c = m.components.row(0);
        assert!((c[0] - 1.0).abs() < 1e-12 && c[1].abs() < 1e-12 && c[2].abs() < 1e-12);
    }

    #[test]
    fn rank_one_reconstruction() {
        let dir = [0.3, -1.2, 2.0, 0.5];
        let rows: Vec<Vec<f64>> = (0..15).map(|i| dir.iter().map(|d| d * (i as f64 * 0.7 - 3.0) + 1.0).collect()).collect();
        let x = Matrix::from_rows(&rows);
        let m = pca_fit(&x, 1).unwrap();
        let back = m.inverse_transform(&m.transform(&x).unwrap());
        for (a, b) in x.as_slice().iter().zip(back.as_slice()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn gram_path_matches_covariance_path() {
        // 6 rows × 10 columns forces the Gram route; compare with the covariance of the transpose-free problem
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..10).map(|j| ((i * 7 + j * 3) % 11) as f64 + (j as f64 * i as f64).sin()).collect())
            .collect();
        let x = Matrix::from_rows(&rows);
        let m = pca_fit(&x, 5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot(m.components.row(a), m.components.row(b)) - expected).abs() < 1e-9);
            }
        }
        let z = m.transform(&x).unwrap();
        for c in 0..5 {
            let col = z.column(c);
            let var = col.iter().map(|v| v * v).sum::<f64>() / 5.0;
            assert!((var - m.explained_variance[c]).abs() < 1e-6, "{var} vs {}", m.explained_variance[c]);
        }
        assert!(m.explained_variance.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_deficient_completion() {
        // 5 identical-direction rows in 8 dims: rank 1, ask for 3 components
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64; 8]).collect();
        let m = pca_fit(&Matrix::from_rows(&rows), 3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot(m.components.row(a), m.components.row(b)) - expected).abs() < 1e-9);
            }
        }
        assert!(m.explained_variance[1].abs() < 1e-9);
    }

    #[test]
    fn mean_row_maps_to_zero() {
        let rows = vec![vec![1.0, 2.0], vec![3.0, 1.0], vec![0.0, 5.0]];
        let x = Matrix::from_rows(&rows);
        let m = pca_fit(&x, 2).unwrap();
        let z = m.transform(&Matrix::from_rows(&[m.mean.clone()])).unwrap();
        assert!(z.as_slice().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn k_range() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0], vec![0.0, 5.0]]);
        assert_eq!(pca_fit(&x, 3), Err(MlError::PcaK { k: 3, max: 2 }));
        assert!(pca_fit(&x, 0).is_err());
        let m = pca_fit(&x, 1).unwrap();
        assert!(m.transform(&Matrix::from_rows(&[vec![1.0]])).is_err());
    }

    #[test]
    fn sign_convention() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![-(i as f64), 0.1 * i as f64]).collect();
        let m = pca_fit(&Matrix::from_rows(&rows), 1).unwrap();
        let c = m.components.row(0);
        let big = if c[0].abs() >= c[1].abs() { c[0] } else { c[1] };
        assert!(big > 0.0);
    }
}
