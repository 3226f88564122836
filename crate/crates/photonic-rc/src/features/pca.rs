//! Principal component analysis by mean-centered thin SVD.
//!
//! Components are the top-k right singular vectors with a deterministic sign
//! convention: the largest-magnitude entry of each component is positive
//! (first such entry on ties).

use faer::Mat;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// k x d, orthonormal rows.
    components: Vec<Vec<f64>>,
    /// Covariance eigenvalues of the retained components.
    explained_variance: Vec<f64>,
}

/// Fits on the given rows (samples x features); callers must pass training
/// data only.
pub fn pca_fit(rows: &[Vec<f64>], k: usize) -> Result<PcaModel> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidInput("PCA fit needs at least one sample".into()));
    }
    let d = rows[0].len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Shape("PCA fit rows have mixed lengths".into()));
    }
    if k == 0 || k > n.min(d) {
        return Err(Error::InvalidParameter(format!(
            "cannot retain {k} components from {n} samples x {d} features"
        )));
    }
    let mut mean = vec![0.0; d];
    for r in rows {
        for (m, &v) in mean.iter_mut().zip(r) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let centered = Mat::from_fn(n, d, |i, j| rows[i][j] - mean[j]);
    let svd = centered
        .thin_svd()
        .map_err(|_| Error::IllConditioned("SVD did not converge".into()))?;
    let v = svd.V();
    let s = svd.S().column_vector();

    let mut components = Vec::with_capacity(k);
    let mut explained_variance = Vec::with_capacity(k);
    let var_denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
    for r in 0..k {
        let mut comp: Vec<f64> = (0..d).map(|j| v[(j, r)]).collect();
        let lead = comp
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| {
                a.abs()
                    .partial_cmp(&b.abs())
                    .unwrap()
                    .then(ib.cmp(ia)) // first index wins ties
            })
            .map(|(i, _)| i)
            .unwrap();
        if comp[lead] < 0.0 {
            for c in comp.iter_mut() {
                *c = -*c;
            }
        }
        components.push(comp);
        explained_variance.push(s[r] * s[r] / var_denom);
    }
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
    })
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Shape(format!(
                "PCA input length {} != fitted dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(x.iter().zip(&self.mean))
                    .map(|(&w, (&v, &m))| w * (v - m))
                    .sum()
            })
            .collect())
    }

    pub fn reconstruct(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n_components() {
            return Err(Error::Shape(format!(
                "projection length {} != {} components",
                y.len(),
                self.n_components()
            )));
        }
        let mut x = self.mean.clone();
        for (c, &w) in self.components.iter().zip(y) {
            for (xi, &ci) in x.iter_mut().zip(c) {
                *xi += w * ci;
            }
        }
        Ok(x)
    }
}
