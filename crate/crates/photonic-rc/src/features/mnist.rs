//! MNIST strip sequencing: each 28x28 image becomes a 4-step sequence by
//! splitting it into four non-overlapping 7-column regions, extracting HOG
//! descriptors per strip, reducing them with PCA, and min-max scaling into
//! [0,1]. PCA and the scaling bounds are fitted on the training split only.

use super::hog::{hog, HogParams};
use super::pca::{pca_fit, PcaModel};
use super::Image;
use crate::error::{Error, Result};

/// Column ranges of the four strips.
pub const MNIST_SEGMENTS: [(usize, usize); 4] = [(0, 7), (7, 14), (14, 21), (21, 28)];

#[derive(Debug, Clone)]
pub struct MnistPipelineParams {
    pub hog: HogParams,
    pub pca_components: usize,
    /// Fit one PCA per strip position instead of a single pooled model.
    pub per_position: bool,
}

impl Default for MnistPipelineParams {
    fn default() -> Self {
        Self {
            hog: HogParams::default(),
            pca_components: 25,
            per_position: false,
        }
    }
}

/// Fitted MNIST preprocessing: HOG params, PCA model(s), scaling bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct MnistPipeline {
    hog: HogParams,
    /// One pooled model, or one per strip position.
    pca: Vec<PcaModel>,
    /// Per-feature (min, span) matching the PCA list.
    bounds: Vec<Vec<(f64, f64)>>,
}

impl MnistPipeline {
    pub fn fit<'a, I>(train_images: I, params: &MnistPipelineParams) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Image>,
    {
        let mut per_position: Vec<Vec<Vec<f64>>> = vec![Vec::new(); 4];
        for img in train_images {
            for (pos, desc) in strip_descriptors(img, &params.hog)?.into_iter().enumerate() {
                per_position[pos].push(desc);
            }
        }
        if per_position[0].is_empty() {
            return Err(Error::InvalidInput("MNIST pipeline fit needs training images".into()));
        }
        let groups: Vec<Vec<Vec<f64>>> = if params.per_position {
            per_position
        } else {
            vec![per_position.into_iter().flatten().collect()]
        };
        let mut pca = Vec::with_capacity(groups.len());
        let mut bounds = Vec::with_capacity(groups.len());
        for descriptors in &groups {
            let model = pca_fit(descriptors, params.pca_components)?;
            let mut b = vec![(f64::INFINITY, f64::NEG_INFINITY); params.pca_components];
            for d in descriptors {
                for (bi, v) in b.iter_mut().zip(model.transform(d)?) {
                    bi.0 = bi.0.min(v);
                    bi.1 = bi.1.max(v);
                }
            }
            let b = b.into_iter().map(|(lo, hi)| (lo, hi - lo)).collect();
            pca.push(model);
            bounds.push(b);
        }
        Ok(Self {
            hog: params.hog,
            pca,
            bounds,
        })
    }

    /// 4-frame sequence for one image, each frame in [0,1].
    pub fn transform(&self, image: &Image) -> Result<Vec<Vec<f64>>> {
        strip_descriptors(image, &self.hog)?
            .into_iter()
            .enumerate()
            .map(|(pos, desc)| {
                let g = if self.pca.len() == 1 { 0 } else { pos };
                let projected = self.pca[g].transform(&desc)?;
                Ok(projected
                    .into_iter()
                    .zip(&self.bounds[g])
                    .map(|(v, &(lo, span))| {
                        if span > 0.0 {
                            ((v - lo) / span).clamp(0.0, 1.0)
                        } else {
                            0.0
                        }
                    })
                    .collect())
            })
            .collect()
    }

    pub fn n_features(&self) -> usize {
        self.pca[0].n_components()
    }
}

fn strip_descriptors(image: &Image, params: &HogParams) -> Result<Vec<Vec<f64>>> {
    if image.cols != 28 {
        return Err(Error::Shape(format!(
            "MNIST strip sequencing expects 28 columns, got {}",
            image.cols
        )));
    }
    MNIST_SEGMENTS
        .iter()
        .map(|&(c0, c1)| hog(&image.column_slice(c0, c1)?, params))
        .collect()
}
