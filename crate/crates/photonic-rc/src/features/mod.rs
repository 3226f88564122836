//! Dataset-specific preprocessing: HOG descriptors, PCA reduction, the
//! MNIST strip sequencer, and min-max normalization into the [0,1] range the
//! encoder requires.

pub mod hog;
pub mod mnist;
pub mod pca;
pub mod sequence;

pub use hog::{hog, HogParams};
pub use mnist::{MnistPipeline, MnistPipelineParams, MNIST_SEGMENTS};
pub use pca::{pca_fit, PcaModel};
pub use sequence::{
    load_sequence_dir, normalize_sequence, write_sequence_dir, Bounds, SequenceDataset,
    SequenceSample,
};

use crate::error::{Error, Result};

/// Row-major grayscale image with values in [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Image {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} image needs {} pixels, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Copy of the column range `[c0, c1)` over all rows.
    pub fn column_slice(&self, c0: usize, c1: usize) -> Result<Image> {
        if c0 >= c1 || c1 > self.cols {
            return Err(Error::Shape(format!(
                "column range [{c0},{c1}) outside image with {} columns",
                self.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * (c1 - c0));
        for r in 0..self.rows {
            data.extend_from_slice(&self.data[r * self.cols + c0..r * self.cols + c1]);
        }
        Image::new(self.rows, c1 - c0, data)
    }
}
