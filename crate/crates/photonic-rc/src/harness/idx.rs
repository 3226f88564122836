//! MNIST IDX file parsing: big-endian 32-bit magic (2051 for images, 2049
//! for labels), dimension header, unsigned byte payload. Pixels scale to
//! [0,1] by division by 255.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::Image;

const IMAGE_MAGIC: u32 = 2051;
const LABEL_MAGIC: u32 = 2049;

pub struct MnistData {
    /// Training images followed by test images.
    pub images: Vec<Image>,
    pub labels: Vec<usize>,
    /// Index where the test block starts.
    pub train_count: usize,
}

impl MnistData {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn test_count(&self) -> usize {
        self.images.len() - self.train_count
    }
}

fn be_u32(bytes: &[u8], offset: usize, what: &str) -> Result<u32> {
    let end = offset + 4;
    if end > bytes.len() {
        return Err(Error::Format(format!(
            "truncated {what} at byte {offset}: need {end} bytes, file has {}",
            bytes.len()
        )));
    }
    Ok(u32::from_be_bytes(bytes[offset..end].try_into().unwrap()))
}

pub fn load_idx_images(path: &Path) -> Result<Vec<Image>> {
    let bytes = fs::read(path)?;
    let magic = be_u32(&bytes, 0, "image magic")?;
    if magic != IMAGE_MAGIC {
        return Err(Error::Format(format!(
            "{}: image magic {magic} != {IMAGE_MAGIC} at byte 0",
            path.display()
        )));
    }
    let count = be_u32(&bytes, 4, "image count")? as usize;
    let rows = be_u32(&bytes, 8, "row count")? as usize;
    let cols = be_u32(&bytes, 12, "column count")? as usize;
    let expected = 16 + count * rows * cols;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "{}: expected {expected} bytes for {count} {rows}x{cols} images, found {}",
            path.display(),
            bytes.len()
        )));
    }
    let mut images = Vec::with_capacity(count);
    for i in 0..count {
        let start = 16 + i * rows * cols;
        let data = bytes[start..start + rows * cols]
            .iter()
            .map(|&b| b as f64 / 255.0)
            .collect();
        images.push(Image::new(rows, cols, data)?);
    }
    Ok(images)
}

pub fn load_idx_labels(path: &Path) -> Result<Vec<usize>> {
    let bytes = fs::read(path)?;
    let magic = be_u32(&bytes, 0, "label magic")?;
    if magic != LABEL_MAGIC {
        return Err(Error::Format(format!(
            "{}: label magic {magic} != {LABEL_MAGIC} at byte 0",
            path.display()
        )));
    }
    let count = be_u32(&bytes, 4, "label count")? as usize;
    let expected = 8 + count;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "{}: expected {expected} bytes for {count} labels, found {}",
            path.display(),
            bytes.len()
        )));
    }
    let labels: Vec<usize> = bytes[8..].iter().map(|&b| b as usize).collect();
    if let Some(&bad) = labels.iter().find(|&&l| l > 9) {
        return Err(Error::Format(format!(
            "{}: label {bad} outside 0..=9",
            path.display()
        )));
    }
    Ok(labels)
}

/// Loads the four canonical IDX files from `dir`.
pub fn load_mnist(dir: &Path) -> Result<MnistData> {
    let train_images = load_idx_images(&dir.join("train-images-idx3-ubyte"))?;
    let train_labels = load_idx_labels(&dir.join("train-labels-idx1-ubyte"))?;
    let test_images = load_idx_images(&dir.join("t10k-images-idx3-ubyte"))?;
    let test_labels = load_idx_labels(&dir.join("t10k-labels-idx1-ubyte"))?;
    if train_images.len() != train_labels.len() || test_images.len() != test_labels.len() {
        return Err(Error::Format(format!(
            "image/label count mismatch: {}/{} train, {}/{} test",
            train_images.len(),
            train_labels.len(),
            test_images.len(),
            test_labels.len()
        )));
    }
    let train_count = train_images.len();
    let mut images = train_images;
    images.extend(test_images);
    let mut labels = train_labels;
    labels.extend(test_labels);
    Ok(MnistData {
        images,
        labels,
        train_count,
    })
}
