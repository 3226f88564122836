//! Generic sequence samples, min-max normalization, and the on-disk dataset
//! format.
//!
//! A sequence dataset directory holds a `manifest.csv` with the header line
//! `file,label,source_id,group` followed by one row per sample: the sample
//! file name (relative, no commas), a label token, a free-form source id
//! (speaker / subject / video), and an unsigned integer group tag (the
//! temporal segment index for the central-segments protocol, otherwise 0).
//! Each sample file is plain CSV: one row per time step, one column per
//! feature.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// TI-46 cochleagram geometry: 86 frequency channels, zero-padded to 130
/// time steps.
pub const TI46_CHANNELS: usize = 86;
pub const TI46_STEPS: usize = 130;

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSample {
    /// Time-ordered feature vectors (rows = steps).
    pub frames: Vec<Vec<f64>>,
    /// Class index into the dataset's `class_names`.
    pub label: usize,
    pub source_id: String,
    pub group: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceDataset {
    pub samples: Vec<SequenceSample>,
    pub class_names: Vec<String>,
}

impl SequenceDataset {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.samples
            .first()
            .and_then(|s| s.frames.first())
            .map_or(0, Vec::len)
    }
}

/// Per-feature min-max bounds fitted on training samples only.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    min: Vec<f64>,
    span: Vec<f64>,
}

impl Bounds {
    pub fn fit<'a>(samples: impl IntoIterator<Item = &'a SequenceSample>) -> Result<Self> {
        let mut min: Vec<f64> = Vec::new();
        let mut max: Vec<f64> = Vec::new();
        let mut seen = false;
        for s in samples {
            for frame in &s.frames {
                if !seen {
                    min = vec![f64::INFINITY; frame.len()];
                    max = vec![f64::NEG_INFINITY; frame.len()];
                    seen = true;
                }
                if frame.len() != min.len() {
                    return Err(Error::Shape(format!(
                        "frame dimension {} != {}",
                        frame.len(),
                        min.len()
                    )));
                }
                for ((lo, hi), &v) in min.iter_mut().zip(max.iter_mut()).zip(frame) {
                    *lo = lo.min(v);
                    *hi = hi.max(v);
                }
            }
        }
        if !seen {
            return Err(Error::InvalidInput("no frames to fit bounds on".into()));
        }
        let span = min.iter().zip(&max).map(|(lo, hi)| hi - lo).collect();
        Ok(Self { min, span })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Scales one value of feature `i` into [0,1] with clipping; constant
    /// features map to 0.
    pub fn scale(&self, i: usize, v: f64) -> f64 {
        if self.span[i] > 0.0 {
            ((v - self.min[i]) / self.span[i]).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Min-max scales every frame with training bounds; in TI-46 mode alsorejects
/// non-86-channel frames and zero-pads the time axis to 130 steps (after
/// scaling, so pads are exact zeros).
pub fn normalize_sequence(
    sample: &SequenceSample,
    bounds: &Bounds,
    ti46_mode: bool,
) -> Result<SequenceSample> {
    if ti46_mode {
        if bounds.dim() != TI46_CHANNELS
            || sample.frames.iter().any(|f| f.len() != TI46_CHANNELS)
        {
            return Err(Error::Format(format!(
                "TI-46 mode expects {TI46_CHANNELS} channels per frame"
            )));
        }
        if sample.frames.len() > TI46_STEPS {
            return Err(Error::Format(format!(
                "TI-46 mode expects at most {TI46_STEPS} steps, got {}",
                sample.frames.len()
            )));
        }
    }
    let mut frames: Vec<Vec<f64>> = sample
        .frames
        .iter()
        .map(|frame| {
            if frame.len() != bounds.dim() {
                return Err(Error::Shape(format!(
                    "frame dimension {} != fitted {}",
                    frame.len(),
                    bounds.dim()
                )));
            }
            Ok(frame
                .iter()
                .enumerate()
                .map(|(i, &v)| bounds.scale(i, v))
                .collect())
        })
        .collect::<Result<_>>()?;
    if ti46_mode {
        while frames.len() < TI46_STEPS {
            frames.push(vec![0.0; TI46_CHANNELS]);
        }
    }
    Ok(SequenceSample {
        frames,
        label: sample.label,
        source_id: sample.source_id.clone(),
        group: sample.group,
    })
}

pub fn load_sequence_dir(dir: &Path) -> Result<SequenceDataset> {
    let manifest = dir.join("manifest.csv");
    let text = fs::read_to_string(&manifest)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", manifest.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("file,label,source_id,group") => {}
        other => {
            return Err(Error::Format(format!(
                "manifest header must be 'file,label,source_id,group', got {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Format(format!(
                "manifest row {} has {} fields, expected 4",
                idx + 2,
                fields.len()
            )));
        }
        let group: u32 = fields[3].parse().map_err(|_| {
            Error::Format(format!("manifest row {}: bad group '{}'", idx + 2, fields[3]))
        })?;
        rows.push((
            fields[0].to_string(),
            fields[1].to_string(),
            fields[2].to_string(),
            group,
        ));
    }
    if rows.is_empty() {
        return Err(Error::Format("manifest lists no samples".into()));
    }
    let mut class_names: Vec<String> = rows.iter().map(|r| r.1.clone()).collect();
    class_names.sort();
    class_names.dedup();

    let mut samples = Vec::with_capacity(rows.len());
    for (file, label, source_id, group) in rows {
        let path = dir.join(&file);
        let frames = read_matrix(&path)?;
        let label = class_names.binary_search(&label).unwrap();
        samples.push(SequenceSample {
            frames,
            label,
            source_id,
            group,
        });
    }
    Ok(SequenceDataset {
        samples,
        class_names,
    })
}

fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim().parse().map_err(|_| {
                    Error::Format(format!(
                        "{}: row {}: bad number '{tok}'",
                        path.display(),
                        idx + 1
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(Error::Format(format!(
                "{}: row {} has {} columns, expected {}",
                path.display(),
                idx + 1,
                row.len(),
                width.unwrap()
            )));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Format(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

/// Writes a dataset in the manifest format. Deterministic: identical inputs
/// produce byte-identical files.
pub fn write_sequence_dir(dir: &Path, dataset: &SequenceDataset) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut manifest = String::from("file,label,source_id,group\n");
    for (i, s) in dataset.samples.iter().enumerate() {
        let file = format!("sample-{i:06}.csv");
        let mut body = String::new();
        for frame in &s.frames {
            let row: Vec<String> = frame.iter().map(f64::to_string).collect();
            body.push_str(&row.join(","));
            body.push('\n');
        }
        fs::write(dir.join(&file), body)?;
        manifest.push_str(&format!(
            "{file},{},{},{}\n",
            dataset.class_names[s.label], s.source_id, s.group
        ));
    }
    let mut f = fs::File::create(dir.join("manifest.csv"))?;
    f.write_all(manifest.as_bytes())?;
    Ok(())
}
