//! Cross-validation protocols. All partitions are deterministic functions of
//! the shuffle seed; test sets within a protocol are pairwise disjoint.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seven disjoint 10000-sample test blocks over a pool of exactly 70000,
/// so every sample is tested exactly once.
pub fn cv_mnist_7fold(pool: usize, seed: u64) -> Result<Vec<Split>> {
    if pool != 70000 {
        return Err(Error::Protocol(format!(
            "the 7-fold MNIST protocol needs exactly 70000 samples, got {pool}"
        )));
    }
    let mut order: Vec<usize> = (0..pool).collect();
    order.shuffle(&mut stream(seed, "mnist-7fold"));
    let folds = 7;
    let block = pool / folds;
    Ok((0..folds)
        .map(|f| {
            let test: Vec<usize> = order[f * block..(f + 1) * block].to_vec();
            let train: Vec<usize> = order[..f * block]
                .iter()
                .chain(&order[(f + 1) * block..])
                .copied()
                .collect();
            Split { train, test }
        })
        .collect())
}

/// Ten balanced groups: class indices are shuffled per class and dealt
/// round-robin through a running cursor, so at the paper scale (50 per
/// digit) every group holds exactly 5 samples of each digit. Each group is
/// then shuffled once; fold k tests group k.
pub fn cv_ti46_grouped(labels: &[usize], n_classes: usize, seed: u64) -> Result<Vec<Split>> {
    let n = labels.len();
    let groups = 10;
    if n == 0 || n % groups != 0 {
        return Err(Error::Protocol(format!(
            "grouped protocol needs a multiple of {groups} samples, got {n}"
        )));
    }
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        if l >= n_classes {
            return Err(Error::Protocol(format!("label {l} outside 0..{n_classes}")));
        }
        per_class[l].push(i);
    }
    let counts: Vec<usize> = per_class.iter().map(Vec::len).collect();
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(Error::Protocol(format!(
            "grouped protocol needs balanced classes, got counts {counts:?}"
        )));
    }

    let mut group_members: Vec<Vec<usize>> = vec![Vec::new(); groups];
    let mut cursor = 0usize;
    for (c, members) in per_class.iter_mut().enumerate() {
        members.shuffle(&mut stream(seed, &format!("ti46-deal-{c}")));
        for &idx in members.iter() {
            group_members[cursor % groups].push(idx);
            cursor += 1;
        }
    }
    for (g, members) in group_members.iter_mut().enumerate() {
        members.shuffle(&mut stream(seed, &format!("ti46-group-{g}")));
    }

    Ok((0..groups)
        .map(|g| {
            let test = group_members[g].clone();
            let train = group_members
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != g)
                .flat_map(|(_, m)| m.iter().copied())
                .collect();
            Split { train, test }
        })
        .collect())
}

/// Two folds testing only the central temporal segments: fold A tests all
/// segment-2 samples, fold B all segment-3 samples; the other three segments
/// train. Each source must contribute exactly the segments 1..=4.
pub fn cv_kth_central(samples: &[(String, u32)]) -> Result<Vec<Split>> {
    use std::collections::BTreeMap;
    let mut by_source: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
    for (source, segment) in samples {
        by_source.entry(source.as_str()).or_default().push(*segment);
    }
    for (source, mut segments) in by_source {
        segments.sort_unstable();
        if segments != [1, 2, 3, 4] {
            return Err(Error::Protocol(format!(
                "source '{source}' has segments {segments:?}, expected exactly 1..=4"
            )));
        }
    }
    let fold = |test_segment: u32| -> Split {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, (_, segment)) in samples.iter().enumerate() {
            if *segment == test_segment {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        Split { train, test }
    };
    Ok(vec![fold(2), fold(3)])
}

/// Single seeded holdout split.
pub fn holdout_split(n: usize, train_fraction: f64, seed: u64) -> Result<Vec<Split>> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Protocol(format!(
            "holdout train fraction {train_fraction} outside (0,1)"
        )));
    }
    let n_train = (n as f64 * train_fraction).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::Protocol(format!(
            "holdout of {n} samples at fraction {train_fraction} leaves an empty side"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream(seed, "holdout"));
    Ok(vec![Split {
        train: order[..n_train].to_vec(),
        test: order[n_train..].to_vec(),
    }])
}
