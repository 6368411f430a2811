//! Seeded synthetic datasets and CSV ingestion.
//!
//! Generators are pure functions of their arguments. Rows are emitted class by class
//! (all of class 0, then class 1) and every generated dataset carries a default
//! 80/20 train/test split drawn with the same seed.

mod csv_io;
pub mod rng;

use std::f64::consts::{PI, TAU};

use serde::Serialize;

pub use csv_io::{load_csv, write_csv};
pub use rng::Rng;

use crate::error::{Result, SmuError};
use crate::tensor::Tensor2D;

pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Tensor2D,
    pub labels: Vec<usize>,
    pub class_count: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Dataset description used by the command line and summaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum DatasetSpec {
    TwoMoons { samples: usize, noise: f64 },
    Spirals { samples: usize, turns: f64, noise: f64 },
    Csv { path: String, label_column: String },
}

impl DatasetSpec {
    pub fn build(&self, seed: u64, test_fraction: f64) -> Result<Dataset> {
        let ds = match self {
            DatasetSpec::TwoMoons { samples, noise } => make_two_moons(*samples, *noise, seed)?,
            DatasetSpec::Spirals { samples, turns, noise } => make_spirals(*samples, *turns, *noise, seed)?,
            DatasetSpec::Csv { path, label_column } => load_csv(path, label_column)?,
        };
        split(ds, test_fraction, seed)
    }
}

impl Dataset {
    /// Builds a dataset and checks labels and shapes; the split defaults to 80/20 with seed 0.
    pub fn new(features: Tensor2D, labels: Vec<usize>, class_count: usize) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(SmuError::Shape(format!("{} labels for {} feature rows", labels.len(), features.rows())));
        }
        if let Some(bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(SmuError::InvalidArgument(format!("label {bad} out of range for {class_count} classes")));
        }
        if !features.all_finite() {
            return Err(SmuError::InvalidArgument("features must be finite".into()));
        }
        let n = labels.len();
        let ds = Self { features, labels, class_count, train: (0..n).collect(), test: Vec::new() };
        if n >= 2 {
            split(ds, DEFAULT_TEST_FRACTION, 0)
        } else {
            Ok(ds)
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.cols()
    }

    pub fn subset(&self, indices: &[usize]) -> (Tensor2D, Vec<usize>) {
        (self.features.select_rows(indices), indices.iter().map(|&i| self.labels[i]).collect())
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}

/// Re-draws the train/test split.
///
/// A Fisher-Yates permutation of `0..n` is drawn from `Rng::new(seed)`; its first
/// `round(n * test_fraction)` entries (clamped to `1..=n-1`) form the test set.
/// Both index lists are returned sorted.
pub fn split(mut dataset: Dataset, test_fraction: f64, seed: u64) -> Result<Dataset> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(SmuError::InvalidArgument(format!("test fraction must lie in (0, 1), got {test_fraction}")));
    }
    let n = dataset.len();
    if n < 2 {
        return Err(SmuError::InvalidArgument(format!("cannot split {n} rows")));
    }
    let n_test = ((n as f64 * test_fraction).round() as usize).clamp(1, n - 1);
    let mut perm: Vec<usize> = (0..n).collect();
    Rng::new(seed).shuffle(&mut perm);
    let mut test = perm[..n_test].to_vec();
    let mut train = perm[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    dataset.train = train;
    dataset.test = test;
    Ok(dataset)
}

fn check_common(n: usize, noise: f64) -> Result<()> {
    if n < 2 {
        return Err(SmuError::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(SmuError::InvalidArgument(format!("noise must be finite and >= 0, got {noise}")));
    }
    Ok(())
}

fn finish(points: Vec<[f64; 2]>, labels: Vec<usize>, noise: f64, seed: u64) -> Result<Dataset> {
    let mut rng = Rng::new(seed);
    let mut data = Vec::with_capacity(points.len() * 2);
    for [x, y] in points {
        let nx = rng.normal();
        let ny = rng.normal();
        data.push(x + noise * nx);
        data.push(y + noise * ny);
    }
    let n = labels.len();
    let ds = Dataset {
        features: Tensor2D::from_vec(n, 2, data)?,
        labels,
        class_count: 2,
        train: Vec::new(),
        test: Vec::new(),
    };
    split(ds, DEFAULT_TEST_FRACTION, seed)
}

/// Two interleaved half-circles of radius 1.
///
/// Class 0 (`ceil(n/2)` points): `(cos t, sin t)`; class 1 (`floor(n/2)` points):
/// `(1 - cos t, 0.5 - sin t)`, with `t` evenly spaced over `[0, pi]` in each class.
/// Gaussian noise of standard deviation `noise` is added to x then y of each row in
/// row order.
pub fn make_two_moons(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    check_common(n, noise)?;
    let n0 = n.div_ceil(2);
    let n1 = n / 2;
    let angle = |i: usize, m: usize| if m > 1 { PI * i as f64 / (m - 1) as f64 } else { 0.0 };
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n0 {
        let t = angle(i, n0);
        points.push([t.cos(), t.sin()]);
        labels.push(0);
    }
    for i in 0..n1 {
        let t = angle(i, n1);
        points.push([1.0 - t.cos(), 0.5 - t.sin()]);
        labels.push(1);
    }
    finish(points, labels, noise, seed)
}

/// Two interleaved Archimedean spirals `r = t / 2pi`.
///
/// Point `i` of a class sits at `t = 2pi * turns * (i + 1) / m`; class 1 is class 0
/// rotated by `pi`. Noise as in [`make_two_moons`].
pub fn make_spirals(n: usize, turns: f64, noise: f64, seed: u64) -> Result<Dataset> {
    check_common(n, noise)?;
    if !(turns > 0.0 && turns.is_finite()) {
        return Err(SmuError::InvalidArgument(format!("turns must be > 0, got {turns}")));
    }
    let counts = [n.div_ceil(2), n / 2];
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (class, &m) in counts.iter().enumerate() {
        let sign = if class == 0 { 1.0 } else { -1.0 };
        for i in 0..m {
            let t = TAU * turns * (i + 1) as f64 / m as f64;
            let r = t / TAU;
            points.push([sign * r * t.cos(), sign * r * t.sin()]);
            labels.push(class);
        }
    }
    finish(points, labels, noise, seed)
}
