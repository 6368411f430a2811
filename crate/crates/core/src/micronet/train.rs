use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::network::Network;
use super::optim::{Optimizer, OptimizerKind};
use crate::activation::Preset;
use crate::datasets::{Dataset, Rng};
use crate::error::{Result, SmuError};

/// Offset between the weight-init stream and the batch-order stream of one seed.
const BATCH_STREAM: u64 = 0xB47C_40D3_5EED_0001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub seed: u64,
    pub preset: Preset,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 200,
            batch_size: 64,
            learning_rate: 0.05,
            optimizer: OptimizerKind::MOMENTUM,
            seed: 0,
            preset: Preset::Classification,
        }
    }
}

impl TrainConfig {
    /// `learning_rate = 0` is accepted and leaves every parameter untouched.
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(SmuError::InvalidArgument("epochs must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(SmuError::InvalidArgument("batch size must be >= 1".into()));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(SmuError::InvalidArgument(format!(
                "learning rate must be finite and >= 0, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub split: Split,
    pub loss: f64,
    pub accuracy: f64,
    pub mus: Vec<f64>,
}

/// Per-epoch metrics; epoch 0 is the untrained network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingLog {
    pub mu_layers: usize,
    pub records: Vec<EpochRecord>,
}

impl TrainingLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,split,loss,accuracy");
        for i in 0..self.mu_layers {
            let _ = write!(out, ",mu_layer{i}");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{},{},{},{}", r.epoch, r.split.as_str(), r.loss, r.accuracy);
            for m in &r.mus {
                let _ = write!(out, ",{m}");
            }
            out.push('\n');
        }
        out
    }

    fn last(&self, split: Split) -> Option<&EpochRecord> {
        self.records.iter().rev().find(|r| r.split == split)
    }

    pub fn final_train(&self) -> Option<&EpochRecord> {
        self.last(Split::Train)
    }

    pub fn final_test(&self) -> Option<&EpochRecord> {
        self.last(Split::Test)
    }

    pub fn initial_mus(&self) -> &[f64] {
        self.records.first().map_or(&[], |r| &r.mus)
    }

    pub fn final_mus(&self) -> &[f64] {
        self.records.last().map_or(&[], |r| &r.mus)
    }

    /// `mu` of every activation layer, one entry per epoch (train rows).
    pub fn mu_trajectory(&self) -> Vec<Vec<f64>> {
        self.records.iter().filter(|r| r.split == Split::Train).map(|r| r.mus.clone()).collect()
    }
}

fn record(network: &Network, dataset: &Dataset, epoch: usize, log: &mut TrainingLog) -> Result<()> {
    let mus = network.mus();
    for (split, idx) in [(Split::Train, &dataset.train), (Split::Test, &dataset.test)] {
        if idx.is_empty() {
            continue;
        }
        let (x, y) = dataset.subset(idx);
        let (loss, accuracy) = network.evaluate(&x, &y)?;
        if !loss.is_finite() {
            return Err(SmuError::Divergence { epoch, location: format!("{} loss", split.as_str()) });
        }
        log.records.push(EpochRecord { epoch, split, loss, accuracy, mus: mus.clone() });
    }
    Ok(())
}

/// Mini-batch training on `dataset.train`, evaluating both splits after every epoch.
///
/// Batch order comes from its own stream seeded by `config.seed`, so runs that share a
/// seed see identical batches regardless of the activation.
pub fn train(network: &mut Network, dataset: &Dataset, config: &TrainConfig) -> Result<TrainingLog> {
    config.validate()?;
    if dataset.train.is_empty() {
        return Err(SmuError::InvalidArgument("dataset has no training rows".into()));
    }
    if network.input_dim() != Some(dataset.feature_dim()) {
        return Err(SmuError::Config(format!(
            "network input width {:?} does not match {} features",
            network.input_dim(),
            dataset.feature_dim()
        )));
    }
    if network.output_dim() != Some(dataset.class_count) {
        return Err(SmuError::Config(format!(
            "network output width {:?} does not match {} classes",
            network.output_dim(),
            dataset.class_count
        )));
    }

    let mut log = TrainingLog { mu_layers: network.mus().len(), records: Vec::with_capacity(2 * (config.epochs + 1)) };
    record(network, dataset, 0, &mut log)?;

    let mut rng = Rng::new(config.seed ^ BATCH_STREAM);
    let mut optimizer = Optimizer::new(config.optimizer, network.param_count());
    let mut order = dataset.train.clone();
    let mut params = network.params();

    for epoch in 1..=config.epochs {
        rng.shuffle(&mut order);
        for batch in order.chunks(config.batch_size) {
            let (x, y) = dataset.subset(batch);
            let (loss, grads) = network.loss_and_grad(&x, &y).map_err(|e| match e {
                SmuError::Divergence { location, .. } => SmuError::Divergence { epoch, location },
                other => other,
            })?;
            if !loss.is_finite() {
                return Err(SmuError::Divergence { epoch, location: "training loss".into() });
            }
            if config.learning_rate == 0.0 {
                continue;
            }
            optimizer.step(&mut params, &grads, config.learning_rate);
            network.set_params(&params)?;
            if params.iter().any(|p| !p.is_finite()) {
                return Err(SmuError::Divergence {
                    epoch,
                    location: network.first_non_finite_layer().unwrap_or_else(|| "parameters".into()),
                });
            }
        }
        record(network, dataset, epoch, &mut log)?;
    }
    Ok(log)
}
