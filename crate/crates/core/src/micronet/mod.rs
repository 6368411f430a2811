//! Minimal feed-forward network with explicit backpropagation, including gradients for
//! one shared `mu` (and optionally `alpha`) per activation layer.

pub mod layer;
pub mod loss;
pub mod network;
pub mod optim;
pub mod train;

pub use crate::tensor::Tensor2D;
pub use layer::{ActivationLayer, DenseLayer};
pub use loss::{accuracy, softmax_cross_entropy};
pub use network::{parse_model_spec, Layer, Network};
pub use optim::{Optimizer, OptimizerKind};
pub use train::{train, EpochRecord, Split, TrainConfig, TrainingLog};
