//! Smooth Maximum Unit activations.
//!
//! - [`activation`]: erf, smooth maxima, SMU / SMU-1, baselines and their derivatives.
//! - [`gradcheck`]: central-difference oracle for any of the above.
//! - [`micronet`]: a small dense network with trainable activation parameters.
//! - [`datasets`]: seeded synthetic datasets and CSV ingestion.

pub mod activation;
pub mod datasets;
pub mod error;
pub mod gradcheck;
pub mod micronet;
pub mod tensor;

pub use activation::{ActivationKind, Param, Preset, SmuParams};
pub use error::{Result, SmuError};
