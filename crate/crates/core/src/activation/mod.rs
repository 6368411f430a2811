//! Scalar activation math: erf, smooth maxima, SMU / SMU-1 and baselines, with
//! analytic derivatives. Everything here is a pure function of its arguments.

pub mod baseline;
pub mod erf;
pub mod kind;
pub mod smooth_max;
pub mod smu;

pub use erf::{erf, erfc};
pub use kind::{ActivationKind, Param, ACTIVATION_NAMES};
pub use smooth_max::{hard_max, smooth_max_erf, smooth_max_sqrt};
pub use smu::{
    smu, smu1, smu1_dalpha, smu1_dmu, smu1_dx, smu1_grads, smu_dalpha, smu_dmu, smu_dx, smu_grads, LocalGrad, Preset,
    SmuParams,
};
