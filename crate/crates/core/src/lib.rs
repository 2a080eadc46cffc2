//! SE(3) synchronization by spectral methods over the dual quaternions.
//!
//! The scalar tower ([`algebra`]), the rigid-motion representations
//! ([`se3`]) and dual-quaternion linear algebra ([`dq_linalg`]) are generic
//! over [`Real`] and work in `f32` or `f64`. The solvers ([`sync`]) and the
//! synthetic benchmark ([`bench`]) run in `f64`.

pub mod algebra;
pub mod bench;
pub mod dq_linalg;
pub mod error;
pub mod scalar;
pub mod se3;
pub mod sync;

pub use algebra::{DualNumber, DualQuaternion, Quaternion};
pub use dq_linalg::{power_iteration, DqMatrix, DqVector, PowerIterationOptions, PowerIterationResult};
pub use error::{Error, Result};
pub use scalar::Real;
pub use se3::{Mat4Pose, Se3Element};
pub use sync::{Method, MeasurementProblem, SolverOptions, SyncEstimate};

pub type DualNumber64 = DualNumber<f64>;
pub type DualNumber32 = DualNumber<f32>;
pub type Quaternion64 = Quaternion<f64>;
pub type Quaternion32 = Quaternion<f32>;
pub type DualQuaternion64 = DualQuaternion<f64>;
pub type DualQuaternion32 = DualQuaternion<f32>;
pub type Se3Element64 = Se3Element<f64>;
pub type Se3Element32 = Se3Element<f32>;
pub type Mat4Pose64 = Mat4Pose<f64>;
pub type DqVector64 = DqVector<f64>;
pub type DqVector32 = DqVector<f32>;
pub type DqMatrix64 = DqMatrix<f64>;
pub type DqMatrix32 = DqMatrix<f32>;
