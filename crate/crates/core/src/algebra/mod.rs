//! The scalar tower: dual numbers, quaternions and dual quaternions.

mod dual_number;
mod dual_quaternion;
mod quaternion;

pub use dual_number::DualNumber;
pub use dual_quaternion::DualQuaternion;
pub use quaternion::Quaternion;
