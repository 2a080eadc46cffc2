//! SE(3) and SO(3) representations and conversions.

mod pose;
mod rotation;
pub mod vec3;

pub use pose::{dq_act_on_point, is_unit_dq, project_to_unit_dq, unit_dq_deviation, Mat4Pose, Se3Element};
pub use rotation::{
    project_to_so3, quat_from_rotmat, rotation_distance, rotmat_from_quat, so3_apply, translation_distance, AxisAngle,
};
pub use vec3::{Matrix3, Vector3};

#[allow(unused_imports)]
pub(crate) use rotation::rotate;
