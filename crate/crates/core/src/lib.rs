//! Kinematics, stiffness estimation, empirical pressure maps and a grasp
//! model for a pneumatically actuated hybrid soft robot (HSR) section with
//! an inextensible backbone.

pub mod arc;
pub mod config;
pub mod error;
pub mod estimation;
pub mod gripper;
pub mod kinematics;
pub mod maps;
pub mod pma;

pub use arc::{
    arc_from_joints, joints_from_arc, validate_joint_constraint, ArcParams, JointState, RobotGeometry,
};
pub use config::HsrConfig;
pub use error::{Error, Result};
pub use estimation::{estimate_stiffness, fit_arc, peak_failure_force, MarkerSet, PerturbationRecord, TrackerSequence};
pub use gripper::{close_grasp, failure_force, GraspObject, GraspState, GripperConfig, ObjectShape};
pub use kinematics::{backbone_curve, pose_at, sample_workspace, Pose};
pub use maps::{
    pressures_for_shape_and_stiffness, shape_for_pressures, stiffness_at, stiffness_range_increase, Dataset,
    GridLabel, ShapeStiffnessTable, StiffnessGrid,
};
pub use pma::{free_extension, PmaSpec};
