//! Planar grasp simulator: polygonal objects, a synergy-driven hand,
//! collision counting, contact extraction and the wrench-volume metric.

pub mod geometry;
mod hand;
mod hull;
mod scene;
mod shape;

pub use hand::{FingerChain, HandModel, Pose};
pub use hull::{convex_hull, convex_hull_volume, grasp_wrench_volume, Point3};
pub use scene::{
    close_fingers, colliding_joints, contact_wrenches, evaluate_grasp, evaluate_pose, place_hand,
    Contact, GraspOutcome, GraspScene, Placement, PoseBounds, SearchMode, CLOSING_STEP,
    DEFAULT_FRICTION, TOUCH_TOLERANCE,
};
pub use shape::{BoundaryProximity, ObjectShape};
