use std::f64::consts::FRAC_PI_3;

use super::geometry::{Segment, Vec2};
use super::hand::{HandModel, Pose};
use super::hull::{grasp_wrench_volume, Point3};
use super::shape::ObjectShape;
use crate::error::{Error, Result};

/// Synergy increment while closing the fingers.
pub const CLOSING_STEP: f64 = 1e-3;
/// A link touches the object when its distance to the boundary is at most this (m).
pub const TOUCH_TOLERANCE: f64 = 1e-6;
/// Bisection rounds used to pin down the first touching synergy value
/// inside a closing step.
const TOUCH_BISECTIONS: usize = 48;
pub const DEFAULT_FRICTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// `(δx, δy)`: lateral offset and approach offset.
    Translation,
    /// `(δx, δy, δθ)`: translations plus palm rotation.
    TranslationRotation,
}

impl SearchMode {
    pub fn dimension(self) -> usize {
        match self {
            SearchMode::Translation => 2,
            SearchMode::TranslationRotation => 3,
        }
    }
}

/// Offset box in the canonical hand frame. `dy > 0` moves toward the object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseBounds {
    pub dx: (f64, f64),
    pub dy: (f64, f64),
    pub dtheta: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    /// Contact location on the object boundary (object frame).
    pub point: Vec2,
    /// Unit surface normal pointing into the object.
    pub normal: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraspOutcome {
    pub quality: f64,
    pub colliding_joints: usize,
    pub contacts: Vec<Contact>,
    pub collided: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub pose: Pose,
    pub colliding_joints: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraspScene {
    pub object: ObjectShape,
    pub hand: HandModel,
    pub canonical: Pose,
    pub bounds: PoseBounds,
    pub mode: SearchMode,
    pub friction_coefficient: f64,
    pub torque_scale: f64,
}

fn lerp((lo, hi): (f64, f64), u: f64) -> f64 {
    lo + u * (hi - lo)
}

impl GraspScene {
    pub fn new(
        object: ObjectShape,
        hand: HandModel,
        canonical: Pose,
        bounds: PoseBounds,
        mode: SearchMode,
        friction_coefficient: f64,
    ) -> Result<Self> {
        let (tlo, thi) = bounds.dtheta;
        if tlo != -thi {
            return Err(Error::invalid("rotation bounds must be symmetric about zero"));
        }
        for (lo, hi) in [bounds.dx, bounds.dy, bounds.dtheta] {
            if !(lo <= hi) {
                return Err(Error::invalid("pose bounds must satisfy lo <= hi"));
            }
        }
        if !(friction_coefficient >= 0.0) {
            return Err(Error::invalid("friction coefficient must be non-negative"));
        }
        let torque_scale = object.max_radius();
        Ok(Self {
            object,
            hand,
            canonical,
            bounds,
            mode,
            friction_coefficient,
            torque_scale,
        })
    }

    /// One of the bundled scenes: `glass`, `bottle` or `mug`, approached
    /// from the +y side with the default two-finger hand.
    pub fn bundled(name: &str, mode: SearchMode) -> Result<Self> {
        let (object, facet_y, half_lateral) = match name {
            "glass" => (ObjectShape::glass(), 0.045, 0.035),
            "bottle" => (ObjectShape::bottle(), 0.085, 0.035),
            // canonical pose touches the body, so the handle lies inside the search box
            "mug" => (ObjectShape::mug(), 0.045, 0.04),
            other => return Err(Error::invalid(format!("unknown object '{other}'"))),
        };
        let canonical = Pose::facing(
            Vec2::new(object.centroid().x, facet_y + 0.001),
            Vec2::new(0.0, -1.0),
        )?;
        let bounds = PoseBounds {
            dx: (-half_lateral, half_lateral),
            dy: (-0.07, 0.0),
            dtheta: (-FRAC_PI_3, FRAC_PI_3),
        };
        Self::new(object, HandModel::two_finger(), canonical, bounds, mode, DEFAULT_FRICTION)
    }

    pub fn dimension(&self) -> usize {
        self.mode.dimension()
    }

    /// `(δx, δy, δθ)` for a point of the unit hypercube.
    pub fn offsets(&self, u: &[f64]) -> Result<(f64, f64, f64)> {
        if u.len() != self.dimension() {
            return Err(Error::invalid(format!(
                "scene searches {} dimensions, got a {}-dimensional point",
                self.dimension(),
                u.len()
            )));
        }
        let dtheta = match self.mode {
            SearchMode::Translation => 0.0,
            SearchMode::TranslationRotation => lerp(self.bounds.dtheta, u[2]),
        };
        Ok((lerp(self.bounds.dx, u[0]), lerp(self.bounds.dy, u[1]), dtheta))
    }

    pub fn pose_at_offsets(&self, dx: f64, dy: f64, dtheta: f64) -> Pose {
        self.canonical.offset(dx, dy, dtheta)
    }

    fn finger_touching(&self, pose: &Pose, finger: usize, s: f64) -> bool {
        let reach = self.object.max_radius() + TOUCH_TOLERANCE;
        let c = self.object.centroid();
        self.hand.finger_links(pose, finger, s).iter().any(|l| {
            l.distance_to_point(c) <= reach
                && (self.object.proximity(l).distance <= TOUCH_TOLERANCE
                    || self.object.contains(l.midpoint()))
        })
    }
}

/// Number of hand joints whose adjacent links overlap the object when the
/// open hand is placed at `pose`. The palm counts as the proximal link of
/// every finger's base joint.
pub fn colliding_joints(scene: &GraspScene, pose: &Pose) -> usize {
    let overlaps = |s: &Segment| scene.object.overlaps_segment(s);
    let palm = overlaps(&scene.hand.palm_at(pose));
    let mut count = 0;
    for f in 0..scene.hand.fingers.len() {
        let hits: Vec<bool> = scene
            .hand
            .finger_links(pose, f, 0.0)
            .iter()
            .map(overlaps)
            .collect();
        for k in 0..hits.len() {
            let proximal = if k == 0 { palm } else { hits[k - 1] };
            if hits[k] || proximal {
                count += 1;
            }
        }
    }
    count
}

pub fn place_hand(scene: &GraspScene, u: &[f64]) -> Result<Placement> {
    let (dx, dy, dt) = scene.offsets(u)?;
    let pose = scene.pose_at_offsets(dx, dy, dt);
    Ok(Placement {
        pose,
        colliding_joints: colliding_joints(scene, &pose),
    })
}

/// Synergy value at which `finger` first touches the object, or `None` if
/// it closes completely without contact.
fn freeze_synergy(scene: &GraspScene, pose: &Pose, finger: usize) -> Option<f64> {
    let steps = (1.0 / CLOSING_STEP).round() as usize;
    if scene.finger_touching(pose, finger, 0.0) {
        return Some(0.0);
    }
    for k in 1..=steps {
        let s = k as f64 / steps as f64;
        if scene.finger_touching(pose, finger, s) {
            let (mut lo, mut hi) = ((k - 1) as f64 / steps as f64, s);
            for _ in 0..TOUCH_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if scene.finger_touching(pose, finger, mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
    }
    None
}

/// Closes every finger along the synergy until it touches the object and
/// returns one contact per touching link.
pub fn close_fingers(scene: &GraspScene, pose: &Pose) -> Result<Vec<Contact>> {
    let n_j = colliding_joints(scene, pose);
    if n_j > 0 {
        return Err(Error::State(format!(
            "cannot close the hand: {n_j} joints already collide"
        )));
    }
    let mut contacts = Vec::new();
    for f in 0..scene.hand.fingers.len() {
        let Some(s) = freeze_synergy(scene, pose, f) else {
            continue;
        };
        for link in scene.hand.finger_links(pose, f, s) {
            let p = scene.object.proximity(&link);
            if p.distance <= TOUCH_TOLERANCE {
                contacts.push(Contact {
                    point: p.point,
                    normal: p.inward_normal,
                });
            }
        }
    }
    Ok(contacts)
}

/// Planar friction-cone edge wrenches `(f_x, f_y, τ/ρ)` for each contact.
/// Contact points are taken relative to the torque origin (the object centroid).
pub fn contact_wrenches(
    contacts: &[Contact],
    friction_coefficient: f64,
    torque_scale: f64,
) -> Result<Vec<Point3>> {
    if !(torque_scale > 0.0) {
        return Err(Error::invalid("torque scale must be positive"));
    }
    let mut out = Vec::with_capacity(2 * contacts.len());
    for c in contacts {
        let n = c
            .normal
            .normalized()
            .ok_or_else(|| Error::invalid("contact normal must be non-zero"))?;
        let t = n.perp();
        for sign in [1.0, -1.0] {
            let f = (n + t * (sign * friction_coefficient))
                .normalized()
                .expect("non-zero cone edge");
            out.push([f.x, f.y, c.point.cross(f) / torque_scale]);
        }
    }
    Ok(out)
}

/// Grasp outcome at an explicit hand pose.
pub fn evaluate_pose(scene: &GraspScene, pose: &Pose) -> GraspOutcome {
    let n_j = colliding_joints(scene, pose);
    if n_j > 0 {
        return GraspOutcome {
            quality: 0.0,
            colliding_joints: n_j,
            contacts: Vec::new(),
            collided: true,
        };
    }
    let contacts = close_fingers(scene, pose).expect("collision-free pose");
    let centroid = scene.object.centroid();
    let relative: Vec<Contact> = contacts
        .iter()
        .map(|c| Contact {
            point: c.point - centroid,
            normal: c.normal,
        })
        .collect();
    let wrenches = contact_wrenches(&relative, scene.friction_coefficient, scene.torque_scale)
        .expect("bundled normals are unit length");
    GraspOutcome {
        quality: grasp_wrench_volume(&wrenches),
        colliding_joints: 0,
        contacts,
        collided: false,
    }
}

/// Places the hand at the pose encoded by `u`, and if it does not collide,
/// closes the fingers and scores the grasp by its wrench-space volume.
pub fn evaluate_grasp(scene: &GraspScene, u: &[f64]) -> Result<GraspOutcome> {
    let (dx, dy, dt) = scene.offsets(u)?;
    Ok(evaluate_pose(scene, &scene.pose_at_offsets(dx, dy, dt)))
}
