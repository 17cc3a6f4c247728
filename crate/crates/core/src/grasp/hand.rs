use super::geometry::{Segment, Vec2};
use crate::error::{Error, Result};

/// Rigid placement of the hand frame in the object frame. In the hand frame
/// the palm runs along x and the approach direction is +y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vec2,
    /// `(cos, sin)` of the hand heading.
    pub rotation: Vec2,
}

impl Pose {
    pub fn new(position: Vec2, heading: f64) -> Self {
        let (s, c) = heading.sin_cos();
        Self {
            position,
            rotation: Vec2::new(c, s),
        }
    }

    /// Pose whose approach axis (hand +y) points along `approach`.
    pub fn facing(position: Vec2, approach: Vec2) -> Result<Self> {
        let a = approach
            .normalized()
            .ok_or_else(|| Error::invalid("approach direction must be non-zero"))?;
        // R (0, 1) = (-sin, cos) = a
        Ok(Self {
            position,
            rotation: Vec2::new(a.y, -a.x),
        })
    }

    pub fn heading(&self) -> f64 {
        self.rotation.y.atan2(self.rotation.x)
    }

    pub fn apply_vector(&self, v: Vec2) -> Vec2 {
        let (c, s) = (self.rotation.x, self.rotation.y);
        Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.position + self.apply_vector(p)
    }

    /// Moves by `(dx, dy)` in the hand frame and turns by `dtheta` about the palm center.
    pub fn offset(&self, dx: f64, dy: f64, dtheta: f64) -> Pose {
        let (s, c) = dtheta.sin_cos();
        let (rc, rs) = (self.rotation.x, self.rotation.y);
        Pose {
            position: self.apply(Vec2::new(dx, dy)),
            rotation: Vec2::new(rc * c - rs * s, rs * c + rc * s),
        }
    }
}

/// One finger: a planar serial chain attached to the palm. Joint angles are
/// measured from the approach axis, positive turning away from the palm
/// center, and interpolate linearly from `open` to `closed` with the synergy.
#[derive(Debug, Clone, PartialEq)]
pub struct FingerChain {
    /// Attachment point in the hand frame.
    pub base: Vec2,
    /// `+1` for a finger on the +x side of the palm, `-1` for the -x side.
    pub side: f64,
    pub link_lengths: Vec<f64>,
    pub open_angles: Vec<f64>,
    pub closed_angles: Vec<f64>,
}

impl FingerChain {
    pub fn joint_angles(&self, s: f64) -> impl Iterator<Item = f64> + '_ {
        self.open_angles
            .iter()
            .zip(&self.closed_angles)
            .map(move |(o, c)| o + s * (c - o))
    }

    /// Link segments in the hand frame at synergy `s`.
    pub fn links(&self, s: f64) -> Vec<Segment> {
        let mut out = Vec::with_capacity(self.link_lengths.len());
        let mut p = self.base;
        let mut alpha = 0.0;
        for (len, q) in self.link_lengths.iter().zip(self.joint_angles(s)) {
            alpha += q;
            let (sa, ca) = alpha.sin_cos();
            let next = p + Vec2::new(self.side * sa, ca) * *len;
            out.push(Segment::new(p, next));
            p = next;
        }
        out
    }
}

/// Palm plus fingers driven by a single closing synergy `s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HandModel {
    pub palm_width: f64,
    pub fingers: Vec<FingerChain>,
}

impl HandModel {
    pub fn new(palm_width: f64, fingers: Vec<FingerChain>) -> Result<Self> {
        if !(palm_width > 0.0) {
            return Err(Error::invalid("palm width must be positive"));
        }
        for f in &fingers {
            let n = f.link_lengths.len();
            if n == 0 || f.open_angles.len() != n || f.closed_angles.len() != n {
                return Err(Error::invalid("finger needs matching link and angle lists"));
            }
            if f.link_lengths.iter().any(|l| !(*l > 0.0)) {
                return Err(Error::invalid("link lengths must be positive"));
            }
            if f.side != 1.0 && f.side != -1.0 {
                return Err(Error::invalid("finger side must be +1 or -1"));
            }
        }
        Ok(Self {
            palm_width,
            fingers,
        })
    }

    /// Two mirrored three-link fingers on a 9 cm palm, closing in a power grasp.
    pub fn two_finger() -> Self {
        let finger = |side: f64| FingerChain {
            base: Vec2::new(side * 0.045, 0.0),
            side,
            link_lengths: vec![0.05, 0.04, 0.03],
            open_angles: vec![0.45, 0.0, 0.0],
            closed_angles: vec![-0.55, -1.1, -1.0],
        };
        Self::new(0.09, vec![finger(-1.0), finger(1.0)]).expect("valid default hand")
    }

    /// Total number of finger joints.
    pub fn joint_count(&self) -> usize {
        self.fingers.iter().map(|f| f.link_lengths.len()).sum()
    }

    pub fn palm(&self) -> Segment {
        Segment::new(
            Vec2::new(-0.5 * self.palm_width, 0.0),
            Vec2::new(0.5 * self.palm_width, 0.0),
        )
    }

    /// Links of finger `i` in the object frame.
    pub fn finger_links(&self, pose: &Pose, i: usize, s: f64) -> Vec<Segment> {
        self.fingers[i]
            .links(s)
            .into_iter()
            .map(|l| Segment::new(pose.apply(l.a), pose.apply(l.b)))
            .collect()
    }

    pub fn palm_at(&self, pose: &Pose) -> Segment {
        let p = self.palm();
        Segment::new(pose.apply(p.a), pose.apply(p.b))
    }
}
