//! Planar vector, segment and polygon primitives.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    /// Rotated by +90°.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
}

impl Segment {
    pub const fn new(a: Vec2, b: Vec2) -> Self {
        Self { a, b }
    }

    pub fn midpoint(&self) -> Vec2 {
        self.a.lerp(self.b, 0.5)
    }

    pub fn direction(&self) -> Vec2 {
        self.b - self.a
    }

    /// Closest point on the segment to `p`, with its parameter in `[0, 1]`.
    pub fn closest_point(&self, p: Vec2) -> (Vec2, f64) {
        let d = self.direction();
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return (self.a, 0.0);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        (self.a + d * t, t)
    }

    pub fn distance_to_point(&self, p: Vec2) -> f64 {
        (self.closest_point(p).0 - p).norm()
    }

    /// Proper or touching intersection, collinear overlaps included.
    pub fn intersects(&self, o: &Segment) -> bool {
        let d1 = orient(o.a, o.b, self.a);
        let d2 = orient(o.a, o.b, self.b);
        let d3 = orient(self.a, self.b, o.a);
        let d4 = orient(self.a, self.b, o.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        (d1 == 0.0 && on_segment(o, self.a))
            || (d2 == 0.0 && on_segment(o, self.b))
            || (d3 == 0.0 && on_segment(self, o.a))
            || (d4 == 0.0 && on_segment(self, o.b))
    }
}

/// Sign of the turn `a → b → c` (positive for counter-clockwise), exact.
pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

fn on_segment(s: &Segment, p: Vec2) -> bool {
    p.x >= s.a.x.min(s.b.x)
        && p.x <= s.a.x.max(s.b.x)
        && p.y >= s.a.y.min(s.b.y)
        && p.y <= s.a.y.max(s.b.y)
}

/// Closest pair between a query segment and a target segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestPair {
    pub distance: f64,
    /// Point on the target segment.
    pub on_target: Vec2,
    /// Parameter of `on_target` along the target segment.
    pub target_t: f64,
}

pub fn segment_closest_pair(query: &Segment, target: &Segment) -> ClosestPair {
    if query.intersects(target) {
        // any intersection point works; take the one nearest the query start
        let (p, t) = intersection_point(query, target);
        return ClosestPair {
            distance: 0.0,
            on_target: p,
            target_t: t,
        };
    }
    let mut best = {
        let (p, t) = target.closest_point(query.a);
        ClosestPair {
            distance: (p - query.a).norm(),
            on_target: p,
            target_t: t,
        }
    };
    let (p, t) = target.closest_point(query.b);
    let d = (p - query.b).norm();
    if d < best.distance {
        best = ClosestPair {
            distance: d,
            on_target: p,
            target_t: t,
        };
    }
    for (v, t) in [(target.a, 0.0), (target.b, 1.0)] {
        let d = query.distance_to_point(v);
        if d < best.distance {
            best = ClosestPair {
                distance: d,
                on_target: v,
                target_t: t,
            };
        }
    }
    best
}

fn intersection_point(query: &Segment, target: &Segment) -> (Vec2, f64) {
    let r = query.direction();
    let s = target.direction();
    let denom = r.cross(s);
    if denom != 0.0 {
        let u = ((target.a - query.a).cross(r) / denom).clamp(0.0, 1.0);
        return (target.a + s * u, u);
    }
    // collinear overlap: use whichever endpoint lies on the other segment
    for (p, t) in [(target.a, 0.0), (target.b, 1.0)] {
        if query.distance_to_point(p) == 0.0 {
            return (p, t);
        }
    }
    let (p, t) = target.closest_point(query.a);
    (p, t)
}

/// Shoelace signed area (positive for counter-clockwise).
pub fn signed_area(points: &[Vec2]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| points[i].cross(points[(i + 1) % n]))
        .sum::<f64>()
}

/// Area centroid of a simple polygon.
pub fn centroid(points: &[Vec2]) -> Vec2 {
    let n = points.len();
    let a = signed_area(points);
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let (p, q) = (points[i], points[(i + 1) % n]);
        let c = p.cross(q);
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    Vec2::new(cx / (6.0 * a), cy / (6.0 * a))
}

/// Crossing-number point-in-polygon test (boundary points count as inside).
pub fn point_in_polygon(points: &[Vec2], p: Vec2) -> bool {
    let n = points.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        if Segment::new(a, b).distance_to_point(p) == 0.0 {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}
