use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::Path;

use super::geometry::{centroid, point_in_polygon, segment_closest_pair, signed_area, Segment, Vec2};
use crate::error::{Error, Result};

/// Closest boundary feature to a query segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryProximity {
    pub distance: f64,
    pub point: Vec2,
    /// Unit normal pointing into the object at `point`.
    pub inward_normal: Vec2,
}

/// A simple, counter-clockwise polygon in meters; may be non-convex.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectShape {
    name: String,
    boundary: Vec<Vec2>,
    centroid: Vec2,
    edge_normals: Vec<Vec2>,
}

impl ObjectShape {
    pub fn new(name: impl Into<String>, boundary: Vec<Vec2>) -> Result<Self> {
        let name = name.into();
        if boundary.len() < 3 {
            return Err(Error::invalid(format!("object '{name}' needs at least 3 vertices")));
        }
        if boundary.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::invalid(format!("object '{name}' has non-finite vertices")));
        }
        if !(signed_area(&boundary) > 0.0) {
            return Err(Error::invalid(format!(
                "object '{name}' must be listed counter-clockwise"
            )));
        }
        let n = boundary.len();
        let edge = |i: usize| Segment::new(boundary[i], boundary[(i + 1) % n]);
        for i in 0..n {
            if edge(i).direction().norm() == 0.0 {
                return Err(Error::invalid(format!("object '{name}' repeats vertex {i}")));
            }
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if edge(i).intersects(&edge(j)) {
                    return Err(Error::invalid(format!(
                        "object '{name}' is not simple: edges {i} and {j} intersect"
                    )));
                }
            }
        }
        let edge_normals = (0..n)
            .map(|i| edge(i).direction().perp().normalized().unwrap())
            .collect();
        Ok(Self {
            centroid: centroid(&boundary),
            name,
            boundary,
            edge_normals,
        })
    }

    /// Parses one `x y` vertex pair per line. Blank lines and `#` comments are skipped.
    pub fn from_text(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[x, y]) => pts.push(Vec2::new(x, y)),
                _ => {
                    return Err(Error::invalid(format!(
                        "line {}: expected two numbers, got '{line}'",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(name, pts)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "object".into());
        Self::from_text(name, &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn boundary(&self) -> &[Vec2] {
        &self.boundary
    }

    pub fn centroid(&self) -> Vec2 {
        self.centroid
    }

    /// Largest distance from the centroid to the boundary.
    pub fn max_radius(&self) -> f64 {
        self.boundary
            .iter()
            .map(|&p| (p - self.centroid).norm())
            .fold(0.0, f64::max)
    }

    /// `(min, max)` of `p · dir` over the boundary.
    pub fn extent_along(&self, dir: Vec2) -> (f64, f64) {
        self.boundary
            .iter()
            .map(|p| p.dot(dir))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.boundary.len();
        (0..n).map(move |i| Segment::new(self.boundary[i], self.boundary[(i + 1) % n]))
    }

    pub fn contains(&self, p: Vec2) -> bool {
        point_in_polygon(&self.boundary, p)
    }

    /// True when the segment crosses or touches the boundary, or lies inside.
    pub fn overlaps_segment(&self, s: &Segment) -> bool {
        self.edges().any(|e| e.intersects(s)) || self.contains(s.midpoint())
    }

    /// Distance from a segment to the boundary with the closest boundary point
    /// and the inward normal there (averaged at vertices).
    pub fn proximity(&self, s: &Segment) -> BoundaryProximity {
        let n = self.boundary.len();
        let mut best: Option<(usize, super::geometry::ClosestPair)> = None;
        for (i, e) in self.edges().enumerate() {
            let c = segment_closest_pair(s, &e);
            if best.map_or(true, |(_, b)| c.distance < b.distance) {
                best = Some((i, c));
            }
        }
        let (i, c) = best.expect("polygon has edges");
        const VERTEX_T: f64 = 1e-9;
        let inward_normal = if c.target_t <= VERTEX_T {
            (self.edge_normals[i] + self.edge_normals[(i + n - 1) % n])
                .normalized()
                .unwrap_or(self.edge_normals[i])
        } else if c.target_t >= 1.0 - VERTEX_T {
            (self.edge_normals[i] + self.edge_normals[(i + 1) % n])
                .normalized()
                .unwrap_or(self.edge_normals[i])
        } else {
            self.edge_normals[i]
        };
        BoundaryProximity {
            distance: c.distance,
            point: c.on_target,
            inward_normal,
        }
    }

    // -- bundled objects ----------------------------------------------------

    /// Rounded-rectangle cross-section of a drinking glass, 7 cm wide and 9 cm tall.
    pub fn glass() -> Self {
        let pts = rounded_rect(0.035, 0.045, 0.01, 6);
        Self::new("glass", pts).expect("valid bundled shape")
    }

    /// Upright bottle profile: straight body tapering into a narrow top.
    pub fn bottle() -> Self {
        let pts = vec![
            Vec2::new(-0.035, -0.075),
            Vec2::new(0.035, -0.075),
            Vec2::new(0.035, 0.025),
            Vec2::new(0.013, 0.085),
            Vec2::new(-0.013, 0.085),
            Vec2::new(-0.035, 0.025),
        ];
        Self::new("bottle", pts).expect("valid bundled shape")
    }

    /// Mug cross-section with the handle loop on the +y facet. The loop is
    /// left open by a 0.5 mm slit at its right foot so the outline stays simple.
    pub fn mug() -> Self {
        let v = |x, y| Vec2::new(x, y);
        let pts = vec![
            v(-0.040, -0.045),
            v(0.040, -0.045),
            v(0.040, 0.045),
            v(-0.018, 0.045),
            v(-0.018, 0.073),
            v(0.018, 0.073),
            v(0.018, 0.0455),
            v(0.025, 0.0455),
            v(0.025, 0.080),
            v(-0.025, 0.080),
            v(-0.025, 0.045),
            v(-0.040, 0.045),
        ];
        Self::new("mug", pts).expect("valid bundled shape")
    }

    /// Regular polygon approximating a disk; vertex 0 sits on the +x axis.
    pub fn disk(name: &str, center: Vec2, radius: f64, vertices: usize) -> Result<Self> {
        if vertices < 3 || !(radius > 0.0) {
            return Err(Error::invalid("disk needs >= 3 vertices and a positive radius"));
        }
        let pts = (0..vertices)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / vertices as f64;
                center + Vec2::new(radius * a.cos(), radius * a.sin())
            })
            .collect();
        Self::new(name, pts)
    }
}

/// Rounded rectangle centered at the origin, mirror-symmetric in x.
fn rounded_rect(half_w: f64, half_h: f64, r: f64, arc_steps: usize) -> Vec<Vec2> {
    let mut right = Vec::new();
    // right half, bottom to top, then mirror for the left half
    let corners = [
        (Vec2::new(half_w - r, -half_h + r), -FRAC_PI_2),
        (Vec2::new(half_w - r, half_h - r), 0.0),
    ];
    for (c, start) in corners {
        for k in 0..=arc_steps {
            let a = start + FRAC_PI_2 * k as f64 / arc_steps as f64;
            right.push(c + Vec2::new(r * a.cos(), r * a.sin()));
        }
    }
    let mut pts = right.clone();
    pts.extend(right.iter().rev().map(|p| Vec2::new(-p.x, p.y)));
    pts
}
