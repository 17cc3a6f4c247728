//! Incremental 3-D convex hull and its volume. Orientation tests use exact
//! adaptive-precision predicates, so near-coplanar input cannot corrupt the
//! face structure.

use robust::{orient2d, orient3d, Coord, Coord3D};

pub type Point3 = [f64; 3];

fn c3(p: &Point3) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

/// Positive when `d` is on the inner side of the face `(a, b, c)` whose
/// outward normal is `(b - a) × (c - a)`.
fn side(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    orient3d(c3(a), c3(b), c3(c), c3(d))
}

fn collinear(a: &Point3, b: &Point3, c: &Point3) -> bool {
    let proj = |p: &Point3, i: usize, j: usize| Coord { x: p[i], y: p[j] };
    [(0, 1), (1, 2), (2, 0)]
        .iter()
        .all(|&(i, j)| orient2d(proj(a, i, j), proj(b, i, j), proj(c, i, j)) == 0.0)
}

/// Triangular faces of the hull, oriented outward, as indices into `points`.
/// Empty when the points do not span three dimensions.
pub fn convex_hull(points: &[Point3]) -> Vec<[usize; 3]> {
    let n = points.len();
    if n < 4 {
        return Vec::new();
    }
    let i0 = 0;
    let Some(i1) = (1..n).find(|&i| points[i] != points[i0]) else {
        return Vec::new();
    };
    let Some(i2) = (1..n).find(|&i| !collinear(&points[i0], &points[i1], &points[i])) else {
        return Vec::new();
    };
    let Some(i3) =
        (1..n).find(|&i| side(&points[i0], &points[i1], &points[i2], &points[i]) != 0.0)
    else {
        return Vec::new();
    };

    let simplex = [i0, i1, i2, i3];
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for skip in 0..4 {
        let mut f = [0usize; 3];
        let mut k = 0;
        for (j, &v) in simplex.iter().enumerate() {
            if j != skip {
                f[k] = v;
                k += 1;
            }
        }
        if side(&points[f[0]], &points[f[1]], &points[f[2]], &points[simplex[skip]]) < 0.0 {
            f.swap(1, 2);
        }
        faces.push(f);
    }

    let mut alive = vec![true; 4];
    for p in 0..n {
        if simplex.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| {
                alive[f]
                    && side(
                        &points[faces[f][0]],
                        &points[faces[f][1]],
                        &points[faces[f][2]],
                        &points[p],
                    ) < 0.0
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(3 * visible.len());
        for &f in &visible {
            let [a, b, c] = faces[f];
            edges.extend([(a, b), (b, c), (c, a)]);
            alive[f] = false;
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| !edges.contains(&(b, a)))
            .collect();
        for (a, b) in horizon {
            faces.push([a, b, p]);
            alive.push(true);
        }
    }
    faces
        .into_iter()
        .zip(alive)
        .filter_map(|(f, a)| a.then_some(f))
        .collect()
}

/// Volume of the convex hull; zero for fewer than four points or
/// affinely degenerate sets.
pub fn convex_hull_volume(points: &[Point3]) -> f64 {
    let faces = convex_hull(points);
    if faces.is_empty() {
        return 0.0;
    }
    // any interior point works as the apex; the vertex mean is one
    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let mut o = [0.0; 3];
    for &i in &used {
        for k in 0..3 {
            o[k] += points[i][k];
        }
    }
    for v in &mut o {
        *v /= used.len() as f64;
    }
    let sub = |p: &Point3| [p[0] - o[0], p[1] - o[1], p[2] - o[2]];
    let total: f64 = faces
        .iter()
        .map(|f| {
            let (a, b, c) = (sub(&points[f[0]]), sub(&points[f[1]]), sub(&points[f[2]]));
            let cross = [
                b[1] * c[2] - b[2] * c[1],
                b[2] * c[0] - b[0] * c[2],
                b[0] * c[1] - b[1] * c[0],
            ];
            a[0] * cross[0] + a[1] * cross[1] + a[2] * cross[2]
        })
        .sum();
    (total / 6.0).abs()
}

/// Grasp Wrench Volume: volume of the convex hull of the wrenches and the origin.
pub fn grasp_wrench_volume(wrenches: &[Point3]) -> f64 {
    let mut pts = Vec::with_capacity(wrenches.len() + 1);
    pts.push([0.0; 3]);
    pts.extend_from_slice(wrenches);
    convex_hull_volume(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cube() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        pts.push([0.5, 0.5, 0.5]);
        pts.push([0.5, 0.5, 1.0]); // on a face
        assert!((convex_hull_volume(&pts) - 1.0).abs() < 1e-14);
        assert_eq!(convex_hull(&pts[..8]).len(), 12);
    }

    #[test]
    fn tetrahedron() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
        assert!((convex_hull_volume(&pts) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_sets() {
        assert_eq!(convex_hull_volume(&[[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]), 0.0);
        let plane: Vec<Point3> = (0..10)
            .map(|i| [i as f64 * 0.1, (i * i) as f64 * 0.01, 2.0])
            .collect();
        assert_eq!(convex_hull_volume(&plane), 0.0);
        let line: Vec<Point3> = (0..6).map(|i| [i as f64; 3]).collect();
        assert_eq!(convex_hull_volume(&line), 0.0);
        assert_eq!(convex_hull_volume(&[[1.0; 3]; 5]), 0.0);
    }

    #[test]
    fn wrench_volume_includes_origin() {
        let w = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((grasp_wrench_volume(&w) - 1.0 / 6.0).abs() < 1e-15);
    }
}
