use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Latin hypercube design of `p` points in `[0,1]^d`: along every axis each
/// of the `p` bins `[k/p, (k+1)/p)` holds exactly one coordinate.
pub fn latin_hypercube<R: Rng + ?Sized>(p: usize, d: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    if p == 0 || d == 0 {
        return Err(Error::invalid("latin hypercube needs p >= 1 and d >= 1"));
    }
    let mut points = vec![vec![0.0; d]; p];
    let mut perm: Vec<usize> = (0..p).collect();
    for j in 0..d {
        perm.shuffle(rng);
        for (point, &bin) in points.iter_mut().zip(&perm) {
            let v = (bin as f64 + rng.random::<f64>()) / p as f64;
            // keep rounding from pushing a coordinate into the next bin
            point[j] = v.min((bin as f64 + 1.0) / p as f64 - f64::EPSILON).max(0.0);
        }
    }
    Ok(points)
}
