//! Global acquisition maximization: DIRECT (dividing rectangles) over the
//! unit hypercube followed by a coordinate-wise pattern search polish.

use crate::error::{Error, Result};

/// Relative tolerance in the potentially-optimal test.
const EPSILON: f64 = 1e-4;
const POLISH_START_STEP: f64 = 0.05;
const POLISH_MIN_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Evaluations spent in the DIRECT phase (never above the budget).
    pub direct_evaluations: usize,
    pub polish_evaluations: usize,
}

struct Rect {
    center: Vec<f64>,
    /// Side length along dimension `j` is `3^-levels[j]`.
    levels: Vec<u32>,
    value: f64,
    size: f64,
}

fn rect_size(levels: &[u32]) -> f64 {
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    0.5 * sorted
        .iter()
        .map(|&l| 9f64.powi(-(l as i32)))
        .sum::<f64>()
        .sqrt()
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Maximizes `acq` over `[0,1]^d`. Deterministic: the same function and
/// arguments always produce the same point. Ties resolve to the first point
/// found.
pub fn maximize_acquisition(
    mut acq: impl FnMut(&[f64]) -> f64,
    d: usize,
    budget: usize,
) -> Result<Maximum> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if d < usize::BITS as usize && budget < (1usize << d) + 1 {
        return Err(Error::invalid(format!(
            "acquisition budget {budget} is below 2^d + 1 for d = {d}"
        )));
    }
    let mut f = |x: &[f64]| sanitize(acq(x));

    let center = vec![0.5; d];
    let value = f(&center);
    let mut evals = 1usize;
    let mut rects = vec![Rect {
        size: rect_size(&vec![0; d]),
        center,
        levels: vec![0; d],
        value,
    }];
    let mut best = 0usize;

    'outer: loop {
        let selected = potentially_optimal(&rects, rects[best].value);
        if selected.is_empty() {
            break;
        }
        for id in selected {
            let min_level = *rects[id].levels.iter().min().unwrap();
            let dims: Vec<usize> = (0..d).filter(|&j| rects[id].levels[j] == min_level).collect();
            if evals + 2 * dims.len() > budget {
                break 'outer;
            }
            let delta = 3f64.powi(-(min_level as i32 + 1));
            let mut probes = Vec::with_capacity(dims.len());
            for &j in &dims {
                let mut plus = rects[id].center.clone();
                plus[j] += delta;
                let mut minus = rects[id].center.clone();
                minus[j] -= delta;
                let fp = f(&plus);
                let fm = f(&minus);
                evals += 2;
                probes.push((j, plus, fp, minus, fm));
            }
            // the dimension with the best probe is split first so it keeps the largest pieces
            let mut order: Vec<usize> = (0..probes.len()).collect();
            order.sort_by(|&a, &b| {
                let wa = probes[a].2.max(probes[a].4);
                let wb = probes[b].2.max(probes[b].4);
                wb.partial_cmp(&wa).unwrap_or(std::cmp::Ordering::Equal)
            });
            let mut levels = rects[id].levels.clone();
            for k in order {
                let (j, plus, fp, minus, fm) = probes[k].clone();
                levels[j] += 1;
                for (c, v) in [(plus, fp), (minus, fm)] {
                    rects.push(Rect {
                        size: rect_size(&levels),
                        center: c,
                        levels: levels.clone(),
                        value: v,
                    });
                    if v > rects[best].value {
                        best = rects.len() - 1;
                    }
                }
            }
            rects[id].size = rect_size(&levels);
            rects[id].levels = levels;
        }
    }

    let (x, value, polish_evaluations) = polish(&mut f, rects[best].center.clone(), rects[best].value);
    Ok(Maximum {
        x,
        value,
        direct_evaluations: evals,
        polish_evaluations,
    })
}

/// Indices of potentially optimal rectangles, in ascending size order.
fn potentially_optimal(rects: &[Rect], f_max: f64) -> Vec<usize> {
    // best rectangle of every distinct size
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for (i, r) in rects.iter().enumerate() {
        match groups.iter_mut().find(|(s, _)| *s == r.size) {
            Some(g) => {
                if r.value > rects[g.1].value {
                    g.1 = i;
                }
            }
            None => groups.push((r.size, i)),
        }
    }
    groups.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let threshold = f_max + EPSILON * f_max.abs();
    let mut out = Vec::new();
    for (a, &(dj, j)) in groups.iter().enumerate() {
        let fj = rects[j].value;
        if fj == f64::NEG_INFINITY && a + 1 < groups.len() {
            continue;
        }
        let mut lower = 0.0f64;
        for &(di, i) in &groups[..a] {
            lower = lower.max((rects[i].value - fj) / (dj - di));
        }
        let mut upper = f64::INFINITY;
        for &(di, i) in &groups[a + 1..] {
            upper = upper.min((fj - rects[i].value) / (di - dj));
        }
        if lower > upper || upper <= 0.0 {
            continue;
        }
        if upper.is_finite() && fj + upper * dj < threshold {
            continue;
        }
        out.push(j);
    }
    out
}

fn polish(f: &mut impl FnMut(&[f64]) -> f64, mut x: Vec<f64>, mut fx: f64) -> (Vec<f64>, f64, usize) {
    let mut step = POLISH_START_STEP;
    let mut evals = 0;
    while step >= POLISH_MIN_STEP {
        let mut improved = false;
        for j in 0..x.len() {
            for sign in [1.0, -1.0] {
                let v = (x[j] + sign * step).clamp(0.0, 1.0);
                if v == x[j] {
                    continue;
                }
                let mut cand = x.clone();
                cand[j] = v;
                let fc = f(&cand);
                evals += 1;
                if fc > fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx, evals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_center_of_bowl() {
        let m = maximize_acquisition(
            |x| -((x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2)),
            2,
            500,
        )
        .unwrap();
        assert!((m.x[0] - 0.5).abs() < 1e-3 && (m.x[1] - 0.5).abs() < 1e-3, "{:?}", m.x);
        assert!(m.direct_evaluations <= 500);
    }

    #[test]
    fn boundary_optimum() {
        let m = maximize_acquisition(|x| x[0], 1, 100).unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-3, "{:?}", m.x);
    }

    #[test]
    fn off_center_optimum() {
        let m = maximize_acquisition(
            |x| -((x[0] - 0.123).powi(2) + 3.0 * (x[1] - 0.871).powi(2) + (x[2] - 0.33).powi(2)),
            3,
            3000,
        )
        .unwrap();
        for (v, t) in m.x.iter().zip([0.123, 0.871, 0.33]) {
            assert!((v - t).abs() < 1e-3, "{:?}", m.x);
        }
    }

    #[test]
    fn budget_respected_and_deterministic() {
        let f = |x: &[f64]| (10.0 * x[0]).sin() * (7.0 * x[1]).cos();
        let a = maximize_acquisition(f, 2, 137).unwrap();
        let b = maximize_acquisition(f, 2, 137).unwrap();
        assert!(a.direct_evaluations <= 137);
        assert_eq!(a, b);
    }

    #[test]
    fn small_budget_rejected() {
        assert!(maximize_acquisition(|x| x[0], 3, 8).is_err());
    }

    #[test]
    fn nan_is_never_chosen() {
        let m = maximize_acquisition(|x| if x[0] > 0.4 { f64::NAN } else { x[0] }, 1, 200).unwrap();
        assert!(m.x[0] <= 0.4 && m.value.is_finite());
    }
}
