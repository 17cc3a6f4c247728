//! Dense lower-triangular Cholesky factorization in packed row-major storage.
//!
//! GP Gram matrices here are at most a few hundred rows, so a straightforward
//! row-oriented factorization with unrolled dot products is all that's needed.

/// Dot product with four independent accumulators so the loop vectorizes.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 4];
    let chunks = n / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..n {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Four dot products of `a` against `b[0..4]`, all of length `a.len()`.
#[inline]
fn dot4(a: &[f64], b: [&[f64]; 4]) -> [f64; 4] {
    let n = a.len();
    let [b0, b1, b2, b3] = b.map(|v| &v[..n]);
    let mut s = [0.0f64; 4];
    for k in 0..n {
        let x = a[k];
        s[0] += x * b0[k];
        s[1] += x * b1[k];
        s[2] += x * b2[k];
        s[3] += x * b3[k];
    }
    s
}

/// Symmetric matrix stored as its lower triangle, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedLower {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

impl PackedLower {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; row_start(n)],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(row_start(n));
        for i in 0..n {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Element `(i, j)` of the symmetric matrix; either triangle may be addressed.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        self.data[row_start(i) + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[row_start(i)..row_start(i) + i + 1]
    }

    pub fn add_diagonal(&mut self, value: f64) {
        for i in 0..self.n {
            self.data[row_start(i) + i] += value;
        }
    }
}

/// Lower-triangular factor `L` with `L Lᵀ = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    l: PackedLower,
}

impl Cholesky {
    /// Factorizes a symmetric matrix; `None` when a pivot is not strictly positive.
    pub fn factor(a: &PackedLower) -> Option<Self> {
        let n = a.dim();
        let mut data = vec![0.0; row_start(n)];
        for i in 0..n {
            let ri = row_start(i);
            let (done, rest) = data.split_at_mut(ri);
            let li = &mut rest[..=i];
            let mut j = 0;
            // four columns at a time share the loads of row i
            while j + 4 <= i {
                let r = [j, j + 1, j + 2, j + 3].map(row_start);
                let mut s = dot4(
                    &li[..j],
                    [
                        &done[r[0]..r[0] + j],
                        &done[r[1]..r[1] + j],
                        &done[r[2]..r[2] + j],
                        &done[r[3]..r[3] + j],
                    ],
                );
                for b in 0..4 {
                    let c = j + b;
                    for t in j..c {
                        s[b] += li[t] * done[r[b] + t];
                    }
                    li[c] = (a.data[ri + c] - s[b]) / done[r[b] + c];
                }
                j += 4;
            }
            for c in j..i {
                let rc = row_start(c);
                li[c] = (a.data[ri + c] - dot(&li[..c], &done[rc..rc + c])) / done[rc + c];
            }
            let v = a.data[ri + i] - dot(&li[..i], &li[..i]);
            if !(v > 0.0) || !v.is_finite() {
                return None;
            }
            li[i] = v.sqrt();
        }
        Some(Self {
            l: PackedLower { n, data },
        })
    }

    pub fn dim(&self) -> usize {
        self.l.n
    }

    /// Entry `(i, j)` of `L` (zero above the diagonal).
    pub fn l(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.l.data[row_start(i) + j]
        }
    }

    /// Solves `L v = b` in place.
    pub fn forward_solve_in_place(&self, b: &mut [f64]) {
        for i in 0..self.l.n {
            let ri = row_start(i);
            let s = dot(&self.l.data[ri..ri + i], &b[..i]);
            b[i] = (b[i] - s) / self.l.data[ri + i];
        }
    }

    /// Solves `Lᵀ v = b` in place.
    pub fn backward_solve_in_place(&self, b: &mut [f64]) {
        let n = self.l.n;
        for i in (0..n).rev() {
            let ri = row_start(i);
            b[i] /= self.l.data[ri + i];
            let bi = b[i];
            for (bj, lij) in b[..i].iter_mut().zip(&self.l.data[ri..ri + i]) {
                *bj -= lij * bi;
            }
        }
    }

    /// `L⁻¹`, lower triangular, in the same packed layout. Applying it is a
    /// plain matrix-vector product, which is cheaper than substitution when
    /// many right-hand sides share one factor.
    pub fn inverse_factor(&self) -> PackedLower {
        let n = self.l.n;
        let mut inv = PackedLower::zeros(n);
        for i in 0..n {
            let ri = row_start(i);
            let (done, rest) = inv.data.split_at_mut(ri);
            let row = &mut rest[..=i];
            row[i] = 1.0;
            for k in 0..i {
                let lik = self.l.data[ri + k];
                let rk = row_start(k);
                for (r, v) in row[..=k].iter_mut().zip(&done[rk..rk + k + 1]) {
                    *r -= lik * v;
                }
            }
            let d = self.l.data[ri + i];
            row.iter_mut().for_each(|r| *r /= d);
        }
        inv
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.forward_solve_in_place(&mut x);
        self.backward_solve_in_place(&mut x);
        x
    }

    /// `log |A| = 2 Σ log L_ii`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.l.n)
            .map(|i| self.l.data[row_start(i) + i].ln())
            .sum::<f64>()
    }

    /// Reassembles `L Lᵀ`; used to check factorization accuracy.
    pub fn reconstruct(&self) -> PackedLower {
        let n = self.l.n;
        PackedLower::from_fn(n, |i, j| {
            dot(
                &self.l.data[row_start(i)..row_start(i) + j + 1],
                &self.l.data[row_start(j)..row_start(j) + j + 1],
            )
        })
    }
}
