use crate::error::{Error, Result};

/// Queries in the closed unit hypercube and their outcomes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    dim: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl ObservationSet {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("input dimension must be at least 1"));
        }
        Ok(Self {
            dim,
            xs: Vec::new(),
            ys: Vec::new(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], ys: &[f64]) -> Result<Self> {
        if rows.len() != ys.len() {
            return Err(Error::invalid(format!(
                "{} query rows but {} outcomes",
                rows.len(),
                ys.len()
            )));
        }
        let dim = rows
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::invalid("cannot infer dimension of an empty set"))?;
        let mut set = Self::new(dim)?;
        for (r, &y) in rows.iter().zip(ys) {
            set.push(r, y)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, x: &[f64], y: f64) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::invalid(format!(
                "query of dimension {} pushed into a {}-dimensional set",
                x.len(),
                self.dim
            )));
        }
        if x.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid(format!("query {x:?} leaves the unit hypercube")));
        }
        if !y.is_finite() {
            return Err(Error::invalid("outcome must be finite"));
        }
        self.xs.extend_from_slice(x);
        self.ys.push(y);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.xs.chunks_exact(self.dim)
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }
}
