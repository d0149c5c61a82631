//! Norm-bounded lattice vector enumeration (Fincke–Pohst).
//!
//! Pruning uses the exact LDL data rounded to `f64` with a small slack;
//! every candidate is then accepted or rejected on its exact integer norm,
//! so rounding can only cost time, never vectors.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::even::EvenLattice;
use crate::error::{Error, Result};
use crate::series::rat::to_f64;

const SLACK: f64 = 1e-7;

struct Pruning {
    n: usize,
    mu: Vec<Vec<f64>>,
    d: Vec<f64>,
    gram: Vec<Vec<i64>>,
}

impl Pruning {
    fn new(l: &EvenLattice) -> Self {
        let (mu, d) = l.ldl();
        Pruning {
            n: l.rank(),
            mu: mu.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
            d: d.iter().map(to_f64).collect(),
            gram: l.gram().to_vec(),
        }
    }

    /// Range of admissible values for coordinate `i` given the coordinates above it.
    fn range(&self, i: usize, x: &[i64], budget: f64) -> (f64, i64, i64) {
        let mut c = 0.0;
        for j in i + 1..self.n {
            c -= self.mu[i][j] * x[j] as f64;
        }
        let r = (budget.max(0.0) / self.d[i]).sqrt() + SLACK;
        (c, (c - r).ceil() as i64, (c + r).floor() as i64)
    }

    /// Visits every vector with exact norm at most `max_norm` whose top coordinate is `top`.
    fn visit_top<F: FnMut(&[i64], i64)>(&self, max_norm: i64, top: i64, f: &mut F) {
        let n = self.n;
        let mut x = vec![0i64; n];
        x[n - 1] = top;
        let (c, _, _) = self.range(n - 1, &x, max_norm as f64);
        let y = top as f64 - c;
        let q = self.d[n - 1] * y * y;
        if q > max_norm as f64 + SLACK * (1.0 + max_norm as f64) {
            return;
        }
        let exact = self.gram[n - 1][n - 1] * top * top;
        self.descend(n - 1, &mut x, q, exact, max_norm, f);
    }

    fn descend<F: FnMut(&[i64], i64)>(&self, level: usize, x: &mut Vec<i64>, partial: f64, exact: i64, max_norm: i64, f: &mut F) {
        if level == 0 {
            if exact <= max_norm {
                f(x, exact);
            }
            return;
        }
        let i = level - 1;
        let budget = max_norm as f64 - partial + SLACK * (1.0 + max_norm as f64);
        if budget < 0.0 {
            return;
        }
        let (c, lo, hi) = self.range(i, x, budget);
        // exact norm increment: G_ii x_i^2 + 2 x_i Σ_{j>i} G_ij x_j
        let s: i64 = (i + 1..self.n).map(|j| self.gram[i][j] * x[j]).sum();
        let gii = self.gram[i][i];
        for v in lo..=hi {
            let y = v as f64 - c;
            let p = partial + self.d[i] * y * y;
            if p > max_norm as f64 + SLACK * (1.0 + max_norm as f64) {
                continue;
            }
            x[i] = v;
            self.descend(i, x, p, exact + gii * v * v + 2 * v * s, max_norm, f);
        }
        x[i] = 0;
    }

    fn top_range(&self, max_norm: i64) -> (i64, i64) {
        let x = vec![0i64; self.n];
        let (_, lo, hi) = self.range(self.n - 1, &x, max_norm as f64 + SLACK * (1.0 + max_norm as f64));
        (lo, hi)
    }
}

/// Every vector with `⟨α, α⟩ <= max_norm`, grouped by norm.
pub fn enumerate_by_norm(l: &EvenLattice, max_norm: i64) -> Result<BTreeMap<i64, Vec<Vec<i64>>>> {
    if max_norm < 0 {
        return Err(Error::Lattice("negative norm bound".into()));
    }
    let mut out: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    if l.rank() == 0 {
        out.insert(0, vec![Vec::new()]);
        return Ok(out);
    }
    let p = Pruning::new(l);
    let (lo, hi) = p.top_range(max_norm);
    let parts: Vec<Vec<(i64, Vec<i64>)>> = (lo..=hi)
        .into_par_iter()
        .map(|top| {
            let mut found = Vec::new();
            p.visit_top(max_norm, top, &mut |x, norm| found.push((norm, x.to_vec())));
            found
        })
        .collect();
    for (norm, v) in parts.into_iter().flatten() {
        out.entry(norm).or_default().push(v);
    }
    for vs in out.values_mut() {
        vs.sort();
    }
    Ok(out)
}

/// Number of vectors of each norm `0, 2, ..., max_norm` (index = norm / 2).
pub fn count_by_norm(l: &EvenLattice, max_norm: i64) -> Result<Vec<u64>> {
    if max_norm < 0 {
        return Err(Error::Lattice("negative norm bound".into()));
    }
    let len = (max_norm / 2 + 1) as usize;
    if l.rank() == 0 {
        let mut c = vec![0; len];
        c[0] = 1;
        return Ok(c);
    }
    let p = Pruning::new(l);
    let (lo, hi) = p.top_range(max_norm);
    let parts: Vec<Vec<u64>> = (lo..=hi)
        .into_par_iter()
        .map(|top| {
            let mut counts = vec![0u64; len];
            p.visit_top(max_norm, top, &mut |_, norm| counts[(norm / 2) as usize] += 1);
            counts
        })
        .collect();
    let mut total = vec![0u64; len];
    for c in parts {
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
    }
    Ok(total)
}
