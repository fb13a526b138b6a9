//! Dense two-phase simplex for the small linear programs behind the polytope
//! oracles and the set-cover relaxation.
//!
//! Problems are given in standard form
//!
//! ```text
//! minimize cᵀx  subject to  A x = b,  x ≥ 0
//! ```
//!
//! Phase 1 drives a full artificial basis to feasibility, phase 2 optimizes
//! the real objective. Pivoting uses Bland's rule throughout, so the solver
//! cannot cycle and its output is a deterministic function of the input.
//! Every call owns its tableau; nothing is shared between calls.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpError {
    Infeasible,
    Unbounded,
    IterationLimit,
    /// Matrix and vector sizes disagree.
    Shape,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpError::Infeasible => "infeasible",
            LpError::Unbounded => "unbounded",
            LpError::IterationLimit => "pivot limit reached",
            LpError::Shape => "inconsistent problem shape",
        })
    }
}

impl core::error::Error for LpError {}

/// A linear program in standard form with a row-major constraint matrix.
#[derive(Debug, Clone)]
pub struct StandardLp {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Optimal multipliers `y` of the equality rows: `Aᵀy ≤ c` and `bᵀy = cᵀx`.
    pub duals: Vec<f64>,
}

impl StandardLp {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self, LpError> {
        let rows = b.len();
        let cols = c.len();
        if a.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(LpError::Shape);
        }
        Ok(Self {
            rows,
            cols,
            a,
            b,
            c,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).run(&self.c)
    }
}

struct Tableau {
    m: usize,
    n: usize,
    width: usize,
    t: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    flipped: Vec<bool>,
}

impl Tableau {
    fn build(lp: &StandardLp) -> Self {
        let (m, n) = (lp.rows, lp.cols);
        let width = n + m + 1;
        let mut t = vec![0.0; m * width];
        let mut flipped = vec![false; m];
        for r in 0..m {
            let sign = if lp.b[r] < 0.0 { -1.0 } else { 1.0 };
            flipped[r] = sign < 0.0;
            let row = &mut t[r * width..(r + 1) * width];
            for j in 0..n {
                row[j] = sign * lp.a[r * n + j];
            }
            row[n + r] = 1.0;
            row[width - 1] = sign * lp.b[r];
        }
        Self {
            m,
            n,
            width,
            t,
            obj: vec![0.0; width],
            basis: (n..n + m).collect(),
            flipped,
        }
    }

    #[inline]
    fn at(&self, r: usize, j: usize) -> f64 {
        self.t[r * self.width + j]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.width;
        let p = self.t[r * w + col];
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = row[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(prow.iter()) {
                *v -= f * pv;
            }
        }
        self.basis[r] = col;
    }

    /// Reduced-cost row for the cost vector `cost` (indexed over all columns).
    fn price(&mut self, cost: &[f64]) {
        let w = self.width;
        self.obj.copy_from_slice(&cost[..w]);
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for j in 0..w {
                    self.obj[j] -= cb * self.t[r * w + j];
                }
            }
        }
    }

    /// Bland's rule iterations over columns `< allowed`.
    fn iterate(&mut self, allowed: usize, pivots: &mut usize) -> Result<(), LpError> {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j] < -PIVOT_EPS) else {
                return Ok(());
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, col);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r) / a;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                            if ratio < bratio && !tie || tie && self.basis[r] < self.basis[br] {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = best else {
                return Err(LpError::Unbounded);
            };
            self.pivot(row, col);
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(LpError::IterationLimit);
            }
        }
    }

    fn run(mut self, c: &[f64]) -> Result<LpSolution, LpError> {
        let (m, n, w) = (self.m, self.n, self.width);
        let mut pivots = 0;

        let mut cost = vec![0.0; w];
        for v in &mut cost[n..n + m] {
            *v = 1.0;
        }
        self.price(&cost);
        self.iterate(n + m, &mut pivots)?;
        let infeasibility: f64 = (0..m)
            .filter(|&r| self.basis[r] >= n)
            .map(|r| self.rhs(r))
            .sum();
        let scale = 1.0 + (0..m).map(|r| self.rhs(r).abs()).fold(0.0, f64::max);
        if infeasibility > 1e-9 * scale {
            return Err(LpError::Infeasible);
        }
        // Pivot remaining zero-level artificials out where a real column allows it.
        for r in 0..m {
            if self.basis[r] >= n {
                if let Some(j) = (0..n).find(|&j| self.at(r, j).abs() > 1e-9) {
                    self.pivot(r, j);
                }
            }
        }

        cost.iter_mut().for_each(|v| *v = 0.0);
        cost[..n].copy_from_slice(c);
        self.price(&cost);
        self.iterate(n, &mut pivots)?;

        let mut x = vec![0.0; n];
        for r in 0..m {
            let j = self.basis[r];
            if j < n {
                x[j] = self.rhs(r).max(0.0);
            }
        }
        let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
        // y = c_B B⁻¹; B⁻¹ sits in the artificial block because it started as I.
        let mut duals = vec![0.0; m];
        for (i, y) in duals.iter_mut().enumerate() {
            let mut acc = 0.0;
            for r in 0..m {
                let j = self.basis[r];
                if j < n {
                    acc += c[j] * self.at(r, n + i);
                }
            }
            *y = if self.flipped[i] { -acc } else { acc };
        }
        Ok(LpSolution {
            x,
            objective,
            duals,
        })
    }
}
