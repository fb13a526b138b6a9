use alloc::vec::Vec;

use num_traits::Float;

use crate::rng::{derive_seed, in_box, seeded};
use crate::{Body, Error, OracleTolerance};

/// Dimensions above this are rejected by the covering routines; the spatial
/// hash uses fixed-size cell keys.
pub const MAX_DIM: usize = 8;

/// Smallest budget accepted in dimension `n`: a lattice with one step on each
/// side of the origin per axis, plus as many random draws.
pub fn min_budget(dim: usize) -> usize {
    2 * 3usize.pow(dim as u32)
}

/// Candidate points of a body: a symmetric lattice over the bounding box,
/// filtered by membership, followed by seeded uniform draws from the box that
/// land in the body. Point order is deterministic for a fixed seed.
#[derive(Debug, Clone)]
pub struct CandidateStream {
    dim: usize,
    points: Vec<f64>,
    lattice_len: usize,
    steps: Vec<f64>,
}

impl CandidateStream {
    /// Uses about half of `budget` on the lattice (finest pitch that fits)
    /// and the rest on random draws.
    pub fn build(k: &Body, budget: usize, seed: u64, tol: &OracleTolerance) -> Result<Self, Error> {
        let dim = k.dim();
        if dim > MAX_DIM {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: "covering supports at most 8 dimensions",
            });
        }
        let needed = min_budget(dim);
        if budget < needed {
            return Err(Error::BudgetTooSmall {
                needed,
                got: budget,
            });
        }
        let half: Vec<f64> = (0..dim)
            .map(|i| {
                let mut e = alloc::vec![0.0; dim];
                e[i] = 1.0;
                k.support_in(&e, tol.bisection_tol, None).1
            })
            .collect();
        let lattice_budget = budget / 2;
        let per_axis = lattice_steps(&half, lattice_budget);
        let steps: Vec<f64> = half
            .iter()
            .zip(&per_axis)
            .map(|(h, m)| h / *m as f64)
            .collect();

        let mut points = Vec::new();
        let mut idx = alloc::vec![0usize; dim];
        let mut x = alloc::vec![0.0; dim];
        let mut drawn = 0usize;
        'lattice: loop {
            for i in 0..dim {
                x[i] = half[i] * ((idx[i] as f64 - per_axis[i] as f64) / per_axis[i] as f64);
            }
            drawn += 1;
            if k.contains_in(&x, tol) {
                points.extend_from_slice(&x);
            }
            let mut axis = dim;
            loop {
                if axis == 0 {
                    break 'lattice;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] <= 2 * per_axis[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
        let lattice_len = points.len() / dim;

        let mut rng = seeded(derive_seed(seed, 0x5354_5245_414d));
        for _ in drawn..budget {
            let y = in_box(&mut rng, &half);
            if k.contains_in(&y, tol) {
                points.extend_from_slice(&y);
            }
        }
        Ok(Self {
            dim,
            points,
            lattice_len,
            steps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    /// Number of leading points that come from the lattice.
    pub fn lattice_len(&self) -> usize {
        self.lattice_len
    }

    /// Largest lattice step over the axes.
    pub fn pitch(&self) -> f64 {
        self.steps.iter().copied().fold(0.0, f64::max)
    }

    /// Distance from any point of the bounding box to the nearest lattice
    /// node: half the lattice cell diagonal.
    pub fn covering_radius(&self) -> f64 {
        0.5 * self.steps.iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

/// Nodes `p·j`, `j ∈ ℤⁿ`, of the symmetric lattice with pitch `p` that lie
/// in `K`, in row-major order with the last axis fastest.
pub fn lattice_points(
    k: &Body,
    pitch: f64,
    tol: &OracleTolerance,
) -> Result<Vec<crate::Vector>, Error> {
    crate::error::positive("pitch", pitch)?;
    let dim = k.dim();
    let reach: Vec<i64> = (0..dim)
        .map(|i| {
            let mut e = alloc::vec![0.0; dim];
            e[i] = 1.0;
            (k.support_in(&e, tol.bisection_tol, None).1 / pitch + 1e-9).floor() as i64
        })
        .collect();
    let mut out = Vec::new();
    let mut idx: Vec<i64> = reach.iter().map(|r| -r).collect();
    loop {
        let x: Vec<f64> = idx.iter().map(|&j| j as f64 * pitch).collect();
        if k.contains_in(&x, tol) {
            out.push(crate::Vector::new(x)?);
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] <= reach[axis] {
                break;
            }
            idx[axis] = -reach[axis];
        }
    }
}

/// Steps per half-axis `mᵢ = ⌈hᵢ/p⌉` for the smallest pitch `p` with
/// `∏(2mᵢ + 1) ≤ budget`.
fn lattice_steps(half: &[f64], budget: usize) -> Vec<usize> {
    let hmax = half.iter().copied().fold(0.0, f64::max);
    let steps = |p: f64| -> Vec<usize> {
        half.iter()
            .map(|h| ((h / (p * hmax)).ceil() as usize).max(1))
            .collect()
    };
    let count = |m: &[usize]| -> f64 { m.iter().map(|&m| (2 * m + 1) as f64).product() };
    // p in units of hmax; p = 1 gives 3ⁿ nodes.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if count(&steps(mid)) <= budget as f64 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    steps(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_fits_budget_and_is_symmetric() {
        let k = Body::ellipsoid(&[2.0, 1.0]).unwrap();
        let s = CandidateStream::build(&k, 2000, 1, &OracleTolerance::default()).unwrap();
        let n = s.lattice_len();
        assert!(n <= 1000);
        for i in 0..n {
            let p = s.point(i);
            let q = s.point(n - 1 - i);
            assert_eq!(p[0], -q[0]);
            assert_eq!(p[1], -q[1]);
        }
        assert!(s.len() > n);
    }

    #[test]
    fn interval_endpoints_are_candidates() {
        let k = Body::interval(5.0).unwrap();
        let s = CandidateStream::build(&k, 100, 1, &OracleTolerance::default()).unwrap();
        assert_eq!(s.point(0), &[-5.0]);
        assert_eq!(s.point(s.lattice_len() - 1), &[5.0]);
        assert!((s.pitch() - 5.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn budget_minimum_enforced() {
        let k = Body::unit_ball(3);
        let err = CandidateStream::build(&k, 10, 1, &OracleTolerance::default()).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetTooSmall {
                needed: 54,
                got: 10
            }
        );
    }
}
