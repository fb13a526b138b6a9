use num_traits::Float;

use crate::error::check_dim;
use crate::rng::{derive_seed, seeded, unit_vector};
use crate::vector::dot;
use crate::{Body, Error, OracleTolerance, Vector};

pub const MIN_SAMPLES: usize = 100;

/// How each sampled support value was obtained.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupportPaths {
    /// Closed form, or a part's support point already in the intersection.
    pub exact: usize,
    /// Cutting-plane refinement converged.
    pub refined: usize,
    /// Refinement did not converge; the certified upper bound was used.
    pub upper_bound: usize,
}

/// Running sums of a Monte Carlo estimate; partial results over disjoint
/// sample blocks merge exactly.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanWidth {
    pub samples: usize,
    pub sum: f64,
    pub sum_sq: f64,
    pub paths: SupportPaths,
}

impl MeanWidth {
    pub fn estimate(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.sum / self.samples as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        let n = self.samples as f64;
        if self.samples < 2 {
            return 0.0;
        }
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn merge(mut self, other: &MeanWidth) -> Self {
        self.samples += other.samples;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.paths.exact += other.paths.exact;
        self.paths.refined += other.paths.refined;
        self.paths.upper_bound += other.paths.upper_bound;
        self
    }
}

/// `M*(A)`: the average of `h_A(u)` over `samples` uniform directions.
pub fn mean_width(a: &Body, samples: usize, seed: u64) -> Result<MeanWidth, Error> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "at least 100 samples required",
        });
    }
    Ok(mean_width_partial(a, samples, seed, 0))
}

/// One block of a partitioned estimate: `samples` directions drawn from the
/// child seed `(seed, block)`. Merging blocks `0..p` gives a result that
/// depends only on `seed`, the block sizes and `p`.
pub fn mean_width_partial(a: &Body, samples: usize, seed: u64, block: u64) -> MeanWidth {
    let tol = OracleTolerance::default();
    let mut rng = seeded(derive_seed(seed, 0x4d57_0000 + block));
    let mut out = MeanWidth::default();
    for _ in 0..samples {
        let u = unit_vector(&mut rng, a.dim());
        let (lo, hi) = a.support_in(&u, f64::INFINITY, None);
        let h = if hi - lo <= 4.0 * f64::EPSILON * hi {
            out.paths.exact += 1;
            hi
        } else {
            let (lo, hi) = a.support_in(&u, tol.bisection_tol, None);
            if hi - lo <= tol.bisection_tol * hi {
                out.paths.refined += 1;
            } else {
                out.paths.upper_bound += 1;
            }
            hi
        };
        out.samples += 1;
        out.sum += h;
        out.sum_sq += h * h;
    }
    out
}

/// `M*` of the symmetric hull of `points`, which may be flat (a segment in
/// the plane, say) and so not a [`Body`].
pub fn mean_width_hull(points: &[Vector], samples: usize, seed: u64) -> Result<MeanWidth, Error> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "at least 100 samples required",
        });
    }
    let dim = points
        .first()
        .ok_or(Error::EmptyInput("hull points"))?
        .dim();
    for p in points {
        check_dim(dim, p.dim())?;
    }
    let mut rng = seeded(derive_seed(seed, 0x4d57_0000));
    let mut out = MeanWidth::default();
    for _ in 0..samples {
        let u = unit_vector(&mut rng, dim);
        let h = points.iter().map(|p| dot(p, &u).abs()).fold(0.0, f64::max);
        out.samples += 1;
        out.paths.exact += 1;
        out.sum += h;
        out.sum_sq += h * h;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn poly(pts: &[[f64; 2]]) -> Body {
        let v: alloc::vec::Vec<Vector> = pts
            .iter()
            .map(|p| Vector::new(p.to_vec()).unwrap())
            .collect();
        Body::vpolytope(&v).unwrap()
    }

    #[test]
    fn ball_has_zero_spread() {
        let m = mean_width(&Body::unit_ball(3), 500, 1).unwrap();
        assert!((m.estimate() - 1.0).abs() < 1e-12);
        assert!(m.stderr() < 1e-7);
        assert_eq!(m.paths.exact, 500);
    }

    #[test]
    fn segment_and_square() {
        let seg = mean_width_hull(&[Vector::basis(2, 0)], 20_000, 3).unwrap();
        assert!((seg.estimate() - 2.0 / PI).abs() < 4.0 * seg.stderr());
        let sq = mean_width(&poly(&[[1.0, 1.0], [1.0, -1.0]]), 20_000, 3).unwrap();
        assert!((sq.estimate() - 4.0 / PI).abs() < 4.0 * sq.stderr());
    }

    #[test]
    fn hull_matches_body_when_full() {
        let pts = [
            Vector::new(alloc::vec![1.0, 1.0]).unwrap(),
            Vector::new(alloc::vec![1.0, -1.0]).unwrap(),
        ];
        let a = mean_width_hull(&pts, 500, 2).unwrap();
        let b = mean_width(&Body::vpolytope(&pts).unwrap(), 500, 2).unwrap();
        assert!((a.estimate() - b.estimate()).abs() < 1e-12);
        assert!(mean_width_hull(&[], 500, 2).is_err());
    }

    #[test]
    fn too_few_samples() {
        assert!(mean_width(&Body::unit_ball(2), 99, 1).is_err());
    }

    #[test]
    fn intersection_paths_are_counted() {
        let k = Body::intersect_ball(&poly(&[[2.0, 2.0], [2.0, -2.0]]), 2.5).unwrap();
        let m = mean_width(&k, 300, 5).unwrap();
        assert_eq!(m.paths.exact + m.paths.refined + m.paths.upper_bound, 300);
        assert!(m.paths.refined > 0);
        let sq = mean_width(&poly(&[[2.0, 2.0], [2.0, -2.0]]), 300, 5).unwrap();
        let ball = mean_width(&Body::ball(2, 2.5).unwrap(), 300, 5).unwrap();
        assert!(m.estimate() <= sq.estimate().min(ball.estimate()));
    }

    #[test]
    fn blocks_merge() {
        let b = Body::ellipsoid(&[2.0, 1.0]).unwrap();
        let whole = mean_width_partial(&b, 200, 9, 0).merge(&mean_width_partial(&b, 200, 9, 1));
        assert_eq!(whole.samples, 400);
        assert!((whole.estimate() - 1.0).abs() < 1.0);
    }
}
