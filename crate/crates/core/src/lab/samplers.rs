use alloc::vec::Vec;

use num_traits::Float;

use crate::rng::{SeededRng, derive_seed, seeded, uniform, unit_vector};
use crate::vector::axpy;
use crate::{Body, Error, Vector};

/// Attempts per sample before a family is declared degenerate.
const MAX_RESAMPLES: u64 = 100;

/// Seeded random families of symmetric bodies.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum Sampler {
    /// `conv(±x₁, …, ±x_m)` with `x_i` uniform on the sphere of radius `radius`.
    SphereHull {
        dim: usize,
        points: usize,
        radius: f64,
    },
    /// Semiaxes log-uniform in `[min_axis, max_axis]`.
    Ellipsoid {
        dim: usize,
        min_axis: f64,
        max_axis: f64,
    },
    /// `Σ [−v_i, v_i]` over `segments ≤ 4` random segments with lengths
    /// uniform in `[radius/4, radius]`, as the hull of all signed sums.
    Zonotope {
        dim: usize,
        segments: usize,
        radius: f64,
    },
    /// `conv(±v₁, ±v₂, ±v₃)` in the plane, directions spread around the half
    /// circle and lengths uniform in `[min_radius, max_radius]`.
    Hexagon { min_radius: f64, max_radius: f64 },
    /// The same ball every time.
    Ball { dim: usize, radius: f64 },
}

#[derive(Debug, Clone)]
pub struct SampledBody {
    pub body: Body,
    /// Generating points of a hull, before symmetrization.
    pub points: Option<Vec<Vector>>,
    /// `R` with `K ⊆ R·D`.
    pub radius: f64,
}

impl Sampler {
    pub fn dim(&self) -> usize {
        match *self {
            Sampler::SphereHull { dim, .. }
            | Sampler::Ellipsoid { dim, .. }
            | Sampler::Zonotope { dim, .. }
            | Sampler::Ball { dim, .. } => dim,
            Sampler::Hexagon { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if self.dim() == 0 {
            return bad("dim", "must be at least 1");
        }
        match *self {
            Sampler::SphereHull { points, radius, .. } => {
                if points == 0 {
                    return bad("points", "must be at least 1");
                }
                crate::error::positive("radius", radius)?;
            }
            Sampler::Ellipsoid {
                min_axis, max_axis, ..
            } => {
                crate::error::positive("min_axis", min_axis)?;
                if !(max_axis.is_finite() && max_axis >= min_axis) {
                    return bad("max_axis", "must be finite and at least min_axis");
                }
            }
            Sampler::Zonotope {
                segments, radius, ..
            } => {
                if !(1..=4).contains(&segments) {
                    return bad("segments", "must be between 1 and 4");
                }
                crate::error::positive("radius", radius)?;
            }
            Sampler::Hexagon {
                min_radius,
                max_radius,
            } => {
                crate::error::positive("min_radius", min_radius)?;
                if !(max_radius.is_finite() && max_radius >= min_radius) {
                    return bad("max_radius", "must be finite and at least min_radius");
                }
            }
            Sampler::Ball { radius, .. } => {
                crate::error::positive("radius", radius)?;
            }
        }
        Ok(())
    }

    /// Draws one body. Degenerate hulls are redrawn from derived seeds.
    pub fn sample(&self, seed: u64) -> Result<SampledBody, Error> {
        self.validate()?;
        let mut last = Error::DegenerateBody("sampler produced no body");
        for attempt in 0..MAX_RESAMPLES {
            let mut rng = seeded(derive_seed(seed, attempt));
            match self.draw(&mut rng) {
                Ok(s) => return Ok(s),
                Err(e @ Error::DegenerateBody(_)) => last = e,
                Err(e) => return Err(e),
            }
        }
        Err(last)
    }

    fn draw(&self, rng: &mut SeededRng) -> Result<SampledBody, Error> {
        let dim = self.dim();
        match *self {
            Sampler::SphereHull { points, radius, .. } => {
                let pts: Vec<Vector> = (0..points)
                    .map(|_| Vector::new(unit_vector(rng, dim)).map(|v| v.scaled(radius)))
                    .collect::<Result<_, _>>()?;
                hull(pts)
            }
            Sampler::Ellipsoid {
                min_axis, max_axis, ..
            } => {
                let (lo, hi) = (min_axis.ln(), max_axis.ln());
                let axes: Vec<f64> = (0..dim).map(|_| uniform(rng, lo, hi).exp()).collect();
                let radius = axes.iter().copied().fold(0.0, f64::max);
                Ok(SampledBody {
                    body: Body::ellipsoid(&axes)?,
                    points: None,
                    radius,
                })
            }
            Sampler::Zonotope {
                segments, radius, ..
            } => {
                let gens: Vec<Vec<f64>> = (0..segments)
                    .map(|_| {
                        let len = uniform(rng, radius / 4.0, radius);
                        unit_vector(rng, dim).into_iter().map(|c| c * len).collect()
                    })
                    .collect();
                // Half of the signed sums; symmetrization adds the rest.
                let mut sums = Vec::new();
                for mask in 0..(1usize << (segments - 1)) {
                    let mut s = gens[segments - 1].clone();
                    for (i, g) in gens.iter().enumerate().take(segments - 1) {
                        axpy(&mut s, if mask >> i & 1 == 1 { -1.0 } else { 1.0 }, g);
                    }
                    sums.push(Vector::new(s)?);
                }
                hull(sums)
            }
            Sampler::Hexagon {
                min_radius,
                max_radius,
            } => {
                let pts: Vec<Vector> = (0..3)
                    .map(|i| {
                        let theta =
                            core::f64::consts::PI * (i as f64 + uniform(rng, 0.0, 1.0)) / 3.0;
                        let r = uniform(rng, min_radius, max_radius);
                        Vector::new(alloc::vec![r * theta.cos(), r * theta.sin()])
                    })
                    .collect::<Result<_, _>>()?;
                hull(pts)
            }
            Sampler::Ball { radius, .. } => Ok(SampledBody {
                body: Body::ball(dim, radius)?,
                points: None,
                radius,
            }),
        }
    }
}

fn hull(points: Vec<Vector>) -> Result<SampledBody, Error> {
    let body = Body::vpolytope(&points)?;
    let radius = body.circumradius_bound();
    Ok(SampledBody {
        body,
        points: Some(points),
        radius,
    })
}
