//! Symmetric convex bodies as composable oracle trees.
//!
//! A [`Body`] is never converted to a vertex or halfspace description.
//! Polars, intersections, dilations and Minkowski sums are kept symbolic and
//! every query is answered by recursing into the parts:
//!
//! | variant      | support `h_K`          | gauge `‖·‖_K`             |
//! |--------------|------------------------|---------------------------|
//! | `Ball`       | `r·|u|`                | `|z|/r`                   |
//! | `Ellipsoid`  | `√Σ aᵢ²uᵢ²`            | `√Σ zᵢ²/aᵢ²`              |
//! | `VPolytope`  | max over vertices      | LP                        |
//! | `Polar(K)`   | `‖u‖_K`                | `h_K(z)`                  |
//! | `Intersect`  | cutting planes         | max over parts            |
//! | `Scale(s,K)` | `s·h_K`                | `‖z‖_K / s`               |
//! | `Minkowski`  | sum over parts         | cutting planes            |
//!
//! Every body is symmetric, bounded and contains a ball around the origin;
//! constructors certify a positive inradius bound or fail.

mod cutting;
mod oracle;

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{check_dim, positive};
use crate::{Error, Vector};

pub use oracle::Support;

#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    dim: usize,
    kind: BodyKind,
    inradius: f64,
    circumradius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BodyKind {
    Ball {
        radius: f64,
    },
    Ellipsoid {
        semiaxes: Arc<[f64]>,
    },
    /// Symmetrized vertex list, row-major `count × dim`.
    VPolytope {
        vertices: Arc<[f64]>,
        count: usize,
    },
    Polar(Arc<Body>),
    Intersect(Vec<Arc<Body>>),
    Scale {
        factor: f64,
        of: Arc<Body>,
    },
    Minkowski(Vec<Arc<Body>>),
}

impl Body {
    /// The euclidean ball `r·D` in ℝⁿ.
    pub fn ball(dim: usize, radius: f64) -> Result<Self, Error> {
        check_dimension(dim)?;
        let radius = positive("radius", radius)?;
        Ok(Self {
            dim,
            kind: BodyKind::Ball { radius },
            inradius: radius,
            circumradius: radius,
        })
    }

    /// The unit ball `D`.
    pub fn unit_ball(dim: usize) -> Self {
        Self::ball(dim, 1.0).expect("positive dimension")
    }

    /// The interval `[-r, r] ⊂ ℝ¹`.
    pub fn interval(radius: f64) -> Result<Self, Error> {
        Self::ball(1, radius)
    }

    pub fn ellipsoid(semiaxes: &[f64]) -> Result<Self, Error> {
        check_dimension(semiaxes.len())?;
        for &a in semiaxes {
            positive("semiaxis", a)?;
        }
        let max = semiaxes.iter().copied().fold(0.0, f64::max);
        let min = semiaxes.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self {
            dim: semiaxes.len(),
            kind: BodyKind::Ellipsoid {
                semiaxes: semiaxes.into(),
            },
            inradius: min,
            circumradius: max,
        })
    }

    /// Symmetric hull `conv(±v₁, …, ±v_m)`. Rejected when the hull has empty
    /// interior.
    pub fn vpolytope(vertices: &[Vector]) -> Result<Self, Error> {
        let first = vertices
            .first()
            .ok_or(Error::EmptyInput("vpolytope needs vertices"))?;
        let dim = first.dim();
        let mut flat: Vec<f64> = Vec::with_capacity(2 * vertices.len() * dim);
        let mut count = 0;
        for v in vertices {
            check_dim(dim, v.dim())?;
            if v.iter().all(|&c| c == 0.0) {
                continue;
            }
            for sign in [1.0, -1.0] {
                let p: Vec<f64> = v.iter().map(|c| sign * c).collect();
                let dup = flat.chunks_exact(dim).any(|q| q == p.as_slice());
                if !dup {
                    flat.extend_from_slice(&p);
                    count += 1;
                }
            }
        }
        if count == 0 {
            return Err(Error::DegenerateBody("all vertices are zero"));
        }
        let inradius = gram_inradius_bound(&flat, count, dim).ok_or(Error::DegenerateBody(
            "symmetric hull of the vertices has empty interior",
        ))?;
        let circumradius = flat
            .chunks_exact(dim)
            .map(crate::vector::norm)
            .fold(0.0, f64::max);
        Ok(Self {
            dim,
            kind: BodyKind::VPolytope {
                vertices: flat.into(),
                count,
            },
            inradius,
            circumradius,
        })
    }

    pub fn polar(of: Body) -> Self {
        Self::polar_arc(Arc::new(of))
    }

    pub fn polar_arc(of: Arc<Body>) -> Self {
        Self {
            dim: of.dim,
            inradius: 1.0 / of.circumradius,
            circumradius: 1.0 / of.inradius,
            kind: BodyKind::Polar(of),
        }
    }

    pub fn intersect(parts: Vec<Body>) -> Result<Self, Error> {
        Self::intersect_arcs(parts.into_iter().map(Arc::new).collect())
    }

    pub fn intersect_arcs(parts: Vec<Arc<Body>>) -> Result<Self, Error> {
        let dim = common_dim(&parts)?;
        let inradius = parts
            .iter()
            .map(|p| p.inradius)
            .fold(f64::INFINITY, f64::min);
        let circumradius = parts
            .iter()
            .map(|p| p.circumradius)
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            dim,
            kind: BodyKind::Intersect(parts),
            inradius,
            circumradius,
        })
    }

    /// `K ∩ R·D`, dropping the ball when it cannot cut `K`.
    pub fn intersect_ball(of: &Body, radius: f64) -> Result<Self, Error> {
        positive("radius", radius)?;
        if radius >= of.circumradius {
            return Ok(of.clone());
        }
        Self::intersect(alloc::vec![of.clone(), Body::ball(of.dim, radius)?])
    }

    pub fn scale(factor: f64, of: Body) -> Result<Self, Error> {
        Self::scale_arc(factor, Arc::new(of))
    }

    pub fn scale_arc(factor: f64, of: Arc<Body>) -> Result<Self, Error> {
        let factor = positive("factor", factor)?;
        Ok(Self {
            dim: of.dim,
            inradius: factor * of.inradius,
            circumradius: factor * of.circumradius,
            kind: BodyKind::Scale { factor, of },
        })
    }

    /// `s·K`, folding nested dilations and unit factors.
    pub fn scaled(&self, factor: f64) -> Result<Self, Error> {
        positive("factor", factor)?;
        match &self.kind {
            _ if factor == 1.0 => Ok(self.clone()),
            BodyKind::Ball { radius } => Body::ball(self.dim, radius * factor),
            BodyKind::Scale { factor: f, of } => Body::scale_arc(f * factor, of.clone()),
            _ => Body::scale(factor, self.clone()),
        }
    }

    pub fn minkowski(parts: Vec<Body>) -> Result<Self, Error> {
        Self::minkowski_arcs(parts.into_iter().map(Arc::new).collect())
    }

    pub fn minkowski_arcs(parts: Vec<Arc<Body>>) -> Result<Self, Error> {
        let dim = common_dim(&parts)?;
        let inradius = parts.iter().map(|p| p.inradius).sum();
        let circumradius = parts.iter().map(|p| p.circumradius).sum();
        Ok(Self {
            dim,
            kind: BodyKind::Minkowski(parts),
            inradius,
            circumradius,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    /// `R` with `K ⊆ R·D`. Exact for balls, ellipsoids and vertex polytopes.
    pub fn circumradius_bound(&self) -> f64 {
        self.circumradius
    }

    /// `r > 0` with `r·D ⊆ K`.
    pub fn inradius_bound(&self) -> f64 {
        self.inradius
    }

    /// Vertices of a `VPolytope` (symmetrized), `None` for other variants.
    pub fn vertices(&self) -> Option<Vec<Vector>> {
        match &self.kind {
            BodyKind::VPolytope { vertices, .. } => Some(
                vertices
                    .chunks_exact(self.dim)
                    .map(|v| Vector::new(v.to_vec()).expect("validated at construction"))
                    .collect(),
            ),
            _ => None,
        }
    }
}

fn check_dimension(dim: usize) -> Result<(), Error> {
    if dim == 0 {
        Err(Error::InvalidParameter {
            name: "dimension",
            reason: "must be at least 1",
        })
    } else {
        Ok(())
    }
}

fn common_dim(parts: &[Arc<Body>]) -> Result<usize, Error> {
    let first = parts
        .first()
        .ok_or(Error::EmptyInput("composite body needs parts"))?;
    for p in &parts[1..] {
        check_dim(first.dim, p.dim)?;
    }
    Ok(first.dim)
}

/// Lower bound on the inradius of `conv(V)` for a symmetric vertex set `V`.
///
/// `h(u) = max|⟨v,u⟩| ≥ √(uᵀGu / m) ≥ √(λ_min(G) / m)` with `G = Σ v vᵀ`, and
/// `λ_min ≥ 1 / tr(G⁻¹)`.
fn gram_inradius_bound(flat: &[f64], count: usize, dim: usize) -> Option<f64> {
    let mut g = alloc::vec![0.0; dim * dim];
    for v in flat.chunks_exact(dim) {
        for i in 0..dim {
            for j in 0..dim {
                g[i * dim + j] += v[i] * v[j];
            }
        }
    }
    let inv = crate::linalg::invert(g, dim, 1e-12)?;
    let trace: f64 = (0..dim).map(|i| inv[i * dim + i]).sum();
    if !(trace.is_finite() && trace > 0.0) {
        return None;
    }
    Some((1.0 / (trace * count as f64)).sqrt())
}
