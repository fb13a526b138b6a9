use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::covering::{CandidateStream, SeparatedSet, covering_bounds_on, separated_from};
use crate::rng::{derive_seed, seeded, unit_vector};
use crate::vector::{dot, norm, scale, sub};
use crate::{Body, Error, OracleTolerance, Vector};

/// Output of [`net_transfer_polar`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetTransfer {
    /// One point of `D` per input net point, in input order.
    pub points: Vec<Vector>,
    /// Indices whose translate `y_i + ρT°` misses `D`. Their output is the
    /// radial projection and covers nothing the others do not.
    pub unused: Vec<usize>,
    /// `2ρ + 2`.
    pub bound: f64,
    /// Largest `min_i ‖y − z_i‖_{K°}` over the verification sample.
    pub max_gauge: f64,
    /// The same quantity measured to the original net points `y_i`.
    pub max_gauge_to_net: f64,
    pub samples: usize,
}

/// Moves a `ρT°`-net of `D` into `D`, `T = conv(S)`, and certifies the result
/// as a `(2ρ + 2)K°`-net of `D` on a verification sample.
///
/// Needs `S ⊂ K ⊂ conv(S) + D`, checked on a candidate sample of `K`.
pub fn net_transfer_polar(
    s: &[Vector],
    k: &Body,
    rho: f64,
    net: &[Vector],
    budget: usize,
    seed: u64,
) -> Result<NetTransfer, Error> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            reason: "must be finite and positive",
        });
    }
    if net.is_empty() {
        return Err(Error::EmptyInput("net"));
    }
    let tol = OracleTolerance::default();
    let t = Body::vpolytope(s)?;
    let dim = k.dim();
    if t.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: t.dim(),
        });
    }
    for (i, p) in s.iter().enumerate() {
        if !k.contains_in(p, &tol) {
            return Err(Error::HypothesisViolated(format!(
                "S point {i} lies outside K"
            )));
        }
    }
    let hull_plus_ball = Body::minkowski(alloc::vec![t.clone(), Body::unit_ball(dim)])?;
    let k_sample = CandidateStream::build(k, budget, derive_seed(seed, 0x4e54_0001), &tol)?;
    if let Some(x) = k_sample
        .iter()
        .find(|x| !hull_plus_ball.contains_in(x, &tol))
    {
        return Err(Error::HypothesisViolated(format!(
            "K is not inside conv(S) + D near {x:?}"
        )));
    }

    let d = Body::unit_ball(dim);
    let d_sample = CandidateStream::build(&d, budget, derive_seed(seed, 0x4e54_0002), &tol)?;
    let t_polar = Body::polar(t.clone());
    let reach = rho * (1.0 + tol.membership_slack);
    for y in d_sample.iter() {
        if !net.iter().any(|c| {
            t_polar
                .gauge_in(&sub(y, c), tol.bisection_tol, Some(reach))
                .1
                <= reach
        }) {
            return Err(Error::HypothesisViolated(format!(
                "net is not a rho T°-net of D near {y:?}"
            )));
        }
    }

    let vertices = t.vertices().expect("built as a vertex polytope");
    let mut points = Vec::with_capacity(net.len());
    let mut unused = Vec::new();
    for (i, y) in net.iter().enumerate() {
        match pull_into_ball(y, &vertices, &t_polar, rho, &tol) {
            Some(z) => points.push(Vector::new(z)?),
            None => {
                unused.push(i);
                points.push(Vector::new(radial(y))?);
            }
        }
    }

    let bound = 2.0 * rho + 2.0;
    let k_polar = Body::polar(k.clone());
    let nearest = |y: &[f64], centers: &[Vector]| {
        centers
            .iter()
            .map(|c| k_polar.gauge_in(&sub(y, c), tol.bisection_tol, None).1)
            .fold(f64::INFINITY, f64::min)
    };
    let mut max_gauge: f64 = 0.0;
    let mut max_gauge_to_net: f64 = 0.0;
    for y in d_sample.iter() {
        max_gauge = max_gauge.max(nearest(y, &points));
        max_gauge_to_net = max_gauge_to_net.max(nearest(y, net));
    }
    if max_gauge > bound * (1.0 + tol.membership_slack) {
        return Err(Error::CertificationFailure(format!(
            "transferred net reaches only {max_gauge} > {bound} in the K° gauge"
        )));
    }
    Ok(NetTransfer {
        points,
        unused,
        bound,
        max_gauge,
        max_gauge_to_net,
        samples: d_sample.len(),
    })
}

fn radial(y: &[f64]) -> Vec<f64> {
    let r = norm(y);
    if r <= 1.0 {
        y.to_vec()
    } else {
        scale(y, 1.0 / r)
    }
}

/// A point of `D ∩ (y + ρT°)`, or `None` when the two are disjoint.
/// `y + ρT°` is the slab intersection `|⟨v, z − y⟩| ≤ ρ` over the vertices
/// `v` of `T`; its least-norm point is found by Dykstra's method.
fn pull_into_ball(
    y: &[f64],
    vertices: &[Vector],
    t_polar: &Body,
    rho: f64,
    tol: &OracleTolerance,
) -> Option<Vec<f64>> {
    if norm(y) <= 1.0 {
        return Some(y.to_vec());
    }
    let within = |z: &[f64]| t_polar.gauge_in(&sub(z, y), tol.bisection_tol, Some(rho)).1 <= rho;
    let p = radial(y);
    if within(&p) {
        return Some(p);
    }
    let n = y.len();
    let mut z = alloc::vec![0.0; n];
    let mut corr = alloc::vec![alloc::vec![0.0; n]; vertices.len()];
    for _ in 0..20_000 {
        let prev = z.clone();
        for (v, c) in vertices.iter().zip(corr.iter_mut()) {
            let w: Vec<f64> = z.iter().zip(c.iter()).map(|(a, b)| a + b).collect();
            let vv = dot(v, v);
            let s = dot(v, &w) - dot(v, y);
            let shift = if s > rho {
                s - rho
            } else if s < -rho {
                s + rho
            } else {
                0.0
            };
            for ((zi, wi), vi) in z.iter_mut().zip(&w).zip(v.iter()) {
                *zi = wi - shift / vv * vi;
            }
            for ((ci, wi), zi) in c.iter_mut().zip(&w).zip(&z) {
                *ci = wi - zi;
            }
        }
        if norm(&sub(&z, &prev)) <= 1e-13 {
            break;
        }
    }
    // Dykstra converges from outside the slabs; nudge toward y until the
    // point is certified inside them.
    let mut lam = 0.0;
    let at = |l: f64| -> Vec<f64> { z.iter().zip(y).map(|(a, b)| a + l * (b - a)).collect() };
    while !within(&at(lam)) && lam < 1.0 {
        lam = if lam == 0.0 { 1e-12 } else { 2.0 * lam };
    }
    let lam = lam.min(1.0);
    let cand = at(lam);
    (norm(&cand) <= 1.0 && within(&cand)).then_some(cand)
}

/// `sample_slack` is the gap between the euclidean norm of the chosen
/// diameter endpoint and the largest support value seen while searching.
#[derive(Debug, Clone)]
pub struct DiameterSet {
    pub set: SeparatedSet,
    pub endpoint: Vector,
    pub sample_slack: f64,
    pub covering_lower: usize,
}

/// A 1-separated subset of `K` that contains an approximate diameter pair
/// `±x`, completed greedily. Fails when `N(K, D)` is not certified `≥ 2`.
pub fn diameter_realizing_separated(
    k: &Body,
    budget: usize,
    seed: u64,
) -> Result<DiameterSet, Error> {
    let tol = OracleTolerance::default();
    let dim = k.dim();
    let stream_seed = derive_seed(seed, 0x4449_414d);
    let stream = CandidateStream::build(k, budget, stream_seed, &tol)?;
    let est = covering_bounds_on(k, &Body::unit_ball(dim), 1.0, &stream, &tol)?;
    if est.lower < 2 {
        return Err(Error::HypothesisViolated(
            "N(K, D) = 1 has no 1-separated pair".into(),
        ));
    }
    let (x, best_support) = farthest_point(k, budget, seed, &tol);
    let endpoint = Vector::new(x)?;
    let mandatory = [endpoint.clone(), endpoint.neg()];
    let d = Body::unit_ball(dim);
    let set = separated_from(k, &d, 1.0, stream.iter(), &mandatory, &tol)?;
    set.verify(&tol)?;
    if set.len() < est.lower {
        return Err(Error::CertificationFailure(format!(
            "completed set has {} points, below the packing bound {}",
            set.len(),
            est.lower
        )));
    }
    let sample_slack = (best_support - endpoint.norm()).max(0.0);
    Ok(DiameterSet {
        set,
        endpoint,
        sample_slack,
        covering_lower: est.lower,
    })
}

/// Point of `K` of largest euclidean norm: exact over vertices, otherwise
/// support-point power iteration from coordinate and random directions.
/// Also returns the largest support value met on the way.
fn farthest_point(k: &Body, budget: usize, seed: u64, tol: &OracleTolerance) -> (Vec<f64>, f64) {
    if let Some(vs) = k.vertices() {
        let v = vs
            .into_iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("non-empty");
        let r = v.norm();
        return (v.into_inner(), r);
    }
    let dim = k.dim();
    let mut rng = seeded(derive_seed(seed, 0x4641_5250));
    let starts = (budget / 100).clamp(2 * dim, 200);
    let mut best = alloc::vec![0.0; dim];
    let mut best_norm = 0.0;
    let mut best_support: f64 = 0.0;
    for i in 0..starts {
        let mut u = if i < dim {
            let mut e = alloc::vec![0.0; dim];
            e[i] = 1.0;
            e
        } else {
            unit_vector(&mut rng, dim)
        };
        for _ in 0..50 {
            let (_, hi, p) = k.support_full(&u, tol.bisection_tol);
            best_support = best_support.max(hi);
            let r = norm(&p);
            if r > best_norm {
                best_norm = r;
                best = p.clone();
            }
            if r == 0.0 {
                break;
            }
            let next = scale(&p, 1.0 / r);
            if norm(&sub(&next, &u)) < 1e-12 {
                break;
            }
            u = next;
        }
    }
    (best, best_support)
}
