use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::cutting::{Cut, gauge_via_support};
use super::{Body, BodyKind};
use crate::error::check_dim;
use crate::lp::StandardLp;
use crate::vector::{axpy, dot, norm};
use crate::{Error, OracleTolerance, Vector};

/// A support function value. `value` is always an upper bound for `h_K(u)`
/// and `lower` a lower bound attained by a point of `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub value: f64,
    pub lower: f64,
    pub exact: bool,
}

impl Support {
    fn from_bracket(lo: f64, hi: f64) -> Self {
        Self {
            value: hi,
            lower: lo,
            exact: tight(lo, hi),
        }
    }
}

fn tight(lo: f64, hi: f64) -> bool {
    hi - lo <= 4.0 * f64::EPSILON * hi.abs()
}

fn close(lo: f64, hi: f64, rel_tol: f64) -> bool {
    hi - lo <= rel_tol * hi
}

fn decided(lo: f64, hi: f64, rel_tol: f64, threshold: Option<f64>) -> bool {
    close(lo, hi, rel_tol) || matches!(threshold, Some(t) if lo > t || hi <= t)
}

impl Body {
    /// `h_K(u)` from the closed forms only. Intersections have none: there
    /// `value` is the minimum of the parts' supports and `exact` is `false`
    /// unless a part's support point happens to lie in the intersection.
    /// The same holds for polars of Minkowski sums.
    pub fn support(&self, u: &[f64]) -> Result<Support, Error> {
        check_dim(self.dim, u.len())?;
        let (lo, hi) = self.support_in(u, f64::INFINITY, None);
        Ok(Support::from_bracket(lo, hi))
    }

    /// `h_K(u)` refined by cutting planes to relative accuracy
    /// `tol.bisection_tol` where no closed form exists.
    pub fn support_refined(&self, u: &[f64], tol: &OracleTolerance) -> Result<Support, Error> {
        check_dim(self.dim, u.len())?;
        let (lo, hi) = self.support_in(u, tol.bisection_tol, None);
        Ok(Support::from_bracket(lo, hi))
    }

    /// A point `y ∈ K` with `⟨u, y⟩` equal to the lower support bound.
    pub fn support_point(&self, u: &[f64], tol: &OracleTolerance) -> Result<Vector, Error> {
        check_dim(self.dim, u.len())?;
        Vector::new(self.support_full(u, tol.bisection_tol).2)
    }

    /// `‖z‖_K` to relative accuracy `tol.bisection_tol` (midpoint of the
    /// certified bracket).
    pub fn gauge(&self, z: &[f64], tol: &OracleTolerance) -> Result<f64, Error> {
        let (lo, hi) = self.gauge_bracket(z, tol)?;
        Ok(if tight(lo, hi) { hi } else { 0.5 * (lo + hi) })
    }

    /// Certified `(lower, upper)` bounds on `‖z‖_K`.
    pub fn gauge_bracket(&self, z: &[f64], tol: &OracleTolerance) -> Result<(f64, f64), Error> {
        check_dim(self.dim, z.len())?;
        Ok(self.gauge_in(z, tol.bisection_tol, None))
    }

    /// A functional `g ∈ K°` with `⟨g, z⟩` equal to the lower gauge bound.
    pub fn gauge_subgradient(&self, z: &[f64], tol: &OracleTolerance) -> Result<Vector, Error> {
        check_dim(self.dim, z.len())?;
        Vector::new(self.gauge_full(z, tol.bisection_tol).2)
    }

    /// `true` if `x ∈ (1 + membership_slack)·K`, `false` if `x ∉ K`.
    pub fn contains(&self, x: &[f64], tol: &OracleTolerance) -> Result<bool, Error> {
        check_dim(self.dim, x.len())?;
        Ok(self.contains_in(x, tol))
    }

    pub(crate) fn contains_in(&self, x: &[f64], tol: &OracleTolerance) -> bool {
        let (lo, hi) = self.gauge_in(x, tol.bisection_tol, Some(1.0));
        if hi <= 1.0 + tol.membership_slack {
            true
        } else if lo > 1.0 {
            false
        } else {
            0.5 * (lo + hi) <= 1.0
        }
    }

    /// Bracket on `h_K(u)`; refinement stops at `rel_tol` or once the bracket
    /// decides against `threshold`.
    pub(crate) fn support_in(&self, u: &[f64], rel_tol: f64, threshold: Option<f64>) -> (f64, f64) {
        match &self.kind {
            BodyKind::Ball { radius } => exact(radius * norm(u)),
            BodyKind::Ellipsoid { semiaxes } => exact(ellipsoid_support(semiaxes, u)),
            BodyKind::VPolytope { vertices, .. } => exact(
                vertices
                    .chunks_exact(self.dim)
                    .map(|v| dot(v, u))
                    .fold(0.0, f64::max),
            ),
            BodyKind::Scale { factor, of } => {
                let (lo, hi) = of.support_in(u, rel_tol, threshold.map(|t| t / factor));
                (factor * lo, factor * hi)
            }
            BodyKind::Polar(of) => of.gauge_in(u, rel_tol, threshold),
            BodyKind::Minkowski(parts) => parts.iter().fold((0.0, 0.0), |(lo, hi), p| {
                let (l, h) = p.support_in(u, rel_tol, None);
                (lo + l, hi + h)
            }),
            BodyKind::Intersect(parts) => {
                let (lo, hi, _) = intersect_support(self, parts, u, rel_tol, threshold);
                (lo, hi)
            }
        }
    }

    /// Bracket on `h_K(u)` with a point of `K` attaining the lower end.
    pub(crate) fn support_full(&self, u: &[f64], rel_tol: f64) -> (f64, f64, Vec<f64>) {
        match &self.kind {
            BodyKind::Ball { radius } => {
                let r = norm(u);
                let p = if r > 0.0 {
                    u.iter().map(|c| radius * c / r).collect()
                } else {
                    vec![0.0; self.dim]
                };
                (radius * r, radius * r, p)
            }
            BodyKind::Ellipsoid { semiaxes } => {
                let h = ellipsoid_support(semiaxes, u);
                let p = if h > 0.0 {
                    semiaxes.iter().zip(u).map(|(a, c)| a * a * c / h).collect()
                } else {
                    vec![0.0; self.dim]
                };
                (h, h, p)
            }
            BodyKind::VPolytope { vertices, .. } => {
                let (h, v) = vertices
                    .chunks_exact(self.dim)
                    .map(|v| (dot(v, u), v))
                    .fold((f64::NEG_INFINITY, &vertices[..self.dim]), |best, c| {
                        if c.0 > best.0 { c } else { best }
                    });
                (h, h, v.to_vec())
            }
            BodyKind::Scale { factor, of } => {
                let (lo, hi, p) = of.support_full(u, rel_tol);
                (
                    factor * lo,
                    factor * hi,
                    p.iter().map(|c| factor * c).collect(),
                )
            }
            BodyKind::Polar(of) => of.gauge_full(u, rel_tol),
            BodyKind::Minkowski(parts) => {
                let mut acc = (0.0, 0.0, vec![0.0; self.dim]);
                for p in parts {
                    let (l, h, q) = p.support_full(u, rel_tol);
                    acc.0 += l;
                    acc.1 += h;
                    axpy(&mut acc.2, 1.0, &q);
                }
                acc
            }
            BodyKind::Intersect(parts) => intersect_support(self, parts, u, rel_tol, None),
        }
    }

    /// Bracket on `‖z‖_K`; refinement stops at `rel_tol` or once the bracket
    /// decides against `threshold`.
    pub(crate) fn gauge_in(&self, z: &[f64], rel_tol: f64, threshold: Option<f64>) -> (f64, f64) {
        match &self.kind {
            BodyKind::Ball { radius } => exact(norm(z) / radius),
            BodyKind::Ellipsoid { semiaxes } => exact(ellipsoid_gauge(semiaxes, z)),
            BodyKind::VPolytope { vertices, count } => {
                let (lo, hi, _) = polytope_gauge(self, vertices, *count, z);
                (lo, hi)
            }
            BodyKind::Scale { factor, of } => {
                let (lo, hi) = of.gauge_in(z, rel_tol, threshold.map(|t| t * factor));
                (lo / factor, hi / factor)
            }
            BodyKind::Polar(of) => of.support_in(z, rel_tol, threshold),
            BodyKind::Intersect(parts) => {
                let mut acc = (0.0, 0.0);
                for p in parts {
                    let (l, h) = p.gauge_in(z, rel_tol, threshold);
                    acc = (acc.0.max(l), acc.1.max(h));
                    if matches!(threshold, Some(t) if acc.0 > t) {
                        break;
                    }
                }
                acc
            }
            BodyKind::Minkowski(parts) => {
                let (lo, hi, _) = minkowski_gauge(self, parts, z, rel_tol, threshold);
                (lo, hi)
            }
        }
    }

    /// Bracket on `‖z‖_K` with a functional of `K°` attaining the lower end.
    pub(crate) fn gauge_full(&self, z: &[f64], rel_tol: f64) -> (f64, f64, Vec<f64>) {
        match &self.kind {
            BodyKind::Ball { radius } => {
                let r = norm(z);
                let g = if r > 0.0 {
                    z.iter().map(|c| c / (radius * r)).collect()
                } else {
                    vec![0.0; self.dim]
                };
                (r / radius, r / radius, g)
            }
            BodyKind::Ellipsoid { semiaxes } => {
                let v = ellipsoid_gauge(semiaxes, z);
                let g = if v > 0.0 {
                    semiaxes
                        .iter()
                        .zip(z)
                        .map(|(a, c)| c / (a * a * v))
                        .collect()
                } else {
                    vec![0.0; self.dim]
                };
                (v, v, g)
            }
            BodyKind::VPolytope { vertices, count } => polytope_gauge(self, vertices, *count, z),
            BodyKind::Scale { factor, of } => {
                let (lo, hi, g) = of.gauge_full(z, rel_tol);
                (
                    lo / factor,
                    hi / factor,
                    g.iter().map(|c| c / factor).collect(),
                )
            }
            BodyKind::Polar(of) => of.support_full(z, rel_tol),
            BodyKind::Intersect(parts) => {
                let mut best: Option<(f64, Vec<f64>)> = None;
                let mut hi: f64 = 0.0;
                for p in parts {
                    let (l, h, g) = p.gauge_full(z, rel_tol);
                    hi = hi.max(h);
                    if best.as_ref().is_none_or(|b| l > b.0) {
                        best = Some((l, g));
                    }
                }
                let (lo, g) = best.expect("intersection has parts");
                (lo, hi, g)
            }
            BodyKind::Minkowski(parts) => minkowski_gauge(self, parts, z, rel_tol, None),
        }
    }
}

fn exact(v: f64) -> (f64, f64) {
    (v, v)
}

fn ellipsoid_support(a: &[f64], u: &[f64]) -> f64 {
    a.iter()
        .zip(u)
        .map(|(a, c)| a * a * c * c)
        .sum::<f64>()
        .sqrt()
}

fn ellipsoid_gauge(a: &[f64], z: &[f64]) -> f64 {
    a.iter()
        .zip(z)
        .map(|(a, c)| c * c / (a * a))
        .sum::<f64>()
        .sqrt()
}

/// `min Σμ` subject to `Σ μᵢ vᵢ = z`, `μ ≥ 0`; the dual is the subgradient.
fn polytope_gauge(body: &Body, vertices: &[f64], count: usize, z: &[f64]) -> (f64, f64, Vec<f64>) {
    let n = body.dim;
    let zn = norm(z);
    if zn == 0.0 {
        return (0.0, 0.0, vec![0.0; n]);
    }
    let mut a = vec![0.0; n * count];
    for (j, v) in vertices.chunks_exact(n).enumerate() {
        for r in 0..n {
            a[r * count + j] = v[r];
        }
    }
    let solved = StandardLp::new(a, z.to_vec(), vec![1.0; count]).and_then(|lp| lp.solve());
    match solved {
        Ok(sol) => (sol.objective, sol.objective, sol.duals),
        Err(_) => {
            // K ⊆ R·D and r·D ⊆ K bound the gauge without the LP.
            let r = body.circumradius;
            (
                zn / r,
                zn / body.inradius,
                z.iter().map(|c| c / (r * zn)).collect(),
            )
        }
    }
}

/// Support of `⋂ Kᵢ`. The cheap bracket takes the best part support point
/// pulled back into the intersection as lower end and `min hᵢ` as upper end.
/// When that is not tight, cutting planes on `conv(⋃ Kᵢ°)` refine both.
fn intersect_support(
    body: &Body,
    parts: &[alloc::sync::Arc<Body>],
    u: &[f64],
    rel_tol: f64,
    threshold: Option<f64>,
) -> (f64, f64, Vec<f64>) {
    let mut hi = f64::INFINITY;
    let mut lo = 0.0;
    let mut point = vec![0.0; body.dim];
    for p in parts {
        let (_, h, q) = p.support_full(u, rel_tol);
        hi = hi.min(h);
        let g = parts
            .iter()
            .map(|r| r.gauge_in(&q, rel_tol, None).1)
            .fold(0.0, f64::max);
        if g > 0.0 {
            let v = dot(u, &q) / g;
            if v > lo {
                lo = v;
                point = q.iter().map(|c| c / g).collect();
            }
        }
    }
    if !rel_tol.is_finite() || decided(lo, hi, rel_tol, threshold) {
        return (lo, hi, point);
    }
    let oracle = |y: &[f64]| {
        let mut best: (f64, Vec<f64>) = (f64::NEG_INFINITY, Vec::new());
        for p in parts {
            let (_, h, g) = p.gauge_full(y, rel_tol);
            if h > best.0 {
                best = (h, g);
            }
        }
        best
    };
    let Cut {
        lo: clo,
        hi: chi,
        dual,
    } = gauge_via_support(u, 1.0 / body.circumradius, &oracle, rel_tol, threshold);
    if clo > lo {
        lo = clo;
        point = dual;
    }
    (lo, hi.min(chi), point)
}

/// Gauge of `Σ Kᵢ`. Cheap bracket from `‖z‖ ≤ minᵢ ‖z‖_{Kᵢ}` and the dual
/// direction `z`, then cutting planes using `h = Σ hᵢ`.
fn minkowski_gauge(
    body: &Body,
    parts: &[alloc::sync::Arc<Body>],
    z: &[f64],
    rel_tol: f64,
    threshold: Option<f64>,
) -> (f64, f64, Vec<f64>) {
    let zn = norm(z);
    if zn == 0.0 {
        return (0.0, 0.0, vec![0.0; body.dim]);
    }
    let mut hi = zn / body.inradius;
    for p in parts {
        hi = hi.min(p.gauge_in(z, rel_tol, None).1);
    }
    let h: f64 = parts.iter().map(|p| p.support_in(z, rel_tol, None).1).sum();
    let lo = zn * zn / h;
    let dual: Vec<f64> = z.iter().map(|c| c / h).collect();
    if !rel_tol.is_finite() || decided(lo, hi, rel_tol, threshold) {
        return (lo, hi, dual);
    }
    let oracle = |y: &[f64]| {
        let mut acc = (0.0, vec![0.0; body.dim]);
        for p in parts {
            let (_, h, q) = p.support_full(y, rel_tol);
            acc.0 += h;
            axpy(&mut acc.1, 1.0, &q);
        }
        acc
    };
    let cut = gauge_via_support(z, body.inradius, &oracle, rel_tol, threshold);
    if cut.lo > lo {
        (cut.lo, hi.min(cut.hi), cut.dual)
    } else {
        (lo, hi.min(cut.hi), dual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tol() -> OracleTolerance {
        OracleTolerance::default()
    }

    fn poly(pts: &[[f64; 2]]) -> Body {
        Body::vpolytope(&pts.iter().map(|p| Vector::from(*p)).collect::<Vec<_>>()).unwrap()
    }

    fn square() -> Body {
        poly(&[[1.0, 1.0], [1.0, -1.0]])
    }

    fn cross() -> Body {
        poly(&[[1.0, 0.0], [0.0, 1.0]])
    }

    #[test]
    fn support_examples() {
        assert_eq!(Body::unit_ball(2).support(&[0.0, 1.0]).unwrap().value, 1.0);
        assert_eq!(square().support(&[1.0, 1.0]).unwrap().value, 2.0);
        let e = Body::ellipsoid(&[2.0, 0.5]).unwrap();
        let s = e.support(&[1.0, 0.0]).unwrap();
        assert_eq!(s.value, 2.0);
        assert!(s.exact);
    }

    #[test]
    fn contains_examples() {
        let t = tol();
        assert!(Body::unit_ball(2).contains(&[0.5, 0.5], &t).unwrap());
        let diamond2 = poly(&[[2.0, 0.0], [0.0, 2.0]]);
        assert!(Body::polar(diamond2).contains(&[0.5, 0.0], &t).unwrap());
        assert!(!cross().contains(&[0.9, 0.9], &t).unwrap());
    }

    #[test]
    fn gauge_examples() {
        let t = tol();
        assert!((square().gauge(&[2.0, 0.0], &t).unwrap() - 2.0).abs() < 1e-12);
        assert!((Body::polar(square()).gauge(&[1.0, 1.0], &t).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(
            Body::ball(2, 2.0).unwrap().gauge(&[0.0, 3.0], &t).unwrap(),
            1.5
        );
        assert_eq!(square().gauge(&[0.0, 0.0], &t).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = Body::unit_ball(2).support(&[1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 1
            }
        );
        assert!(square().contains(&[1.0, 0.0, 0.0], &tol()).is_err());
    }

    #[test]
    fn polytope_subgradient_is_polar_feasible() {
        let g = square().gauge_subgradient(&[0.7, 0.2], &tol()).unwrap();
        assert!((dot(&g, &[0.7, 0.2]) - 0.7).abs() < 1e-12);
        assert!(g.iter().map(|c| c.abs()).sum::<f64>() <= 1.0 + 1e-12);
    }

    #[test]
    fn intersection_support_is_flagged_then_refined() {
        // Square ∩ disk of radius 1.2: h(e₁) = 1, attained by (1, 0).
        let k = Body::intersect(vec![square(), Body::ball(2, 1.2).unwrap()]).unwrap();
        let s = k.support(&[1.0, 0.0]).unwrap();
        assert!(s.lower <= 1.0 + 1e-12 && s.value >= 1.0 - 1e-12);
        // At u = (1, 0.2) the maximizer is the corner (1, √0.44) of the two boundaries.
        let u = [1.0, 0.2];
        let quick = k.support(&u).unwrap();
        assert!(!quick.exact);
        let r = k.support_refined(&u, &tol()).unwrap();
        let truth = 1.0 + 0.2 * 0.44f64.sqrt();
        assert!(r.lower <= truth + 1e-9 && r.value >= truth - 1e-9);
        assert!(r.value - r.lower < 1e-8);
        let p = k.support_point(&u, &tol()).unwrap();
        assert!(k.contains(&p, &tol()).unwrap());
    }

    #[test]
    fn minkowski_gauge_matches_closed_form() {
        // D + D = 2D.
        let m = Body::minkowski(vec![Body::unit_ball(2), Body::unit_ball(2)]).unwrap();
        let (lo, hi) = m.gauge_bracket(&[1.0, 1.0], &tol()).unwrap();
        let truth = 2f64.sqrt() / 2.0;
        assert!(lo <= truth + 1e-12 && hi >= truth - 1e-12);
        // square + D: gauge at (3, 0) is 3/2.
        let m = Body::minkowski(vec![square(), Body::unit_ball(2)]).unwrap();
        let (lo, hi) = m.gauge_bracket(&[3.0, 0.0], &tol()).unwrap();
        assert!(lo <= 1.5 + 1e-12 && hi >= 1.5 - 1e-12 && hi - lo < 1e-8);
        // Point (2.2, 2.2) is outside: square corner plus unit disk reaches (1+√½)(1,1).
        assert!(!m.contains(&[2.2, 2.2], &tol()).unwrap());
        assert!(m.contains(&[1.7, 1.7], &tol()).unwrap());
    }

    #[test]
    fn polar_of_polar_agrees() {
        let e = Body::ellipsoid(&[3.0, 0.5]).unwrap();
        let pp = Body::polar(Body::polar(e.clone()));
        let z = [0.4, -1.1];
        assert!((pp.gauge(&z, &tol()).unwrap() - e.gauge(&z, &tol()).unwrap()).abs() < 1e-12);
    }
}
