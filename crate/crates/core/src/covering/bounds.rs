use alloc::vec::Vec;

use num_traits::Float;

use super::separated::{NearGrid, certified_apart, certified_within};
use super::stream::CandidateStream;
use crate::error::{check_dim, positive};
use crate::vector::norm;
use crate::{Body, Error, OracleTolerance, Vector};

/// Relative rounding allowance in net coverage tests; covered by the
/// reported inflation.
const NET_SLACK: f64 = 1e-12;

/// How far an upper bound can be trusted.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Certification {
    /// `lower = upper = N(K, tT)`.
    Exact,
    /// The centers cover every candidate at resolution `t` and all of `K` at
    /// resolution `t·(1 + inflation)`.
    SampleCertified { grid_pitch: f64, inflation: f64 },
    /// Optimal set cover of a finite sample by translates centered at finite
    /// candidates; `optimal` is false when the search budget ran out.
    Discrete { optimal: bool },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverEstimate {
    pub t: f64,
    pub lower: usize,
    pub upper: usize,
    pub centers: Vec<Vector>,
    pub certification: Certification,
    /// Certified lower bound on the largest `‖x‖_T` over the candidates.
    /// `N(K, tT) ≥ 2` whenever `t < max_gauge`.
    pub max_gauge: f64,
}

impl CoverEstimate {
    pub fn lower_bits(&self) -> f64 {
        (self.lower as f64).log2()
    }

    pub fn upper_bits(&self) -> f64 {
        (self.upper as f64).log2()
    }

    pub fn is_exact(&self) -> bool {
        self.certification == Certification::Exact
    }
}

/// Two-sided bounds on `N(K, tT)`.
///
/// The lower bound is the size of a greedy `2t`-separated set (no translate of
/// `tT` holds two of its points). The upper bound is the smallest of three
/// greedy `t`-nets of the candidate stream: centers at uncovered candidates,
/// centers pushed ahead of uncovered candidates along the last axis, and the
/// single center at the origin.
pub fn covering_bounds(
    k: &Body,
    t_body: &Body,
    t: f64,
    budget: usize,
    seed: u64,
) -> Result<CoverEstimate, Error> {
    covering_bounds_with(k, t_body, t, budget, seed, &OracleTolerance::default())
}

pub fn covering_bounds_with(
    k: &Body,
    t_body: &Body,
    t: f64,
    budget: usize,
    seed: u64,
    tol: &OracleTolerance,
) -> Result<CoverEstimate, Error> {
    positive("t", t)?;
    check_dim(k.dim(), t_body.dim())?;
    let stream = CandidateStream::build(k, budget, seed, tol)?;
    covering_bounds_on(k, t_body, t, &stream, tol)
}

/// Covering bounds from a prebuilt candidate stream of `K`.
pub fn covering_bounds_on(
    k: &Body,
    t_body: &Body,
    t: f64,
    stream: &CandidateStream,
    tol: &OracleTolerance,
) -> Result<CoverEstimate, Error> {
    positive("t", t)?;
    check_dim(k.dim(), t_body.dim())?;
    check_dim(k.dim(), stream.dim())?;
    let mut est = bounds_from_stream(k, t_body, t, stream, tol)?;
    if k.dim() == 1 {
        if let Some(centers) = interval_cover(k, t_body, t, tol) {
            est.lower = centers.len();
            est.upper = centers.len();
            est.centers = centers;
            est.certification = Certification::Exact;
        }
    }
    if k.circumradius_bound() <= t * t_body.inradius_bound() {
        est.lower = 1;
        est.upper = 1;
        est.centers = alloc::vec![Vector::zeros(k.dim())];
        est.certification = Certification::Exact;
    }
    Ok(est)
}

/// In one dimension `K = [−h, h]` and `tT = [−tτ, tτ]`, so
/// `N = ⌈h/(tτ)⌉` with touching intervals allowed. `None` when the support
/// brackets straddle an integer ratio.
fn interval_cover(k: &Body, t_body: &Body, t: f64, tol: &OracleTolerance) -> Option<Vec<Vector>> {
    let (h_lo, h_hi) = k.support_in(&[1.0], tol.bisection_tol, None);
    let (tau_lo, tau_hi) = t_body.support_in(&[1.0], tol.bisection_tol, None);
    let count = |x: f64| (x * (1.0 - NET_SLACK)).ceil().max(1.0);
    let n = count(h_lo / (t * tau_hi));
    if n != count(h_hi / (t * tau_lo)) {
        return None;
    }
    let step = t * tau_lo;
    let centers = (0..n as usize)
        .map(|i| {
            Vector::new(alloc::vec![(-h_lo + step * (2 * i + 1) as f64).min(h_lo)]).expect("finite")
        })
        .collect();
    Some(centers)
}

pub(crate) fn bounds_from_stream(
    k: &Body,
    t_body: &Body,
    t: f64,
    stream: &CandidateStream,
    tol: &OracleTolerance,
) -> Result<CoverEstimate, Error> {
    let lower = packing_count(t_body, 2.0 * t, stream, tol)?;

    let mut max_gauge: f64 = 0.0;
    for x in stream.iter() {
        max_gauge = max_gauge.max(t_body.gauge_in(x, tol.bisection_tol, None).0);
    }
    let mut best: Vec<Vector> = if stream
        .iter()
        .all(|x| certified_within(t_body, x, t * (1.0 + NET_SLACK), tol))
    {
        alloc::vec![Vector::zeros(k.dim())]
    } else {
        greedy_net(t_body, t, stream, None, tol)?
    };
    if best.len() > 1 {
        let pushed = greedy_net(t_body, t, stream, Some(k), tol)?;
        if pushed.len() < best.len() {
            best = pushed;
        }
    }

    // Any point of K is within the lattice covering radius d of a lattice node
    // of K after shrinking by 1 - d/r(K); the inflation follows.
    let d = stream.covering_radius();
    let inflation =
        d * (1.0 + k.circumradius_bound() / k.inradius_bound()) / t_body.inradius_bound() / t
            + NET_SLACK;
    Ok(CoverEstimate {
        t,
        lower,
        upper: best.len().max(lower),
        centers: best,
        certification: Certification::SampleCertified {
            grid_pitch: stream.pitch(),
            inflation,
        },
        max_gauge,
    })
}

fn packing_count(
    t_body: &Body,
    sep: f64,
    stream: &CandidateStream,
    tol: &OracleTolerance,
) -> Result<usize, Error> {
    let mut grid = NearGrid::new(stream.dim(), sep, t_body)?;
    for x in stream.iter() {
        if grid.all_near(x, |_, d| certified_apart(t_body, d, sep, tol)) {
            grid.insert(x);
        }
    }
    Ok(grid.len())
}

/// Greedy `t`-net of the stream. With `push = Some(K)` candidates are visited
/// in lexicographic order and each new center is moved a `T`-distance `t`
/// ahead of the uncovered candidate along the last axis, then pulled back
/// into `K`.
fn greedy_net(
    t_body: &Body,
    t: f64,
    stream: &CandidateStream,
    push: Option<&Body>,
    tol: &OracleTolerance,
) -> Result<Vec<Vector>, Error> {
    let dim = stream.dim();
    let mut order: Vec<usize> = (0..stream.len()).collect();
    let mut step = alloc::vec![0.0; dim];
    if push.is_some() {
        order.sort_by(|&a, &b| {
            let (p, q) = (stream.point(a), stream.point(b));
            p.iter()
                .zip(q)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let mut e = alloc::vec![0.0; dim];
        e[dim - 1] = 1.0;
        let g = t_body.gauge_in(&e, tol.bisection_tol, None).1;
        step[dim - 1] = t / g;
    }
    let reach = t * (1.0 + NET_SLACK);
    let mut grid = NearGrid::new(dim, reach, t_body)?;
    let mut centers = Vec::new();
    for &i in &order {
        let x = stream.point(i);
        if grid.any_near(x, |_, d| certified_within(t_body, d, reach, tol)) {
            continue;
        }
        let c = match push {
            Some(k) => pushed_center(k, t_body, t, x, &step, tol),
            None => x.to_vec(),
        };
        grid.insert(&c);
        centers.push(Vector::new(c)?);
    }
    Ok(centers)
}

fn pushed_center(
    k: &Body,
    t_body: &Body,
    t: f64,
    x: &[f64],
    step: &[f64],
    tol: &OracleTolerance,
) -> Vec<f64> {
    let at = |s: f64| -> Vec<f64> { x.iter().zip(step).map(|(a, b)| a + s * b).collect() };
    let mut c = at(1.0);
    if !k.contains_in(&c, tol) {
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if k.contains_in(&at(mid), tol) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        c = at(lo);
    }
    let d: Vec<f64> = c.iter().zip(x).map(|(a, b)| a - b).collect();
    if norm(&d) > 0.0 && !certified_within(t_body, &d, t * (1.0 + NET_SLACK), tol) {
        return x.to_vec();
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(r: f64) -> Body {
        Body::interval(r).unwrap()
    }

    #[test]
    fn interval_counts_are_exact() {
        let d = interval(1.0);
        let e = covering_bounds(&interval(5.0), &d, 1.0, 20_000, 7).unwrap();
        assert_eq!((e.lower, e.upper), (5, 5));
        for r in 1..=20 {
            for t in [1.0, 2.0, r as f64 / 2.0] {
                let e = covering_bounds(&interval(r as f64), &d, t, 20_000, 7).unwrap();
                let n = (r as f64 / t).ceil() as usize;
                assert_eq!((e.lower, e.upper), (n, n), "R = {r}, t = {t}");
            }
        }
    }

    #[test]
    fn fine_interval_resolutions() {
        let d = interval(1.0);
        for (r, t, n) in [
            (16.0, 0.25, 64),
            (3.0, 0.3, 10),
            (1.0, 0.1, 10),
            (7.5, 0.7, 11),
        ] {
            let e = covering_bounds(&interval(r), &d, t, 500, 1).unwrap();
            assert_eq!((e.lower, e.upper), (n, n), "R = {r}, t = {t}");
            assert!(e.is_exact());
            assert!(e.centers.iter().all(|c| c[0].abs() <= r));
        }
    }

    #[test]
    fn ball_in_itself_is_exact() {
        let d = Body::unit_ball(2);
        let e = covering_bounds(&d, &d, 1.0, 2000, 1).unwrap();
        assert_eq!((e.lower, e.upper), (1, 1));
        assert!(e.is_exact());
    }

    #[test]
    fn disk_of_radius_two_needs_four() {
        let e = covering_bounds(
            &Body::ball(2, 2.0).unwrap(),
            &Body::unit_ball(2),
            1.0,
            20_000,
            3,
        )
        .unwrap();
        assert!(e.lower >= 4, "lower = {}", e.lower);
        assert!(e.lower <= e.upper);
    }

    #[test]
    fn centers_cover_the_stream() {
        let k = Body::ellipsoid(&[3.0, 1.0]).unwrap();
        let d = Body::unit_ball(2);
        let tol = OracleTolerance::default();
        let stream = CandidateStream::build(&k, 4000, 2, &tol).unwrap();
        let e = bounds_from_stream(&k, &d, 0.7, &stream, &tol).unwrap();
        for x in stream.iter() {
            assert!(e.centers.iter().any(|c| {
                let d2: Vec<f64> = x.iter().zip(c.iter()).map(|(a, b)| a - b).collect();
                norm(&d2) <= 0.7
            }));
        }
        for c in &e.centers {
            assert!(k.contains(c, &tol).unwrap());
        }
    }
}
