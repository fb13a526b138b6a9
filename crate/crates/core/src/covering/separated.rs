use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::Float;

use super::stream::{CandidateStream, MAX_DIM};
use crate::error::{check_dim, positive};
use crate::vector::sub_into;
use crate::{Body, Error, OracleTolerance, SEPARATION_GUARD, Vector};

/// Points of `container` whose pairwise `ambient`-gauge distances exceed
/// `separation`.
#[derive(Debug, Clone)]
pub struct SeparatedSet {
    points: Vec<Vector>,
    separation: f64,
    ambient: Body,
    container: Body,
}

impl SeparatedSet {
    /// Wraps `points` after checking every pair and every membership.
    pub fn new(
        points: Vec<Vector>,
        separation: f64,
        ambient: Body,
        container: Body,
        tol: &OracleTolerance,
    ) -> Result<Self, Error> {
        let set = Self {
            points,
            separation,
            ambient,
            container,
        };
        set.verify(tol)?;
        Ok(set)
    }

    pub(crate) fn new_unchecked(
        points: Vec<Vector>,
        separation: f64,
        ambient: Body,
        container: Body,
    ) -> Self {
        Self {
            points,
            separation,
            ambient,
            container,
        }
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vector> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn ambient(&self) -> &Body {
        &self.ambient
    }

    pub fn container(&self) -> &Body {
        &self.container
    }

    /// Exhaustive re-check: every point in the container, every pair
    /// certified farther apart than the separation. Pairs in non-adjacent
    /// grid cells are farther apart than the separation by construction.
    pub fn verify(&self, tol: &OracleTolerance) -> Result<(), Error> {
        let dim = self.ambient.dim();
        check_dim(dim, self.container.dim())?;
        let mut grid = NearGrid::new(dim, self.separation, &self.ambient)?;
        for (i, p) in self.points.iter().enumerate() {
            check_dim(dim, p.dim())?;
            if !self.container.contains_in(p, tol) {
                return Err(Error::CertificationFailure(format!(
                    "point {i} lies outside the container"
                )));
            }
            let mut bad = None;
            if !grid.all_near(p, |j, d| {
                let ok = certified_apart(&self.ambient, d, self.separation, tol);
                if !ok {
                    bad = Some(j);
                }
                ok
            }) {
                return Err(Error::CertificationFailure(format!(
                    "points {} and {i} are not {}-separated",
                    bad.unwrap_or(0),
                    self.separation
                )));
            }
            grid.insert(p);
        }
        Ok(())
    }
}

/// `‖d‖_T > sep` certified, with the absolute guard.
pub(crate) fn certified_apart(t: &Body, d: &[f64], sep: f64, tol: &OracleTolerance) -> bool {
    let thr = sep + SEPARATION_GUARD;
    t.gauge_in(d, tol.bisection_tol, Some(thr)).0 > thr
}

/// `‖d‖_T ≤ r` certified.
pub(crate) fn certified_within(t: &Body, d: &[f64], r: f64, tol: &OracleTolerance) -> bool {
    t.gauge_in(d, tol.bisection_tol, Some(r)).1 <= r
}

/// Greedy maximal `eps`-separated subset of a candidate stream of `K`,
/// measured in the gauge of `T`. Candidates are tried in stream order, so
/// ties go to the smallest index.
pub fn greedy_separated(
    k: &Body,
    t: &Body,
    eps: f64,
    budget: usize,
    seed: u64,
) -> Result<SeparatedSet, Error> {
    greedy_separated_with(k, t, eps, budget, seed, &[])
}

/// As [`greedy_separated`], starting from `mandatory` points that must
/// already be `eps`-separated and lie in `K`.
pub fn greedy_separated_with(
    k: &Body,
    t: &Body,
    eps: f64,
    budget: usize,
    seed: u64,
    mandatory: &[Vector],
) -> Result<SeparatedSet, Error> {
    positive("eps", eps)?;
    check_dim(k.dim(), t.dim())?;
    let tol = OracleTolerance::default();
    let stream = CandidateStream::build(k, budget, seed, &tol)?;
    separated_from(k, t, eps, stream.iter(), mandatory, &tol)
}

/// Greedy `eps`-separated subset of arbitrary candidates, seeded with
/// `mandatory`.
pub fn separated_from<'a>(
    k: &Body,
    t: &Body,
    eps: f64,
    candidates: impl IntoIterator<Item = &'a [f64]>,
    mandatory: &[Vector],
    tol: &OracleTolerance,
) -> Result<SeparatedSet, Error> {
    positive("eps", eps)?;
    check_dim(k.dim(), t.dim())?;
    let mut grid = NearGrid::new(k.dim(), eps, t)?;
    let mut chosen: Vec<Vector> = Vec::new();
    for (i, m) in mandatory.iter().enumerate() {
        check_dim(k.dim(), m.dim())?;
        if !k.contains_in(m, tol) {
            return Err(Error::HypothesisViolated(format!(
                "mandatory point {i} lies outside the body"
            )));
        }
        if !grid.all_near(m, |_, d| certified_apart(t, d, eps, tol)) {
            return Err(Error::HypothesisViolated(format!(
                "mandatory point {i} is not {eps}-separated"
            )));
        }
        grid.insert(m);
        chosen.push(m.clone());
    }
    for x in candidates {
        if grid.all_near(x, |_, d| certified_apart(t, d, eps, tol)) {
            grid.insert(x);
            chosen.push(Vector::new(x.to_vec())?);
        }
    }
    Ok(SeparatedSet::new_unchecked(
        chosen,
        eps,
        t.clone(),
        k.clone(),
    ))
}

/// Points bucketed by cells of side `r·R(T)`, so that every point within
/// `T`-gauge distance `r` of a query lies in one of the `3ⁿ` adjacent cells.
/// Small point sets are scanned linearly instead.
pub(crate) struct NearGrid {
    dim: usize,
    cell: f64,
    points: Vec<f64>,
    cells: HashMap<[i64; MAX_DIM], Vec<u32>>,
    diff: Vec<f64>,
}

impl NearGrid {
    pub(crate) fn new(dim: usize, reach: f64, t: &Body) -> Result<Self, Error> {
        if dim > MAX_DIM {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: "covering supports at most 8 dimensions",
            });
        }
        Ok(Self {
            dim,
            cell: (reach + SEPARATION_GUARD) * t.circumradius_bound() * (1.0 + 1e-9),
            points: Vec::new(),
            cells: HashMap::new(),
            diff: alloc::vec![0.0; dim],
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub(crate) fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn key(&self, x: &[f64]) -> [i64; MAX_DIM] {
        let mut k = [0i64; MAX_DIM];
        for (ki, xi) in k.iter_mut().zip(x) {
            *ki = (xi / self.cell).floor() as i64;
        }
        k
    }

    pub(crate) fn insert(&mut self, x: &[f64]) -> usize {
        let id = self.len();
        self.points.extend_from_slice(x);
        self.cells.entry(self.key(x)).or_default().push(id as u32);
        id
    }

    /// `true` if `pred(index, x − p)` holds for every stored `p` that could be
    /// within reach of `x`. Stops at the first failure.
    pub(crate) fn all_near(
        &mut self,
        x: &[f64],
        mut pred: impl FnMut(usize, &[f64]) -> bool,
    ) -> bool {
        !self.any_near(x, |i, d| !pred(i, d))
    }

    /// `true` if `pred(index, x − p)` holds for some stored `p` within reach.
    pub(crate) fn any_near(
        &mut self,
        x: &[f64],
        mut pred: impl FnMut(usize, &[f64]) -> bool,
    ) -> bool {
        let n = self.len();
        let mut diff = core::mem::take(&mut self.diff);
        let hit = if n <= 3usize.pow(self.dim as u32) {
            (0..n).any(|i| {
                sub_into(x, self.point(i), &mut diff);
                pred(i, &diff)
            })
        } else {
            let base = self.key(x);
            let mut offset = [-1i64; MAX_DIM];
            let mut hit = false;
            'cells: loop {
                let mut key = base;
                for a in 0..self.dim {
                    key[a] += offset[a];
                }
                if let Some(ids) = self.cells.get(&key) {
                    for &i in ids {
                        sub_into(x, self.point(i as usize), &mut diff);
                        if pred(i as usize, &diff) {
                            hit = true;
                            break 'cells;
                        }
                    }
                }
                let mut a = 0;
                loop {
                    if a == self.dim {
                        break 'cells;
                    }
                    offset[a] += 1;
                    if offset[a] <= 1 {
                        break;
                    }
                    offset[a] = -1;
                    a += 1;
                }
            }
            hit
        };
        self.diff = diff;
        hit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_with_large_eps_gives_singleton() {
        let d = Body::unit_ball(2);
        let s = greedy_separated(&d, &d, 2.5, 2000, 3).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn interval_packing_matches_closed_form() {
        // Five points of [-5, 5] with gaps above 2 fit, six do not.
        let k = Body::interval(5.0).unwrap();
        let d = Body::interval(1.0).unwrap();
        let s = greedy_separated(&k, &d, 2.0, 4000, 1).unwrap();
        assert_eq!(s.len(), 5);
        s.verify(&OracleTolerance::default()).unwrap();
    }

    #[test]
    fn mandatory_points_are_kept() {
        let k = Body::ellipsoid(&[3.0, 1.0]).unwrap();
        let d = Body::unit_ball(2);
        let m = [Vector::from([-3.0, 0.0]), Vector::from([3.0, 0.0])];
        let s = greedy_separated_with(&k, &d, 1.0, 2000, 5, &m).unwrap();
        assert_eq!(&s.points()[..2], &m);
        s.verify(&OracleTolerance::default()).unwrap();
    }

    #[test]
    fn mandatory_points_must_be_separated() {
        let k = Body::unit_ball(2);
        let m = [Vector::from([0.1, 0.0]), Vector::from([0.0, 0.0])];
        assert!(matches!(
            greedy_separated_with(&k, &k, 1.0, 200, 5, &m),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn hashed_and_linear_scans_agree() {
        let k = Body::ball(2, 6.0).unwrap();
        let d = Body::unit_ball(2);
        let s = greedy_separated(&k, &d, 0.5, 20_000, 9).unwrap();
        assert!(s.len() > 9);
        s.verify(&OracleTolerance::default()).unwrap();
    }

    #[test]
    fn verify_rejects_close_pairs() {
        let d = Body::unit_ball(1);
        let pts = alloc::vec![Vector::from([0.0]), Vector::from([0.5])];
        let err = SeparatedSet::new(pts, 0.5, d.clone(), d, &OracleTolerance::default());
        assert!(matches!(err, Err(Error::CertificationFailure(_))));
    }
}
