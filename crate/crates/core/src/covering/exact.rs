use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::bounds::{Certification, CoverEstimate};
use super::separated::{NearGrid, certified_within};
use crate::error::{check_dim, positive};
use crate::{Body, Error, OracleTolerance, Vector};

/// Result of [`exact_cover_small`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactCover {
    pub estimate: CoverEstimate,
    /// Search nodes spent over all rounds.
    pub nodes: usize,
    /// Constraint-generation rounds.
    pub rounds: usize,
    /// Sample points in the final restricted problem.
    pub active_points: usize,
    /// Dual-ascent bound on the fractional cover value of the final
    /// restricted problem.
    pub fractional_bound: f64,
}

/// Smallest number of translates `c + tT`, `c` among `candidates`, covering
/// every candidate.
///
/// The candidates double as the sample of `K`. The problem is solved by
/// constraint generation: an exact branch and bound on a small set of active
/// sample points, growing the active set by points the optimum leaves
/// uncovered. The optimum of any restricted problem is a lower bound, so the
/// first restricted optimum that covers the full sample is optimal.
pub fn exact_cover_small(
    k: &Body,
    t_body: &Body,
    t: f64,
    candidates: &[Vector],
    max_nodes: usize,
) -> Result<ExactCover, Error> {
    positive("t", t)?;
    check_dim(k.dim(), t_body.dim())?;
    if candidates.is_empty() {
        return Err(Error::EmptyInput("exact cover needs candidates"));
    }
    let tol = OracleTolerance::default();
    for c in candidates {
        check_dim(k.dim(), c.dim())?;
        if !k.contains_in(c, &tol) {
            return Err(Error::HypothesisViolated(
                "candidate outside the body".into(),
            ));
        }
    }
    let reach = t * (1.0 + 1e-12);
    let covers = coverage(t_body, reach, candidates, &tol)?;
    let m = candidates.len();
    let mut by_element: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (s, elems) in covers.iter().enumerate() {
        for &e in elems {
            by_element[e as usize].push(s as u32);
        }
    }

    let greedy = greedy_cover(&covers, m);
    let mut best = greedy.clone();
    let mut active = packing_seed(&covers, &by_element, m);
    seed_hardest(&mut active, &by_element, &covers);
    let mut nodes = 0usize;
    let mut rounds = 0usize;
    let mut proven_lower = 1usize;
    let mut fractional_bound;
    let mut optimal = false;

    loop {
        rounds += 1;
        let problem = Restricted::new(&active, &by_element, &covers);
        fractional_bound = problem.dual_bound();
        let frac_floor = (fractional_bound - 1e-7).ceil().max(1.0) as usize;
        let floor = proven_lower
            .max(frac_floor)
            .max(problem.packing_bound(&problem.full()));
        let mut budget = max_nodes.saturating_sub(nodes);
        let outcome = problem.solve(floor, best.len(), &mut budget);
        nodes = max_nodes - budget;
        match outcome {
            Search::Found(sets) => {
                proven_lower = proven_lower.max(sets.len());
                let chosen: Vec<usize> = sets.iter().map(|&s| problem.sets[s].origin).collect();
                let uncovered = uncovered(&covers, &chosen, m);
                if uncovered.is_empty() {
                    best = chosen;
                    optimal = true;
                    break;
                }
                extend_active(&mut active, &uncovered, &by_element, &covers);
            }
            Search::Exhausted(proven) => {
                proven_lower = proven_lower.max(proven);
                break;
            }
            Search::NoneBelow => {
                // The greedy cover is optimal for the restricted problem, hence overall.
                proven_lower = best.len();
                optimal = true;
                break;
            }
        }
    }

    let lower = proven_lower.min(best.len());
    let centers = best.iter().map(|&i| candidates[i].clone()).collect();
    let estimate = CoverEstimate {
        t,
        lower: if optimal { best.len() } else { lower },
        upper: best.len(),
        centers,
        certification: Certification::Discrete { optimal },
        max_gauge: 0.0,
    };
    Ok(ExactCover {
        estimate,
        nodes,
        rounds,
        active_points: active.len(),
        fractional_bound,
    })
}

/// `covers[s]` = sample indices within `T`-distance `reach` of candidate `s`.
fn coverage(
    t_body: &Body,
    reach: f64,
    pts: &[Vector],
    tol: &OracleTolerance,
) -> Result<Vec<Vec<u32>>, Error> {
    let mut grid = NearGrid::new(pts[0].dim(), reach, t_body)?;
    // Force hashed lookups by inserting everything first.
    for p in pts {
        grid.insert(p);
    }
    let mut out = Vec::with_capacity(pts.len());
    for p in pts {
        let mut hits = Vec::new();
        grid.any_near(p, |i, d| {
            if certified_within(t_body, d, reach, tol) {
                hits.push(i as u32);
            }
            false
        });
        hits.sort_unstable();
        out.push(hits);
    }
    Ok(out)
}

fn greedy_cover(covers: &[Vec<u32>], m: usize) -> Vec<usize> {
    let mut covered = vec![false; m];
    let mut left = m;
    let mut chosen = Vec::new();
    while left > 0 {
        let (s, gain) = covers
            .iter()
            .enumerate()
            .map(|(s, c)| (s, c.iter().filter(|&&e| !covered[e as usize]).count()))
            .fold((0, 0), |b, c| if c.1 > b.1 { c } else { b });
        if gain == 0 {
            break;
        }
        for &e in &covers[s] {
            if !covered[e as usize] {
                covered[e as usize] = true;
                left -= 1;
            }
        }
        chosen.push(s);
    }
    chosen
}

fn uncovered(covers: &[Vec<u32>], chosen: &[usize], m: usize) -> Vec<usize> {
    let mut covered = vec![false; m];
    for &s in chosen {
        for &e in &covers[s] {
            covered[e as usize] = true;
        }
    }
    (0..m).filter(|&e| !covered[e]).collect()
}

/// Greedy set of sample points no two of which share a covering translate.
fn packing_seed(covers: &[Vec<u32>], by_element: &[Vec<u32>], m: usize) -> Vec<usize> {
    let mut blocked = vec![false; m];
    let mut out = Vec::new();
    for e in hardest_first(by_element, 0..m) {
        if blocked[e] {
            continue;
        }
        out.push(e);
        for &s in &by_element[e] {
            for &f in &covers[s as usize] {
                blocked[f as usize] = true;
            }
        }
    }
    out
}

/// Adds the elements covered by the fewest translates (the boundary layer
/// of `K`, typically), thinned so that no two share many translates.
fn seed_hardest(active: &mut Vec<usize>, by_element: &[Vec<u32>], covers: &[Vec<u32>]) {
    let order = hardest_first(by_element, 0..by_element.len());
    let cutoff = by_element[order[0]].len() * 5 / 4 + 1;
    let mut taken: hashbrown::HashSet<usize> = active.iter().copied().collect();
    let mut near = hashbrown::HashSet::new();
    for e in order
        .into_iter()
        .take_while(|&e| by_element[e].len() <= cutoff)
    {
        if taken.contains(&e) || near.contains(&e) {
            continue;
        }
        taken.insert(e);
        active.push(e);
        near.extend(common_neighbours(e, by_element, covers));
        if active.len() >= SEED_LIMIT {
            break;
        }
    }
}

const SEED_LIMIT: usize = 96;

/// Elements covered by every translate covering `e`.
fn common_neighbours(e: usize, by_element: &[Vec<u32>], covers: &[Vec<u32>]) -> Vec<usize> {
    let sets = &by_element[e];
    let Some(first) = sets.first() else {
        return Vec::new();
    };
    covers[*first as usize]
        .iter()
        .map(|&f| f as usize)
        .filter(|&f| {
            f != e
                && sets
                    .iter()
                    .all(|&s| covers[s as usize].binary_search(&(f as u32)).is_ok())
        })
        .collect()
}

/// Adds uncovered points spread out over the uncovered region, at most 12
/// per round.
fn extend_active(
    active: &mut Vec<usize>,
    uncovered: &[usize],
    by_element: &[Vec<u32>],
    covers: &[Vec<u32>],
) {
    let mut blocked = hashbrown::HashSet::new();
    let mut added = 0;
    for e in hardest_first(by_element, uncovered.iter().copied()) {
        if blocked.contains(&e) {
            continue;
        }
        active.push(e);
        added += 1;
        if added == 12 {
            break;
        }
        for &s in &by_element[e] {
            for &f in &covers[s as usize] {
                blocked.insert(f as usize);
            }
        }
    }
}

/// Elements ordered by how few translates cover them, ties by index.
fn hardest_first(by_element: &[Vec<u32>], elems: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = elems.collect();
    v.sort_by_key(|&e| (by_element[e].len(), e));
    v
}

struct Set {
    bits: Vec<u64>,
    size: u32,
    origin: usize,
}

/// Set cover restricted to the active sample points, with duplicate and
/// dominated sets removed.
struct Restricted {
    n: usize,
    words: usize,
    sets: Vec<Set>,
    /// Sets containing each element, largest first.
    by_element: Vec<Vec<usize>>,
    /// Elements sharing a set with each element (including itself).
    conflicts: Vec<Vec<u64>>,
}

enum Search {
    Found(Vec<usize>),
    /// Node budget ran out; the value is the best proven lower bound.
    Exhausted(usize),
    /// No cover smaller than the supplied upper bound exists.
    NoneBelow,
}

impl Restricted {
    fn new(active: &[usize], by_element: &[Vec<u32>], covers: &[Vec<u32>]) -> Self {
        let n = active.len();
        let words = n.div_ceil(64);
        let pos: hashbrown::HashMap<usize, usize> =
            active.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut candidates: hashbrown::HashMap<Vec<u64>, usize> = hashbrown::HashMap::new();
        for &e in active {
            for &s in &by_element[e] {
                let s = s as usize;
                let mut bits = vec![0u64; words];
                for &f in &covers[s] {
                    if let Some(&i) = pos.get(&(f as usize)) {
                        bits[i / 64] |= 1 << (i % 64);
                    }
                }
                candidates.entry(bits).or_insert(s);
            }
        }
        let mut all: Vec<Set> = candidates
            .into_iter()
            .map(|(bits, origin)| Set {
                size: bits.iter().map(|w| w.count_ones()).sum(),
                bits,
                origin,
            })
            .collect();
        all.sort_by(|a, b| b.size.cmp(&a.size).then(a.origin.cmp(&b.origin)));
        let mut sets: Vec<Set> = Vec::new();
        for s in all {
            let dominated = sets
                .iter()
                .any(|big| big.bits.iter().zip(&s.bits).all(|(b, x)| x & !b == 0));
            if !dominated {
                sets.push(s);
            }
        }
        let mut by_el = vec![Vec::new(); n];
        let mut conflicts = vec![vec![0u64; words]; n];
        for (si, s) in sets.iter().enumerate() {
            for i in 0..n {
                if s.bits[i / 64] >> (i % 64) & 1 == 1 {
                    by_el[i].push(si);
                    for (c, w) in conflicts[i].iter_mut().zip(&s.bits) {
                        *c |= w;
                    }
                }
            }
        }
        Self {
            n,
            words,
            sets,
            by_element: by_el,
            conflicts,
        }
    }

    fn full(&self) -> Vec<u64> {
        let mut u = vec![u64::MAX; self.words];
        if self.n % 64 != 0 {
            u[self.words - 1] = (1u64 << (self.n % 64)) - 1;
        }
        u
    }

    /// Greedy independent set in the conflict graph of the uncovered
    /// elements: each needs its own set.
    fn packing_bound(&self, uncovered: &[u64]) -> usize {
        let mut free = uncovered.to_vec();
        let mut count = 0;
        let mut order: Vec<usize> = (0..self.n)
            .filter(|&i| uncovered[i / 64] >> (i % 64) & 1 == 1)
            .collect();
        order.sort_by_key(|&i| self.by_element[i].len());
        for i in order {
            if free[i / 64] >> (i % 64) & 1 == 1 {
                count += 1;
                for (f, c) in free.iter_mut().zip(&self.conflicts[i]) {
                    *f &= !c;
                }
            }
        }
        count
    }

    /// Lower bound on the fractional cover value by dual ascent: element
    /// weights, hardest elements first, with every set's total at most 1.
    fn dual_bound(&self) -> f64 {
        let mut slack = vec![1.0f64; self.sets.len()];
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| self.by_element[i].len());
        let mut total = 0.0;
        for i in order {
            let y = self.by_element[i]
                .iter()
                .map(|&s| slack[s])
                .fold(f64::INFINITY, f64::min);
            if y.is_finite() && y > 0.0 {
                total += y;
                for &s in &self.by_element[i] {
                    slack[s] -= y;
                }
            }
        }
        total
    }

    /// Iterative deepening from `floor` up to `upper − 1`.
    fn solve(&self, floor: usize, upper: usize, budget: &mut usize) -> Search {
        for k in floor..upper {
            let mut chosen = Vec::new();
            let mut forbidden = vec![0u64; self.sets.len().div_ceil(64)];
            match self.dfs(&self.full(), &mut forbidden, k, &mut chosen, budget) {
                Some(true) => return Search::Found(chosen),
                Some(false) => {}
                None => return Search::Exhausted(k),
            }
        }
        Search::NoneBelow
    }

    /// `Some(true)` if `uncovered` can be covered by `k` more sets outside
    /// `forbidden`, `Some(false)` if not, `None` when the budget runs out.
    ///
    /// Branches on the uncovered element with the fewest allowed sets. A
    /// branch set whose uncovered part lies inside another's is skipped, and
    /// each tried set is forbidden in the later siblings.
    fn dfs(
        &self,
        uncovered: &[u64],
        forbidden: &mut [u64],
        k: usize,
        chosen: &mut Vec<usize>,
        budget: &mut usize,
    ) -> Option<bool> {
        if uncovered.iter().all(|&w| w == 0) {
            return Some(true);
        }
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if k == 0 || self.packing_bound(uncovered) > k {
            return Some(false);
        }
        let allowed = |s: usize| forbidden[s / 64] >> (s % 64) & 1 == 0;
        let mut pivot = None;
        let mut fewest = usize::MAX;
        for i in (0..self.n).filter(|&i| uncovered[i / 64] >> (i % 64) & 1 == 1) {
            let c = self.by_element[i].iter().filter(|&&s| allowed(s)).count();
            if c < fewest {
                fewest = c;
                pivot = Some(i);
                if c == 0 {
                    return Some(false);
                }
            }
        }
        let pivot = pivot?;
        let gain = |s: usize| {
            self.sets[s]
                .bits
                .iter()
                .zip(uncovered)
                .map(|(b, u)| (b & u).count_ones())
                .sum::<u32>()
        };
        let left: u32 = uncovered.iter().map(|w| w.count_ones()).sum();
        let best_gain = (0..self.sets.len())
            .filter(|&s| allowed(s))
            .map(gain)
            .max()
            .unwrap_or(0);
        if best_gain == 0 || (left as usize).div_ceil(best_gain as usize) > k {
            return Some(false);
        }

        let mut branches: Vec<(usize, Vec<u64>)> = self.by_element[pivot]
            .iter()
            .filter(|&&s| allowed(s))
            .map(|&s| {
                (
                    s,
                    self.sets[s]
                        .bits
                        .iter()
                        .zip(uncovered)
                        .map(|(b, u)| b & u)
                        .collect(),
                )
            })
            .collect();
        let inside = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & !y == 0);
        let keep: Vec<bool> = (0..branches.len())
            .map(|j| {
                !(0..branches.len()).any(|i| {
                    i != j
                        && inside(&branches[j].1, &branches[i].1)
                        && (i < j || !inside(&branches[i].1, &branches[j].1))
                })
            })
            .collect();
        let mut it = keep.iter();
        branches.retain(|_| *it.next().expect("same length"));
        branches.sort_by_key(|(s, m)| {
            (
                core::cmp::Reverse(m.iter().map(|w| w.count_ones()).sum::<u32>()),
                *s,
            )
        });

        let mut next = vec![0u64; self.words];
        let mut result = Some(false);
        let mut tried = Vec::with_capacity(branches.len());
        for (s, _) in &branches {
            let s = *s;
            for ((n, u), b) in next.iter_mut().zip(uncovered).zip(&self.sets[s].bits) {
                *n = u & !b;
            }
            chosen.push(s);
            match self.dfs(&next, forbidden, k - 1, chosen, budget) {
                Some(true) => {
                    result = Some(true);
                    break;
                }
                Some(false) => {}
                None => {
                    result = None;
                    break;
                }
            }
            chosen.pop();
            forbidden[s / 64] |= 1 << (s % 64);
            tried.push(s);
        }
        for s in tried {
            forbidden[s / 64] &= !(1 << (s % 64));
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::lattice_points;

    #[test]
    fn interval_needs_three() {
        let k = Body::interval(3.0).unwrap();
        let tol = OracleTolerance::default();
        let cands = lattice_points(&k, 0.1, &tol).unwrap();
        let r = exact_cover_small(&k, &Body::interval(1.0).unwrap(), 1.0, &cands, 100_000).unwrap();
        assert_eq!(r.estimate.upper, 3);
        assert_eq!(r.estimate.lower, 3);
        assert_eq!(
            r.estimate.certification,
            Certification::Discrete { optimal: true }
        );
    }

    #[test]
    fn body_equal_to_translate_needs_one() {
        let d = Body::unit_ball(2);
        let cands = lattice_points(&d, 0.25, &OracleTolerance::default()).unwrap();
        let r = exact_cover_small(&d, &d, 1.0, &cands, 1000).unwrap();
        assert_eq!((r.estimate.lower, r.estimate.upper), (1, 1));
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let k = Body::ball(2, 1.9).unwrap();
        let cands = lattice_points(&k, 0.2, &OracleTolerance::default()).unwrap();
        let r = exact_cover_small(&k, &Body::unit_ball(2), 1.0, &cands, 1).unwrap();
        assert!(r.estimate.lower <= r.estimate.upper);
        if let Certification::Discrete { optimal } = r.estimate.certification {
            assert!(!optimal || r.estimate.lower == r.estimate.upper);
        }
    }
}
