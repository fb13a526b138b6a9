//! Gauge of a body known only through its support function.
//!
//! Kelley's cutting-plane method on the polar side: the gauge of `conv(S)` for
//! a finite symmetric `S ⊆ W` is an upper bound for `‖z‖_W`, and the LP dual
//! `y` of that gauge problem gives the lower bound `⟨z,y⟩ / h_W(y)`. The
//! support point of `W` at `y` is added to `S` and the bracket shrinks.

use alloc::vec;
use alloc::vec::Vec;

use crate::lp::StandardLp;
use crate::vector::{dot, norm};

pub(crate) const MAX_CUTS: usize = 200;

pub(crate) struct Cut {
    pub lo: f64,
    pub hi: f64,
    /// `y / h_W(y)` for the best dual direction: lies in `W°` and
    /// `⟨z, dual⟩ = lo`.
    pub dual: Vec<f64>,
}

/// Oracle for `W`: an upper bound on `h_W(y)` and a point of `W` whose inner
/// product with `y` is close to it.
pub(crate) trait SupportOracle {
    fn probe(&self, y: &[f64]) -> (f64, Vec<f64>);
}

impl<F: Fn(&[f64]) -> (f64, Vec<f64>)> SupportOracle for F {
    fn probe(&self, y: &[f64]) -> (f64, Vec<f64>) {
        self(y)
    }
}

/// Brackets `‖z‖_W`. `inradius` must satisfy `inradius·D ⊆ W`. Stops when the
/// bracket is within `rel_tol`, or as soon as it decides `‖z‖_W` against
/// `threshold`, or after [`MAX_CUTS`] cuts.
pub(crate) fn gauge_via_support(
    z: &[f64],
    inradius: f64,
    oracle: &impl SupportOracle,
    rel_tol: f64,
    threshold: Option<f64>,
) -> Cut {
    let n = z.len();
    let zn = norm(z);
    if zn == 0.0 {
        return Cut {
            lo: 0.0,
            hi: 0.0,
            dual: vec![0.0; n],
        };
    }
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(2 * n + 8);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = inradius;
        points.push(e);
    }

    let (h, p) = oracle.probe(z);
    let mut lo = if h > 0.0 { zn * zn / h } else { 0.0 };
    let mut dual: Vec<f64> = z.iter().map(|c| c / h).collect();
    points.push(p);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        points.push(oracle.probe(&e).1);
    }
    let mut hi = zn / inradius;

    for _ in 0..MAX_CUTS {
        let Some((value, y)) = hull_gauge(&points, z) else {
            break;
        };
        hi = hi.min(value);
        if decided(lo, hi, rel_tol, threshold) {
            break;
        }
        let (h, p) = oracle.probe(&y);
        if h > 0.0 {
            let cand = dot(z, &y) / h;
            if cand > lo {
                lo = cand;
                dual = y.iter().map(|c| c / h).collect();
            }
        }
        if decided(lo, hi, rel_tol, threshold) {
            break;
        }
        if points.iter().any(|q| q == &p) {
            break;
        }
        points.push(p);
    }
    Cut {
        lo: lo.min(hi),
        hi,
        dual,
    }
}

fn decided(lo: f64, hi: f64, rel_tol: f64, threshold: Option<f64>) -> bool {
    if hi - lo <= rel_tol * hi {
        return true;
    }
    matches!(threshold, Some(t) if lo > t || hi <= t)
}

/// Gauge of `conv(±points)` at `z` and the optimal dual direction.
fn hull_gauge(points: &[Vec<f64>], z: &[f64]) -> Option<(f64, Vec<f64>)> {
    let n = z.len();
    let m = 2 * points.len();
    let mut a = vec![0.0; n * m];
    for (j, p) in points.iter().enumerate() {
        for r in 0..n {
            a[r * m + 2 * j] = p[r];
            a[r * m + 2 * j + 1] = -p[r];
        }
    }
    let lp = StandardLp::new(a, z.to_vec(), vec![1.0; m]).ok()?;
    let sol = lp.solve().ok()?;
    Some((sol.objective, sol.duals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    fn disk(y: &[f64]) -> (f64, Vec<f64>) {
        let r = norm(y);
        (r, y.iter().map(|c| c / r).collect())
    }

    #[test]
    fn converges_on_the_disk() {
        let z = [0.3, -0.4];
        let cut = gauge_via_support(&z, 1.0, &disk, 1e-10, None);
        assert!(cut.lo <= 0.5 + 1e-12 && cut.hi >= 0.5 - 1e-12);
        assert!(cut.hi - cut.lo < 1e-9);
        assert!((dot(&z, &cut.dual) - cut.lo).abs() < 1e-12);
    }

    #[test]
    fn threshold_stops_early() {
        let z = [3.0, 4.0, 0.0];
        let cut = gauge_via_support(&z, 1.0, &disk, 1e-14, Some(1.0));
        assert!(cut.lo > 1.0);
    }

    #[test]
    fn square_is_exact_after_few_cuts() {
        let sq = |y: &[f64]| {
            let p: Vec<f64> = y.iter().map(|c| c.signum()).collect();
            (y.iter().map(|c| c.abs()).sum::<f64>(), p)
        };
        let cut = gauge_via_support(&[2.0, 1.0], 1.0, &sq, 1e-12, None);
        assert!((cut.hi - 2.0).abs() < 1e-12 && (cut.lo - 2.0).abs() < 1e-12);
    }
}
