use alloc::format;
use alloc::vec::Vec;

use crate::covering::{SeparatedSet, greedy_separated};
use crate::rng::derive_seed;
use crate::vector::axpy;
use crate::{Body, Error, OracleTolerance, Vector};

/// Two separated sets and the radii `A > a > 3B > 3b` they are taken at.
#[derive(Debug, Clone)]
pub struct CombinerInput {
    pub xset: SeparatedSet,
    pub yset: SeparatedSet,
    pub a: f64,
    pub b: f64,
    pub big_a: f64,
    pub big_b: f64,
}

impl CombinerInput {
    pub fn new(
        xset: SeparatedSet,
        yset: SeparatedSet,
        a: f64,
        b: f64,
        big_a: f64,
        big_b: f64,
    ) -> Result<Self, Error> {
        if !(b > 0.0 && big_a.is_finite() && big_a > a && a > 3.0 * big_b && big_b > b) {
            return Err(Error::HypothesisViolated(format!(
                "need A > a > 3B > 3b, got A = {big_a}, a = {a}, B = {big_b}, b = {b}"
            )));
        }
        if xset.separation() < a {
            return Err(Error::HypothesisViolated(format!(
                "x-set separation {} < a = {a}",
                xset.separation()
            )));
        }
        if yset.separation() < b {
            return Err(Error::HypothesisViolated(format!(
                "y-set separation {} < b = {b}",
                yset.separation()
            )));
        }
        if xset.is_empty() || yset.is_empty() {
            return Err(Error::EmptyInput("combiner sets"));
        }
        if xset.ambient().dim() != yset.ambient().dim() {
            return Err(Error::DimensionMismatch {
                expected: xset.ambient().dim(),
                found: yset.ambient().dim(),
            });
        }
        Ok(Self {
            xset,
            yset,
            a,
            b,
            big_a,
            big_b,
        })
    }

    /// `α = a/(2a − b)`.
    pub fn alpha(&self) -> f64 {
        self.a / (2.0 * self.a - self.b)
    }
}

/// `z_ij = x_i/2 + y_j/2`: `N₁N₂` points of `K`, `b/2`-separated in the
/// common gauge `T` of both sets.
///
/// The x-set container is taken as `K`; x-points must lie in `A·T` and
/// y-points in `K ∩ B·T`.
pub fn primal_combine(input: &CombinerInput) -> Result<SeparatedSet, Error> {
    primal_combine_weighted(input, 0.5)
}

/// `z_ij = ε·x_i + (1 − ε)·y_j`, certified `(1 − ε)b`-separated. Needs
/// `a > 3((1 − ε)/ε)·B` on top of the usual hypothesis.
pub fn primal_combine_weighted(input: &CombinerInput, eps: f64) -> Result<SeparatedSet, Error> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must lie in (0, 1)",
        });
    }
    if !(input.a > 3.0 * (1.0 - eps) / eps * input.big_b) {
        return Err(Error::HypothesisViolated(format!(
            "weight {eps} needs a > 3(1-eps)/eps * B = {}",
            3.0 * (1.0 - eps) / eps * input.big_b
        )));
    }
    let tol = OracleTolerance::default();
    let t = input.xset.ambient();
    if t != input.yset.ambient() {
        return Err(Error::HypothesisViolated(
            "both sets must be separated in the same gauge".into(),
        ));
    }
    let k = input.xset.container();
    let k_a = t.scaled(input.big_a)?;
    let k_b = t.scaled(input.big_b)?;
    for (i, x) in input.xset.points().iter().enumerate() {
        if !k_a.contains_in(x, &tol) {
            return Err(Error::HypothesisViolated(format!(
                "x-point {i} lies outside A*T"
            )));
        }
    }
    for (j, y) in input.yset.points().iter().enumerate() {
        if !k_b.contains_in(y, &tol) || !k.contains_in(y, &tol) {
            return Err(Error::HypothesisViolated(format!(
                "y-point {j} lies outside K ∩ B*T"
            )));
        }
    }
    let points = mix(input.xset.points(), input.yset.points(), eps);
    SeparatedSet::new(points, (1.0 - eps) * input.b, t.clone(), k.clone(), &tol)
}

/// `αK° + ((1 − α)/B)·D`, a subset of `(K ∩ B·D)°`.
pub fn mixed_gauge(k: &Body, alpha: f64, big_b: f64) -> Result<Body, Error> {
    let d = Body::unit_ball(k.dim());
    Body::minkowski(alloc::vec![
        Body::polar(k.clone()).scaled(alpha)?,
        d.scaled((1.0 - alpha) / big_b)?
    ])
}

/// `(1/a)(1 − b/2a)⁻¹ < (1 − α)/B`: the radius condition behind
/// [`dual_combine`].
pub fn dual_precheck(a: f64, b: f64, big_b: f64) -> bool {
    let alpha = a / (2.0 * a - b);
    (1.0 / a) / (1.0 - b / (2.0 * a)) < (1.0 - alpha) / big_b
}

/// Greedy inputs for [`dual_combine`]: an `aK°`-separated and a
/// `b(αK° + ((1 − α)/B)D)`-separated set in `D`, with `K` cut to `K ∩ A·D`.
pub fn dual_inputs(
    k: &Body,
    a: f64,
    b: f64,
    big_a: f64,
    big_b: f64,
    budget: usize,
    seed: u64,
) -> Result<CombinerInput, Error> {
    let k_a = Body::intersect_ball(k, big_a)?;
    let d = Body::unit_ball(k.dim());
    let alpha = a / (2.0 * a - b);
    let xset = greedy_separated(
        &d,
        &Body::polar(k_a.clone()),
        a,
        budget,
        derive_seed(seed, 1),
    )?;
    let yset = greedy_separated(
        &d,
        &mixed_gauge(&k_a, alpha, big_b)?,
        b,
        budget,
        derive_seed(seed, 2),
    )?;
    CombinerInput::new(xset, yset, a, b, big_a, big_b)
}

/// `z_ij = (b/2a)·x_i + (1 − b/2a)·y_j`: `N₁N₂` points of `D`, certified
/// `(b/2)·(K ∩ A·D)°`-separated.
///
/// Both input sets are re-verified in the gauges the construction needs,
/// whatever gauges they declare.
pub fn dual_combine(input: &CombinerInput, k: &Body) -> Result<SeparatedSet, Error> {
    let (a, b) = (input.a, input.b);
    if !dual_precheck(a, b, input.big_b) {
        return Err(Error::HypothesisViolated(format!(
            "(1/a)(1 - b/2a)^-1 < (1 - alpha)/B fails for a = {a}, b = {b}, B = {}",
            input.big_b
        )));
    }
    let tol = OracleTolerance::default();
    let k_a = Body::intersect_ball(k, input.big_a)?;
    let polar = Body::polar(k_a.clone());
    let d = Body::unit_ball(k.dim());
    let w = mixed_gauge(&k_a, input.alpha(), input.big_b)?;
    SeparatedSet::new(
        input.xset.points().to_vec(),
        a,
        polar.clone(),
        d.clone(),
        &tol,
    )
    .map_err(|e| Error::HypothesisViolated(format!("x-set: {e}")))?;
    SeparatedSet::new(input.yset.points().to_vec(), b, w, d.clone(), &tol)
        .map_err(|e| Error::HypothesisViolated(format!("y-set: {e}")))?;
    let points = mix(input.xset.points(), input.yset.points(), b / (2.0 * a));
    SeparatedSet::new(points, b / 2.0, polar, d, &tol)
}

fn mix(xs: &[Vector], ys: &[Vector], lambda: f64) -> Vec<Vector> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            let mut z: Vec<f64> = y.iter().map(|c| (1.0 - lambda) * c).collect();
            axpy(&mut z, lambda, x);
            out.push(Vector::new(z).expect("finite combination"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::separated_from;

    fn line(points: &[f64], sep: f64, container: &Body) -> SeparatedSet {
        let pts = points
            .iter()
            .map(|&p| Vector::new(alloc::vec![p]).unwrap())
            .collect();
        SeparatedSet::new(
            pts,
            sep,
            Body::interval(1.0).unwrap(),
            container.clone(),
            &OracleTolerance::default(),
        )
        .unwrap()
    }

    #[test]
    fn one_dimensional_grid() {
        let k = Body::interval(40.0).unwrap();
        let xs: Vec<f64> = (-3..=3).map(|i| 13.0 * i as f64).collect();
        let ys: Vec<f64> = (-4..=4).map(f64::from).collect();
        // Spacings 13 and 1 are separated strictly only below those values.
        let input = CombinerInput::new(
            line(&xs, 12.9, &k),
            line(&ys, 0.99, &k),
            12.9,
            0.99,
            40.0,
            4.0,
        )
        .unwrap();
        let z = primal_combine(&input).unwrap();
        assert_eq!(z.len(), 63);
        let mut v: Vec<f64> = z.points().iter().map(|p| p[0]).collect();
        v.sort_by(f64::total_cmp);
        assert!(v.windows(2).all(|w| w[1] - w[0] >= 0.5 - 1e-12));
    }

    #[test]
    fn hypothesis_is_enforced() {
        let k = Body::interval(40.0).unwrap();
        let x = line(&[0.0], 13.0, &k);
        let y = line(&[0.0], 1.0, &k);
        assert!(CombinerInput::new(x.clone(), y.clone(), 12.0, 1.0, 40.0, 4.0).is_err());
        assert!(CombinerInput::new(x.clone(), y.clone(), 13.0, 1.0, 13.0, 4.0).is_err());
        assert!(CombinerInput::new(y.clone(), y.clone(), 13.0, 1.0, 40.0, 4.0).is_err());
        let input = CombinerInput::new(x, y, 13.0, 1.0, 40.0, 4.0).unwrap();
        assert_eq!(primal_combine(&input).unwrap().len(), 1);
        assert!((input.alpha() - 0.52).abs() < 1e-15);
    }

    #[test]
    fn weighted_variant() {
        let k = Body::interval(40.0).unwrap();
        let xs = [-30.0, 0.0, 30.0];
        let ys = [-2.0, 0.0, 2.0];
        let input = CombinerInput::new(
            line(&xs, 29.0, &k),
            line(&ys, 1.9, &k),
            29.0,
            1.9,
            40.0,
            3.0,
        )
        .unwrap();
        // a > 3(1 - eps)/eps * B holds for eps = 0.25 (27 < 29).
        let z = primal_combine_weighted(&input, 0.25).unwrap();
        assert_eq!(z.len(), 9);
        assert!((z.separation() - 0.75 * 1.9).abs() < 1e-15);
        assert!(primal_combine_weighted(&input, 0.2).is_err());
    }

    #[test]
    fn precheck_matches_hypothesis() {
        assert!(dual_precheck(13.0, 1.0, 4.0));
        assert!(dual_precheck(3.1, 0.5, 1.0));
    }

    #[test]
    fn dual_on_self_dual_ball() {
        let d = Body::unit_ball(1);
        let input = dual_inputs(&d, 0.7, 0.05, 2.0, 0.2, 400, 3).unwrap();
        let z = dual_combine(&input, &d).unwrap();
        assert_eq!(z.len(), input.xset.len() * input.yset.len());
        assert!(z.len() > 1);
    }

    #[test]
    fn dual_on_square() {
        let sq = Body::vpolytope(&[
            Vector::new(alloc::vec![12.0, 12.0]).unwrap(),
            Vector::new(alloc::vec![12.0, -12.0]).unwrap(),
        ])
        .unwrap();
        let input = dual_inputs(&sq, 13.0, 1.0, 40.0, 4.0, 2000, 5).unwrap();
        assert!(input.xset.len() > 1 && input.yset.len() > 1);
        let z = dual_combine(&input, &sq).unwrap();
        assert_eq!(z.len(), input.xset.len() * input.yset.len());
        let tol = OracleTolerance::default();
        let again = separated_from(
            &Body::unit_ball(2),
            &Body::polar(sq),
            0.5,
            z.points().iter().map(|p| p.as_slice()),
            &[],
            &tol,
        )
        .unwrap();
        assert_eq!(again.len(), z.len());
    }
}
