use alloc::vec::Vec;

use crate::covering::{Staircase, staircase};
use crate::functionals::PaperConstants;
use crate::rng::derive_seed;
use crate::{Body, Error};

/// The α values of the report when none are given.
pub const DEFAULT_ALPHAS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Directed ratios at one `(t, α)`.
///
/// `forward` bounds `log N(K, tD) / log N(D, αtK°)` from above and
/// `backward` bounds `log N(D, α⁻¹tK°) / log N(K, tD)`, both as
/// `upper_bits / max(1, lower_bits)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RatioEntry {
    pub t: f64,
    pub alpha: f64,
    pub forward: f64,
    pub backward: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BetaEntry {
    pub alpha: f64,
    /// Smallest `β ≥ 1` that makes both directed inequalities hold at every
    /// grid point within bracket slack.
    pub beta: f64,
}

/// Staircases of `(K, D)` and `(D, K°)` with the ratio table between them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DualityReport {
    pub grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    /// `N(K, tD)` on `grid`.
    pub primal: Staircase,
    /// `N(D, sK°)` on `grid` together with every `αt` and `t/α`.
    pub dual: Staircase,
    pub ratios: Vec<RatioEntry>,
    pub beta: Vec<BetaEntry>,
    pub constants: PaperConstants,
    pub budget: usize,
    pub seed: u64,
}

impl DualityReport {
    /// `true` if the primal and dual brackets at `t` share a point.
    pub fn overlaps_at(&self, t: f64) -> Option<bool> {
        Some(self.primal.at(t)?.overlaps(self.dual.at(t)?))
    }

    pub fn beta_for(&self, alpha: f64) -> Option<f64> {
        self.beta.iter().find(|b| b.alpha == alpha).map(|b| b.beta)
    }
}

pub fn duality_report(
    k: &Body,
    grid: &[f64],
    alpha_grid: &[f64],
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<DualityReport, Error> {
    consts.validate()?;
    if alpha_grid.is_empty() {
        return Err(Error::EmptyInput("alpha grid"));
    }
    for &a in alpha_grid {
        crate::error::positive("alpha", a)?;
    }
    let d = Body::unit_ball(k.dim());
    let primal = staircase(k, &d, grid, budget, derive_seed(seed, 1))?;

    let mut dual_grid: Vec<f64> = grid.to_vec();
    for &t in grid {
        for &a in alpha_grid {
            dual_grid.push(t * a);
            dual_grid.push(t / a);
        }
    }
    dual_grid.sort_by(f64::total_cmp);
    dual_grid.dedup();
    let dual = staircase(
        &d,
        &Body::polar(k.clone()),
        &dual_grid,
        budget,
        derive_seed(seed, 2),
    )?;

    let mut ratios = Vec::with_capacity(grid.len() * alpha_grid.len());
    let mut beta = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let mut b: f64 = 1.0;
        for (&t, p) in grid.iter().zip(&primal.entries) {
            let ahead = dual.at(t * alpha).expect("on the dual grid");
            let behind = dual.at(t / alpha).expect("on the dual grid");
            let forward = p.upper_bits / ahead.lower_bits.max(1.0);
            let backward = behind.upper_bits / p.lower_bits.max(1.0);
            b = b.max(forward).max(backward);
            ratios.push(RatioEntry {
                t,
                alpha,
                forward,
                backward,
            });
        }
        beta.push(BetaEntry { alpha, beta: b });
    }
    Ok(DualityReport {
        grid: grid.to_vec(),
        alpha_grid: alpha_grid.to_vec(),
        primal,
        dual,
        ratios,
        beta,
        constants: *consts,
        budget,
        seed,
    })
}

/// Maximum and upper `q`-quantile (nearest rank) of `β(α)` over reports.
pub fn beta_summary(reports: &[DualityReport], alpha: f64, q: f64) -> Option<(f64, f64)> {
    let mut v: Vec<f64> = reports.iter().filter_map(|r| r.beta_for(alpha)).collect();
    if v.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    Some((v[v.len() - 1], v[rank - 1]))
}
