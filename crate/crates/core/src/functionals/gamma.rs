use num_traits::Float;

use super::{PaperConstants, mean_width};
use crate::covering::covering_bounds;
use crate::rng::derive_seed;
use crate::{Body, Error};

/// Directions sampled for `M*(K ∩ D)` by [`gamma`] and [`gamma_prime`].
pub const MSTAR_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GammaKind {
    /// Exponent from `N(K, D)`.
    Gamma,
    /// Exponent from `N(D, K°)`.
    GammaPrime,
}

/// `max{1, M*(K ∩ D)·√(n/k)}` with `k` the log₂ of a certified lower bound
/// on the covering number.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GammaValue {
    pub value: f64,
    pub mstar: f64,
    pub mstar_stderr: f64,
    pub k_bits: f64,
    pub which: GammaKind,
    /// `k_bits < 1`: the formula is undefined and `value` is
    /// `max(1, M*·√n)` instead.
    pub flagged: bool,
}

impl GammaValue {
    pub fn from_parts(
        mstar: f64,
        mstar_stderr: f64,
        k_bits: f64,
        dim: usize,
        which: GammaKind,
    ) -> Self {
        let n = dim as f64;
        let flagged = k_bits < 1.0;
        let value = if flagged {
            (mstar * n.sqrt()).max(1.0)
        } else {
            (mstar * (n / k_bits).sqrt()).max(1.0)
        };
        Self {
            value,
            mstar,
            mstar_stderr,
            k_bits,
            which,
            flagged,
        }
    }
}

pub fn gamma(
    k: &Body,
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<GammaValue, Error> {
    gamma_with(k, GammaKind::Gamma, consts, budget, MSTAR_SAMPLES, seed)
}

pub fn gamma_prime(
    k: &Body,
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<GammaValue, Error> {
    gamma_with(
        k,
        GammaKind::GammaPrime,
        consts,
        budget,
        MSTAR_SAMPLES,
        seed,
    )
}

pub fn gamma_with(
    k: &Body,
    which: GammaKind,
    consts: &PaperConstants,
    budget: usize,
    samples: usize,
    seed: u64,
) -> Result<GammaValue, Error> {
    consts.validate()?;
    let d = Body::unit_ball(k.dim());
    let cover_seed = derive_seed(seed, 0x4741_4d4d);
    let est = match which {
        GammaKind::Gamma => covering_bounds(k, &d, 1.0, budget, cover_seed)?,
        GammaKind::GammaPrime => {
            covering_bounds(&d, &Body::polar(k.clone()), 1.0, budget, cover_seed)?
        }
    };
    let m = mean_width(
        &Body::intersect_ball(k, 1.0)?,
        samples,
        derive_seed(seed, 0x4d53_5452),
    )?;
    Ok(GammaValue::from_parts(
        m.estimate(),
        m.stderr(),
        est.lower_bits(),
        k.dim(),
        which,
    ))
}
