use alloc::vec::Vec;

use num_traits::Float;

use super::samplers::{SampledBody, Sampler};
use crate::covering::covering_bounds;
use crate::functionals::{MSTAR_SAMPLES, PaperConstants, mean_width};
use crate::rng::derive_seed;
use crate::{Body, Error};

pub const HISTOGRAM_BINS: usize = 10;

/// One body of a probe.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeRecord {
    pub index: usize,
    pub radius: f64,
    /// Generating points of the hull, `None` for non-hull families.
    pub points: Option<usize>,
    /// Lower bits of `N(K, D)`.
    pub k_bits: f64,
    pub mstar: f64,
    pub mstar_stderr: f64,
    /// `k_bits < 1`: excluded from the statistics.
    pub flagged: bool,
    /// `2m ≤ 2^k` for a hull of `m` generating points and their negatives.
    pub few_points: Option<bool>,
    /// `M*(K ∩ D)·√(n/k)`.
    pub conjecture_ratio: Option<f64>,
    /// `M*(K ∩ D) / ((log₂R)³·√(k/n))`; `None` when `R ≤ 1`.
    pub log_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RatioStats {
    pub count: usize,
    pub max: f64,
    pub mean: f64,
    /// Equal-width bins over `[0, max]`.
    pub histogram: Vec<usize>,
}

impl RatioStats {
    fn of(values: impl Iterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.collect();
        if v.is_empty() {
            return None;
        }
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let mut histogram = alloc::vec![0; HISTOGRAM_BINS];
        for x in &v {
            let bin = if max > 0.0 {
                (x / max * HISTOGRAM_BINS as f64) as usize
            } else {
                0
            };
            histogram[bin.min(HISTOGRAM_BINS - 1)] += 1;
        }
        Some(Self {
            count: v.len(),
            max,
            mean,
            histogram,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConjectureProbe {
    pub sampler: Sampler,
    pub count: usize,
    pub records: Vec<ProbeRecord>,
    pub conjecture: Option<RatioStats>,
    pub log_normalized: Option<RatioStats>,
    pub constants: PaperConstants,
    pub budget: usize,
    pub seed: u64,
}

impl ConjectureProbe {
    /// Assembles a probe from per-body records, in index order.
    pub fn from_records(
        sampler: Sampler,
        mut records: Vec<ProbeRecord>,
        consts: &PaperConstants,
        budget: usize,
        seed: u64,
    ) -> Self {
        records.sort_by_key(|r| r.index);
        let used = || records.iter().filter(|r| !r.flagged);
        let conjecture = RatioStats::of(used().filter_map(|r| r.conjecture_ratio));
        let log_normalized = RatioStats::of(used().filter_map(|r| r.log_ratio));
        Self {
            sampler,
            count: records.len(),
            records,
            conjecture,
            log_normalized,
            constants: *consts,
            budget,
            seed,
        }
    }
}

/// Seed of body `index` in a probe with master seed `seed`.
pub fn body_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, 0x5052_0000 + index as u64)
}

/// Draws body `index` and measures it.
pub fn probe_one(
    sampler: &Sampler,
    index: usize,
    budget: usize,
    seed: u64,
) -> Result<ProbeRecord, Error> {
    let s = body_seed(seed, index);
    let sampled = sampler.sample(s)?;
    probe_body(&sampled, index, budget, s)
}

pub fn probe_body(
    sampled: &SampledBody,
    index: usize,
    budget: usize,
    seed: u64,
) -> Result<ProbeRecord, Error> {
    let k = &sampled.body;
    let n = k.dim() as f64;
    let d = Body::unit_ball(k.dim());
    let k_bits = covering_bounds(k, &d, 1.0, budget, derive_seed(seed, 1))?.lower_bits();
    let m = mean_width(
        &Body::intersect_ball(k, 1.0)?,
        MSTAR_SAMPLES,
        derive_seed(seed, 2),
    )?;
    let mstar = m.estimate();
    let flagged = k_bits < 1.0;
    let points = sampled.points.as_ref().map(Vec::len);
    let conjecture_ratio = (!flagged).then(|| mstar * (n / k_bits).sqrt());
    let log_r = sampled.radius.log2();
    let log_ratio = (!flagged && sampled.radius > 1.0)
        .then(|| mstar / (log_r * log_r * log_r * (k_bits / n).sqrt()));
    Ok(ProbeRecord {
        index,
        radius: sampled.radius,
        points,
        k_bits,
        mstar,
        mstar_stderr: m.stderr(),
        flagged,
        few_points: points.map(|m| ((2 * m) as f64).log2() <= k_bits),
        conjecture_ratio,
        log_ratio,
    })
}

/// `M*(K ∩ D)` against `√(k/n)` over `count` bodies of a family. Statistics
/// only; nothing here is a pass/fail test of a constant.
pub fn geometric_lemma_probe(
    sampler: &Sampler,
    count: usize,
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<ConjectureProbe, Error> {
    consts.validate()?;
    let records = (0..count)
        .map(|i| probe_one(sampler, i, budget, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConjectureProbe::from_records(
        sampler.clone(),
        records,
        consts,
        budget,
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_hulls() {
        let s = Sampler::SphereHull {
            dim: 3,
            points: 6,
            radius: 8.0,
        };
        let p = geometric_lemma_probe(&s, 4, &PaperConstants::default(), 4000, 9).unwrap();
        assert_eq!(p.records.len(), 4);
        let c = p.conjecture.as_ref().unwrap();
        assert!(c.max.is_finite() && c.max > 0.0);
        assert_eq!(c.histogram.iter().sum::<usize>(), c.count);
        assert!(p.log_normalized.is_some());
        assert_eq!(
            p,
            geometric_lemma_probe(&s, 4, &PaperConstants::default(), 4000, 9).unwrap()
        );
    }

    #[test]
    fn unit_balls_are_excluded() {
        let s = Sampler::Ball {
            dim: 2,
            radius: 1.0,
        };
        let p = geometric_lemma_probe(&s, 2, &PaperConstants::default(), 2000, 1).unwrap();
        assert!(p.records.iter().all(|r| r.flagged));
        assert!(p.conjecture.is_none());
    }

    #[test]
    fn unit_radius_has_no_log_form() {
        let sampled = Sampler::SphereHull {
            dim: 2,
            points: 3,
            radius: 1.0,
        }
        .sample(1)
        .unwrap();
        let r = probe_body(&sampled, 0, 2000, 1).unwrap();
        assert!(r.log_ratio.is_none());
    }
}
