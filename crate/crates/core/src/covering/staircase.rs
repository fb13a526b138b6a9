use alloc::vec::Vec;

use super::bounds::{Certification, CoverEstimate, covering_bounds_on};
use super::stream::CandidateStream;
use crate::error::{check_dim, positive};
use crate::{Body, Error, OracleTolerance};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StaircaseEntry {
    pub t: f64,
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub certification: Certification,
    /// Certified lower bound on the largest candidate `T`-gauge.
    pub max_gauge: f64,
}

impl StaircaseEntry {
    pub fn pitch(&self) -> f64 {
        match self.certification {
            Certification::SampleCertified { grid_pitch, .. } => grid_pitch,
            _ => 0.0,
        }
    }

    /// Relative inflation under which the upper bound holds for all of `K`.
    pub fn inflation(&self) -> f64 {
        match self.certification {
            Certification::SampleCertified { inflation, .. } => inflation,
            _ => 0.0,
        }
    }

    /// `true` if the two brackets `[lower_bits, upper_bits]` share a point.
    pub fn overlaps(&self, other: &StaircaseEntry) -> bool {
        self.lower_bits <= other.upper_bits + 1e-12 && other.lower_bits <= self.upper_bits + 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RepairKind {
    /// Lower bits raised to a value measured at a coarser resolution.
    Lower,
    /// Upper bits lowered to a value measured at a finer resolution.
    Upper,
    /// Lower bits clamped to the upper bits.
    Clamp,
}

/// One monotonicity repair: the value at `t` changed from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Repair {
    pub t: f64,
    pub kind: RepairKind,
    pub from: f64,
    pub to: f64,
}

/// `t ↦ (log₂ lower, log₂ upper)` bounds on `N(K, tT)` over an ascending grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Staircase {
    pub entries: Vec<StaircaseEntry>,
    pub repairs: Vec<Repair>,
    /// `R(K)/r(T)`: at or above this resolution one translate suffices.
    pub single_cover_at: f64,
}

impl Staircase {
    /// Assembles estimates (ascending in `t`) and repairs monotonicity.
    pub fn from_estimates(
        estimates: &[CoverEstimate],
        single_cover_at: f64,
    ) -> Result<Self, Error> {
        if estimates.is_empty() {
            return Err(Error::EmptyInput("staircase needs at least one resolution"));
        }
        let mut entries: Vec<StaircaseEntry> = estimates
            .iter()
            .map(|e| StaircaseEntry {
                t: e.t,
                lower_bits: e.lower_bits(),
                upper_bits: e.upper_bits(),
                certification: e.certification,
                max_gauge: e.max_gauge,
            })
            .collect();
        let mut repairs = Vec::new();
        for i in (0..entries.len().saturating_sub(1)).rev() {
            let next = entries[i + 1].lower_bits;
            if next > entries[i].lower_bits {
                repairs.push(Repair {
                    t: entries[i].t,
                    kind: RepairKind::Lower,
                    from: entries[i].lower_bits,
                    to: next,
                });
                entries[i].lower_bits = next;
            }
        }
        for i in 1..entries.len() {
            let prev = entries[i - 1].upper_bits;
            if prev < entries[i].upper_bits {
                repairs.push(Repair {
                    t: entries[i].t,
                    kind: RepairKind::Upper,
                    from: entries[i].upper_bits,
                    to: prev,
                });
                entries[i].upper_bits = prev;
            }
        }
        for e in &mut entries {
            if e.lower_bits > e.upper_bits {
                repairs.push(Repair {
                    t: e.t,
                    kind: RepairKind::Clamp,
                    from: e.lower_bits,
                    to: e.upper_bits,
                });
                e.lower_bits = e.upper_bits;
            }
        }
        Ok(Self {
            entries,
            repairs,
            single_cover_at,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.t).collect()
    }

    /// The entry at resolution `t`, if `t` is on the grid.
    pub fn at(&self, t: f64) -> Option<&StaircaseEntry> {
        self.entries.iter().find(|e| e.t == t)
    }

    /// Bracket-safe bits at an arbitrary resolution: lower bits from the
    /// nearest grid point at or above `t`, upper bits from the nearest grid
    /// point at or below. Missing sides are `0` and `∞`.
    pub fn bits_at(&self, t: f64) -> (f64, f64) {
        if t >= self.single_cover_at {
            return (0.0, 0.0);
        }
        let lower = self
            .entries
            .iter()
            .find(|e| e.t >= t)
            .map_or(0.0, |e| e.lower_bits);
        let upper = self
            .entries
            .iter()
            .rev()
            .find(|e| e.t <= t)
            .map_or(f64::INFINITY, |e| e.upper_bits);
        (lower, upper)
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<(), Error> {
    if grid.is_empty() {
        return Err(Error::EmptyInput("resolution grid"));
    }
    for &t in grid {
        positive("grid resolution", t)?;
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "must be strictly ascending",
        });
    }
    Ok(())
}

/// Covering bounds at every grid resolution, all from one candidate stream.
pub fn staircase(
    k: &Body,
    t_body: &Body,
    grid: &[f64],
    budget: usize,
    seed: u64,
) -> Result<Staircase, Error> {
    check_grid(grid)?;
    check_dim(k.dim(), t_body.dim())?;
    let tol = OracleTolerance::default();
    let stream = CandidateStream::build(k, budget, seed, &tol)?;
    let estimates = grid
        .iter()
        .map(|&t| covering_bounds_on(k, t_body, t, &stream, &tol))
        .collect::<Result<Vec<_>, _>>()?;
    Staircase::from_estimates(&estimates, single_cover_at(k, t_body))
}

pub fn single_cover_at(k: &Body, t_body: &Body) -> f64 {
    k.circumradius_bound() / t_body.inradius_bound()
}

/// Bracket on the entropy number `e_k = inf{ε : N(K, εT) ≤ 2^{k−1}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyBracket {
    pub k: usize,
    /// `0` when no grid point certifies more than `2^{k−1}` translates.
    pub lower: f64,
    /// `∞` when no grid point certifies at most `2^{k−1}` translates.
    pub upper: f64,
}

/// Inverts the staircase: `e_k ≥ t` wherever the lower bits exceed `k − 1`,
/// and `e_k ≤ t·(1 + inflation)` wherever the upper bits are at most `k − 1`.
/// For `k = 1` the radius ratio and the largest candidate gauge also bound
/// `e_1`.
pub fn entropy_numbers(st: &Staircase, k_max: usize) -> Result<Vec<EntropyBracket>, Error> {
    if st.entries.is_empty() {
        return Err(Error::EmptyInput("staircase"));
    }
    let mut out: Vec<EntropyBracket> = (1..=k_max)
        .map(|k| {
            let level = (k - 1) as f64;
            let mut lower = st
                .entries
                .iter()
                .filter(|e| e.lower_bits > level + 1e-12)
                .map(|e| e.t)
                .fold(0.0, f64::max);
            let mut upper = st
                .entries
                .iter()
                .filter(|e| e.upper_bits <= level + 1e-12)
                .map(|e| e.t * (1.0 + e.inflation()))
                .fold(f64::INFINITY, f64::min);
            if k == 1 {
                upper = upper.min(st.single_cover_at);
                lower = st.entries.iter().map(|e| e.max_gauge).fold(lower, f64::max);
            }
            EntropyBracket { k, lower, upper }
        })
        .collect();
    for i in 1..out.len() {
        out[i].upper = out[i].upper.min(out[i - 1].upper);
    }
    for i in (0..out.len().saturating_sub(1)).rev() {
        out[i].lower = out[i].lower.max(out[i + 1].lower);
    }
    Ok(out)
}
