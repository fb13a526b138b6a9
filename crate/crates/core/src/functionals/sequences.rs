use alloc::vec::Vec;

use num_traits::Float;

use super::PaperConstants;
use crate::Error;

const OVERFLOW: f64 = 1e300;

/// `ψ(x) = 2C₂(C₀ log₂³x + 1) + 2` for `x ≥ 1`.
pub fn psi(x: f64, c: &PaperConstants) -> Result<f64, Error> {
    if !(x >= 1.0 && x.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: "psi is defined for x >= 1",
        });
    }
    Ok(psi_unchecked(x, c))
}

fn psi_unchecked(x: f64, c: &PaperConstants) -> f64 {
    let l = x.log2();
    2.0 * c.c2 * (c.c0 * l * l * l + 1.0) + 2.0
}

/// The `x ≥ 1` with `ψ(x) = v`, by bisection on `log₂ x`. `None` when
/// `v < ψ(1) = 2C₂ + 2` or the solution overflows.
pub fn psi_inverse(v: f64, c: &PaperConstants) -> Option<f64> {
    let floor = psi_unchecked(1.0, c);
    if !(v >= floor) || !v.is_finite() {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while psi_unchecked(hi.exp2(), c) < v {
        hi *= 2.0;
        if hi > 1000.0 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi_unchecked(mid.exp2(), c) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = hi.exp2();
    if psi_unchecked(lo.exp2(), c) == v {
        Some(lo.exp2())
    } else {
        Some(x)
    }
}

/// `log₂ x = ((v − 2 − 2C₂)/(2C₂C₀))^{1/3}`: the closed-form inverse with
/// base-2 logarithms inside `ψ`.
pub fn psi_inverse_closed_form(v: f64, c: &PaperConstants) -> Option<f64> {
    let base = (v - 2.0 - 2.0 * c.c2) / (2.0 * c.c2 * c.c0);
    (base >= 0.0).then(|| base.cbrt().exp2())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SequenceKind {
    /// `√R_j / 2 = ψ(R_{j+1} / √R_j)`.
    Primal,
    /// `ψ(R'_{j+1} / R'_j) = √R'_j / 2`.
    Dual,
}

impl SequenceKind {
    /// The next term, or `None` outside the domain of the relation.
    pub fn step(self, r: f64, c: &PaperConstants) -> Option<f64> {
        let x = psi_inverse(r.sqrt() / 2.0, c)?;
        Some(match self {
            SequenceKind::Primal => r.sqrt() * x,
            SequenceKind::Dual => r * x,
        })
    }

    /// Relative residual of the defining relation between `r` and `next`.
    pub fn residual(self, r: f64, next: f64, c: &PaperConstants) -> f64 {
        let lhs = r.sqrt() / 2.0;
        let ratio = match self {
            SequenceKind::Primal => next / r.sqrt(),
            SequenceKind::Dual => next / r,
        };
        if ratio < 1.0 {
            return f64::INFINITY;
        }
        ((psi_unchecked(ratio, c) - lhs) / lhs).abs()
    }

    /// The paper's printed closed form
    /// `R_{j+1} = base · exp(((√R_j − 4 − 4C₂)/(4C₂C₀))^{1/3})`, with
    /// `base = √R_j` (primal) or `R_j` (dual).
    pub fn printed_closed_form(self, r: f64, c: &PaperConstants) -> Option<f64> {
        let inner = (r.sqrt() - 4.0 - 4.0 * c.c2) / (4.0 * c.c2 * c.c0);
        if inner < 0.0 {
            return None;
        }
        let base = match self {
            SequenceKind::Primal => r.sqrt(),
            SequenceKind::Dual => r,
        };
        Some(base * inner.cbrt().exp())
    }
}

/// A generated recurrence, stopped at the first even index `s ≥ 2` with
/// `values[s] > diameter`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationSequence {
    pub kind: SequenceKind,
    pub values: Vec<f64>,
    pub s: usize,
    pub diameter: f64,
}

impl IterationSequence {
    /// Largest relative residual of the defining relation over all steps.
    pub fn max_residual(&self, c: &PaperConstants) -> f64 {
        self.values
            .windows(2)
            .map(|w| self.kind.residual(w[0], w[1], c))
            .fold(0.0, f64::max)
    }
}

pub fn primal_sequence(c: &PaperConstants, diameter: f64) -> Result<IterationSequence, Error> {
    generate(SequenceKind::Primal, c, diameter)
}

pub fn dual_sequence(c: &PaperConstants, diameter: f64) -> Result<IterationSequence, Error> {
    generate(SequenceKind::Dual, c, diameter)
}

fn generate(
    kind: SequenceKind,
    c: &PaperConstants,
    diameter: f64,
) -> Result<IterationSequence, Error> {
    c.validate()?;
    if !(diameter.is_finite() && diameter >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "diameter",
            reason: "must be finite and non-negative",
        });
    }
    let mut values = alloc::vec![c.r0];
    loop {
        let j = values.len() - 1;
        let r = values[j];
        if j >= 2 && j % 2 == 0 && r > diameter {
            return Ok(IterationSequence {
                kind,
                values,
                s: j,
                diameter,
            });
        }
        let next = kind
            .step(r, c)
            .ok_or(Error::SequenceDomain { index: j, value: r })?;
        if !(next < OVERFLOW) {
            return Err(Error::SequenceOverflow { index: j + 1 });
        }
        if next <= r {
            return Err(Error::SequenceNotIncreasing {
                index: j + 1,
                previous: r,
                next,
            });
        }
        values.push(next);
    }
}

/// Up to `count` terms of the recurrence from `r0`, without the growth
/// requirement. Stops early when the relation has no solution or the
/// terms overflow.
pub fn recurrence_terms(kind: SequenceKind, c: &PaperConstants, r0: f64, count: usize) -> Vec<f64> {
    let mut out = alloc::vec![r0];
    while out.len() < count {
        match kind.step(*out.last().expect("non-empty"), c) {
            Some(v) if v < OVERFLOW => out.push(v),
            _ => break,
        }
    }
    out
}
