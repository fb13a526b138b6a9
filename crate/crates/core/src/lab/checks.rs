use alloc::string::String;
use alloc::vec::Vec;

use crate::covering::covering_bounds;
use crate::functionals::{
    GammaValue, IterationSequence, PaperConstants, SequenceKind, dual_sequence, gamma, gamma_prime,
    primal_sequence, psi,
};
use crate::rng::derive_seed;
use crate::{Body, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    /// The brackets cannot falsify the inequality.
    Consistent,
    /// Even the most favourable ends of the brackets break it. This indicts
    /// the configured constants or the covering budget.
    ViolatedAtBrackets,
    /// Not evaluated; see the check's note.
    Skipped,
}

/// `log N(lhs) ≤ exponent · log N(rhs)` in bits, compared as
/// `lhs_lower_bits ≤ rhs_upper_bits`, the exponent already applied.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InequalityCheck {
    pub name: String,
    pub lhs_lower_bits: f64,
    pub rhs_upper_bits: f64,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl InequalityCheck {
    fn compare(name: &str, lhs_lower_bits: f64, rhs_upper_bits: f64) -> Self {
        let verdict = if lhs_lower_bits <= rhs_upper_bits + 1e-12 {
            Verdict::Consistent
        } else {
            Verdict::ViolatedAtBrackets
        };
        Self {
            name: name.into(),
            lhs_lower_bits,
            rhs_upper_bits,
            verdict,
            note: None,
        }
    }

    fn skipped(name: &str, note: &str) -> Self {
        Self {
            name: name.into(),
            lhs_lower_bits: f64::NAN,
            rhs_upper_bits: f64::NAN,
            verdict: Verdict::Skipped,
            note: Some(note.into()),
        }
    }

    /// `lhs_lower_bits − rhs_upper_bits`; negative when consistent.
    pub fn margin(&self) -> f64 {
        self.lhs_lower_bits - self.rhs_upper_bits
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FirstStepRecord {
    pub gamma: GammaValue,
    pub gamma_prime: GammaValue,
    /// `ψ(R)` with `R = max(1, R(K))`.
    pub psi: f64,
    pub checks: Vec<InequalityCheck>,
    pub constants: PaperConstants,
}

impl FirstStepRecord {
    pub fn consistent(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.verdict != Verdict::ViolatedAtBrackets)
    }
}

/// The first-step inequalities and their `ψ(R)` combination, each evaluated
/// at the configured constants:
///
/// - `N(K, D) ≤ N(D, (c₂/γ)K°)³`
/// - `N(D, C₂γK°) ≤ N(K, D)^{1+ε}`
/// - `N(K, C₂'γ'D) ≤ N(D, K°)^{1+ε}`
/// - `N(D, ψ(R)K°) ≤ N(K, D)²` and `N(K, D) ≤ N(D, ψ(R)⁻¹K°)³` for `K ⊆ RD`
///
/// Checks that need `γ` (or `γ'`) with `k < 1` are skipped.
pub fn check_first_step(
    k: &Body,
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<FirstStepRecord, Error> {
    consts.validate()?;
    let d = Body::unit_ball(k.dim());
    let polar = Body::polar(k.clone());
    let g = gamma(k, consts, budget, derive_seed(seed, 1))?;
    let gp = gamma_prime(k, consts, budget, derive_seed(seed, 2))?;
    let mut stream = 10;
    let mut cover = |a: &Body, t_body: &Body, t: f64| {
        stream += 1;
        covering_bounds(a, t_body, t, budget, derive_seed(seed, stream))
    };
    let kd = cover(k, &d, 1.0)?;
    let dk = cover(&d, &polar, 1.0)?;
    let e = consts.eps;
    let mut checks = Vec::new();

    if g.flagged {
        checks.push(InequalityCheck::skipped(
            "N(K,D) <= N(D,(c2/gamma)K°)^3",
            "k < 1",
        ));
        checks.push(InequalityCheck::skipped(
            "N(D,C2 gamma K°) <= N(K,D)^(1+eps)",
            "k < 1",
        ));
    } else {
        let rhs = cover(&d, &polar, consts.small_c2 / g.value)?;
        checks.push(InequalityCheck::compare(
            "N(K,D) <= N(D,(c2/gamma)K°)^3",
            kd.lower_bits(),
            3.0 * rhs.upper_bits(),
        ));
        let lhs = cover(&d, &polar, consts.c2 * g.value)?;
        checks.push(InequalityCheck::compare(
            "N(D,C2 gamma K°) <= N(K,D)^(1+eps)",
            lhs.lower_bits(),
            (1.0 + e) * kd.upper_bits(),
        ));
    }
    if gp.flagged {
        checks.push(InequalityCheck::skipped(
            "N(K,C2' gamma' D) <= N(D,K°)^(1+eps)",
            "k < 1",
        ));
    } else {
        let lhs = cover(k, &d, consts.c2_prime * gp.value)?;
        checks.push(InequalityCheck::compare(
            "N(K,C2' gamma' D) <= N(D,K°)^(1+eps)",
            lhs.lower_bits(),
            (1.0 + e) * dk.upper_bits(),
        ));
    }

    let p = psi(k.circumradius_bound().max(1.0), consts)?;
    let lhs = cover(&d, &polar, p)?;
    checks.push(InequalityCheck::compare(
        "N(D,psi(R)K°) <= N(K,D)^2",
        lhs.lower_bits(),
        2.0 * kd.upper_bits(),
    ));
    let rhs = cover(&d, &polar, 1.0 / p)?;
    checks.push(InequalityCheck::compare(
        "N(K,D) <= N(D,K°/psi(R))^3",
        kd.lower_bits(),
        3.0 * rhs.upper_bits(),
    ));

    Ok(FirstStepRecord {
        gamma: g,
        gamma_prime: gp,
        psi: p,
        checks,
        constants: *consts,
    })
}

/// Upper bits of the `j`-th factor of both product forms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationFactor {
    pub j: usize,
    pub r_j: f64,
    pub r_next: f64,
    /// Primal: `N(D, (R_j/2)(K ∩ R_{j+1}D)°)`. Dual: `N(2K ∩ R_{j+1}D, R_jD)`.
    pub direct_bits: f64,
    /// Primal: `2·log N(K ∩ R_{j+1}D, √R_j D)`. Dual:
    /// `3·log N(D, √R_j (K ∩ (R_{j+1}/2)D)°)`.
    pub substituted_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationRecord {
    pub kind: SequenceKind,
    pub sequence: IterationSequence,
    /// Lower bits of `N(D, R₀K°)` (primal) or `N(K, R₀D)` (dual).
    pub lhs_lower_bits: f64,
    /// Upper bits of the terminal factor at `R_s`.
    pub terminal_upper_bits: f64,
    pub factors: Vec<IterationFactor>,
    /// The product of direct factors.
    pub direct: InequalityCheck,
    /// The product after substituting the duality-up-to-ψ bound.
    pub substituted: InequalityCheck,
    /// Running margins `lhs − (terminal + Σ_{i ≤ j} substituted_i)`, one per
    /// factor.
    pub margins: Vec<f64>,
}

impl IterationRecord {
    pub fn terminal_is_one(&self) -> bool {
        self.terminal_upper_bits == 0.0
    }

    pub fn consistent(&self) -> bool {
        self.direct.verdict == Verdict::Consistent
            && self.substituted.verdict == Verdict::Consistent
            && self.terminal_is_one()
    }
}

/// Evaluates the iteration inequalities along the generated sequence for
/// `diameter = 2R(K)`.
pub fn check_iteration(
    k: &Body,
    kind: SequenceKind,
    consts: &PaperConstants,
    budget: usize,
    seed: u64,
) -> Result<IterationRecord, Error> {
    let diameter = 2.0 * k.circumradius_bound();
    let seq = match kind {
        SequenceKind::Primal => primal_sequence(consts, diameter)?,
        SequenceKind::Dual => dual_sequence(consts, diameter)?,
    };
    let r = &seq.values;
    let s = seq.s;
    let d = Body::unit_ball(k.dim());
    let polar = Body::polar(k.clone());
    let mut stream = 0;
    let mut cover = |a: &Body, t_body: &Body, t: f64| {
        stream += 1;
        covering_bounds(a, t_body, t, budget, derive_seed(seed, stream))
    };
    let (lhs, terminal) = match kind {
        SequenceKind::Primal => (cover(&d, &polar, r[0])?, cover(&d, &polar, r[s])?),
        SequenceKind::Dual => (cover(k, &d, r[0])?, cover(k, &d, r[s])?),
    };
    let mut factors = Vec::with_capacity(s);
    for j in 0..s {
        let (direct, substituted) = match kind {
            SequenceKind::Primal => {
                let cut = Body::intersect_ball(k, r[j + 1])?;
                let direct = cover(&d, &Body::polar(cut.clone()), r[j] / 2.0)?;
                let sub = cover(&cut, &d, r[j].sqrt())?;
                (direct.upper_bits(), 2.0 * sub.upper_bits())
            }
            SequenceKind::Dual => {
                let doubled = Body::intersect_ball(&k.scaled(2.0)?, r[j + 1])?;
                let direct = cover(&doubled, &d, r[j])?;
                let cut = Body::intersect_ball(k, r[j + 1] / 2.0)?;
                let sub = cover(&d, &Body::polar(cut), r[j].sqrt())?;
                (direct.upper_bits(), 3.0 * sub.upper_bits())
            }
        };
        factors.push(IterationFactor {
            j,
            r_j: r[j],
            r_next: r[j + 1],
            direct_bits: direct,
            substituted_bits: substituted,
        });
    }
    let lhs_bits = lhs.lower_bits();
    let terminal_bits = terminal.upper_bits();
    let direct_sum = terminal_bits + factors.iter().map(|f| f.direct_bits).sum::<f64>();
    let mut running = terminal_bits;
    let margins = factors
        .iter()
        .map(|f| {
            running += f.substituted_bits;
            lhs_bits - running
        })
        .collect();
    let (dname, sname) = match kind {
        SequenceKind::Primal => (
            "N(D,R0 K°) <= direct product",
            "N(D,R0 K°) <= substituted product",
        ),
        SequenceKind::Dual => (
            "N(K,R0 D) <= direct product",
            "N(K,R0 D) <= substituted product",
        ),
    };
    Ok(IterationRecord {
        kind,
        direct: InequalityCheck::compare(dname, lhs_bits, direct_sum),
        substituted: InequalityCheck::compare(sname, lhs_bits, running),
        sequence: seq,
        lhs_lower_bits: lhs_bits,
        terminal_upper_bits: terminal_bits,
        factors,
        margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_first_step() {
        let rec = check_first_step(
            &Body::ball(2, 2.0).unwrap(),
            &PaperConstants::default(),
            4000,
            1,
        )
        .unwrap();
        assert!(rec.consistent(), "{:?}", rec.checks);
        assert_eq!(rec.gamma.value, 1.0);
        assert!(rec.checks.iter().all(|c| c.verdict == Verdict::Consistent));
    }

    #[test]
    fn unit_ball_first_step_is_skipped() {
        let rec =
            check_first_step(&Body::unit_ball(2), &PaperConstants::default(), 2000, 1).unwrap();
        assert!(rec.gamma.flagged);
        assert_eq!(
            rec.checks
                .iter()
                .filter(|c| c.verdict == Verdict::Skipped)
                .count(),
            3
        );
    }

    #[test]
    fn ball_iteration_is_trivial() {
        let rec = check_iteration(
            &Body::unit_ball(2),
            SequenceKind::Dual,
            &PaperConstants::default(),
            2000,
            1,
        )
        .unwrap();
        assert!(rec.consistent());
        assert!(
            rec.factors
                .iter()
                .all(|f| f.direct_bits == 0.0 && f.substituted_bits == 0.0)
        );
        assert_eq!(rec.sequence.s, 2);
    }

    #[test]
    fn primal_iteration_needs_a_growing_sequence() {
        let err = check_iteration(
            &Body::unit_ball(2),
            SequenceKind::Primal,
            &PaperConstants::default(),
            2000,
            1,
        );
        assert!(matches!(err, Err(Error::SequenceNotIncreasing { .. })));
    }
}
