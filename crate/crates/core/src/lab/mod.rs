//! Experiment drivers: paired staircases of `(K, D)` and `(D, K°)` with
//! their duality ratios, numeric shadows of the first-step and iteration
//! inequalities, and statistics for the mean-width conjecture over random
//! body families.
//!
//! Every check compares the lower end of one bracket with the upper end of
//! the other, so a reported violation cannot come from sampling slack.

mod checks;
mod duality;
mod probe;
mod samplers;

pub use checks::{
    FirstStepRecord, InequalityCheck, IterationFactor, IterationRecord, Verdict, check_first_step,
    check_iteration,
};
pub use duality::{
    BetaEntry, DEFAULT_ALPHAS, DualityReport, RatioEntry, beta_summary, duality_report,
};
pub use probe::{
    ConjectureProbe, HISTOGRAM_BINS, ProbeRecord, RatioStats, body_seed, geometric_lemma_probe,
    probe_body, probe_one,
};
pub use samplers::{SampledBody, Sampler};
