//! Scalar functionals of bodies and the two radius recurrences.

mod constants;
mod gamma;
mod mean_width;
mod sequences;

pub use constants::PaperConstants;
pub use gamma::{GammaKind, GammaValue, MSTAR_SAMPLES, gamma, gamma_prime, gamma_with};
pub use mean_width::{
    MIN_SAMPLES, MeanWidth, SupportPaths, mean_width, mean_width_hull, mean_width_partial,
};
pub use sequences::{
    IterationSequence, SequenceKind, dual_sequence, primal_sequence, psi, psi_inverse,
    psi_inverse_closed_form, recurrence_terms,
};
