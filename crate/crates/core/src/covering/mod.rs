//! Covering numbers `N(K, tT)`: certified lower bounds from separated sets,
//! sample-certified upper bounds from nets, exact values on small discrete
//! instances, and staircases over resolution grids.

mod bounds;
mod exact;
mod separated;
mod staircase;
mod stream;

pub use bounds::{
    Certification, CoverEstimate, covering_bounds, covering_bounds_on, covering_bounds_with,
};
pub use staircase::{
    EntropyBracket, Repair, RepairKind, Staircase, StaircaseEntry, entropy_numbers,
    single_cover_at, staircase,
};

pub use exact::{ExactCover, exact_cover_small};
pub use separated::{SeparatedSet, greedy_separated, greedy_separated_with, separated_from};

pub use stream::{CandidateStream, MAX_DIM, lattice_points, min_budget};

pub(crate) use bounds::bounds_from_stream;
pub(crate) use separated::{NearGrid, certified_apart, certified_within};
