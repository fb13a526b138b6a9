//! The constructive steps of the duality argument as algorithms with checked
//! postconditions: product combiners for separated sets, the transfer of
//! polar nets into the ball, and the odd/even telescoping schedule.

mod combine;
mod telescope;
mod transfer;

pub use combine::{
    CombinerInput, dual_combine, dual_inputs, dual_precheck, mixed_gauge, primal_combine,
    primal_combine_weighted,
};
pub use telescope::{Collapse, Parity, TelescopeSchedule, telescope_schedule};
pub use transfer::{DiameterSet, NetTransfer, diameter_realizing_separated, net_transfer_polar};
