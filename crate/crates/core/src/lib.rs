//! Capacity regions and relaying schemes for multi-pair bidirectional relay
//! networks.
//!
//! * [`detnet`]: the linear shift deterministic model over F₂.
//! * [`cutset`]: exact cut-set bounds and region membership.
//! * [`scheduler`]: divide-and-conquer level assignment, time expansion and
//!   bit-exact simulation.
//! * [`gaussian`]: cut-set regions and the layered lattice/Gaussian power
//!   allocation for two pairs over Gaussian channels.

pub mod cutset;
pub mod detnet;
pub mod gaussian;
pub mod scheduler;
