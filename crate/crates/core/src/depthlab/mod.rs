//! Standard and effective circuit depth.
//!
//! Effective depth follows information through the circuit: a path runs
//! forward along a qubit, may hop between the qubits of any two-qubit gate,
//! and is cut by a Reset.

mod contrived;
mod flow;
mod table;

pub use contrived::{build_contrived_qe_ht, build_contrived_qe_ht_with, CONTRIVED_ANCILLAS};
pub use flow::{effective_depth, max_time_between_resets, DepthReport, PathStep};
pub use table::{build_named, builder_names, depth_table, write_depth_csv, DepthRow};

/// Builder name of [`build_contrived_qe_ht`].
pub const CONTRIVED_NAME: &str = "contrived";

#[cfg(test)]
mod tests;
