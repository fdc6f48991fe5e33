//! Last-passage percolation, the RSK correspondence and exact counting of
//! the RSK shape distribution.
//!
//! Grid coordinates follow the lattice picture: a [`WeightGrid`] has `m`
//! columns (the horizontal index `i`) and `n` rows (the vertical index `j`).
//! Paths move by unit east or north steps.

mod counting;
mod grid;
mod oracle;
mod paths;
mod rsk;

pub use counting::{l_count, partitions_up_to, shape_log_pmf, ssyt_count};
pub use grid::{IncrementGrid, Weight, WeightGrid};
pub use oracle::{brute_force_disjoint, DisjointPathOracle, MAX_ORACLE_SITES};
pub use paths::{last_passage, last_passage_disjoint, last_passage_disjoint_free, staircase_last_passage};
pub use rsk::{rsk, rsk_shape, Partition, TableauPair};
