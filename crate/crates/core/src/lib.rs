//! Exact n-point correlation functions of the integrable highest-weight
//! modules of the central extension of `gl(infinity)` at positive level.
//!
//! Three independent routes compute the same series:
//!
//! * [`formulas::npoint_level`]: the theta-determinant closed form,
//! * [`formulas::npoint_kostka`]: the inverse-Kostka form,
//! * [`fock::oracle_npoint`]: a brute-force trace over the fermionic Fock
//!   space, with the component extracted through Schur coordinates.
//!
//! All arithmetic is over exact rationals; series are truncated on a grid of
//! `q^(1/8)` (see [`qseries`]).

pub mod error;
pub mod fock;
pub mod formulas;
pub mod par;
pub mod partitions;
pub mod qseries;
pub mod symfunc;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{fock_trace, oracle_level1_charge, oracle_npoint, t_eigenvalue, TPoint};
pub use formulas::{bold_f, f_bo, npoint_kostka, npoint_level, qdim};
pub use verify::{verify, IdentityId, VerifyParams, VerifyReport};

pub use partitions::{
    enumerate_states, gen_partitions, partitions_of, state_energy, ChargedPartition, FockState,
    GenPartition, Partition,
};
pub use qseries::{euler_phi, theta_deriv, QSeries, Rational};
pub use symfunc::{
    kostka_number, kostka_table, schur_in_monomials, to_schur_basis, KostkaTable, SymLaurentPoly,
};

/// Empties the memo tables (Kostka tables and permutation sums), so that a
/// following computation starts cold.
pub fn clear_caches() {
    symfunc::clear_table_cache();
    formulas::clear_sum_cache();
}
