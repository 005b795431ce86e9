//! Exact simulation of measurement-based gate teleportation on AKLT chains
//! under site-local noise.
//!
//! The pure chain is an MPS ([`aklt`]); noisy states are density MPOs
//! ([`state`]) evolved by Kraus channels ([`channels`]). Gate fidelities come
//! from [`mbqc`], trajectories from [`evolution`].

pub mod aklt;
pub mod channels;
pub mod error;
pub mod evolution;
pub mod kraus_file;
pub mod mbqc;
pub mod mpo_analysis;
pub mod state;
pub mod tensor_core;

pub use aklt::{build_aklt, check_canonical, edge_string_correlator, extract_projective_rep, string_order, MpsChain, ProjectiveRep};
pub use channels::{catalog_noise, classify_table1, GroupRep, KrausChannel, SymmetryReport, Verdict};
pub use error::{Error, Result};
pub use evolution::{evolve, evolve_channel, noise1_asymptote, TrajectoryRow};
pub use mbqc::{
    assemble_rho_u, fidelity, fidelity_via_strings, gate_fidelity, identity_fidelity, pure_fidelity_closed_form,
    AssemblyMode, FidelityBreakdown, FidelityMode, GateAxis, GateSpec, MeasurementBasis, MeasurementRecord, Outcome,
};
pub use state::{DenseDensity, DensityMpo, EdgeState};
pub use tensor_core::{CMatrix, CVector, SpinAxis, C64};
