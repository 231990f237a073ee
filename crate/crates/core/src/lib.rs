//! Linear-response theory of a driven optomechanical cavity.
//!
//! A control laser parked near the lower motional sideband of a cavity
//! resonance turns the cavity transparent for a weak probe whenever the
//! two-photon resonance condition is met — the optomechanical analog of
//! electromagnetically induced transparency. This crate evaluates the full
//! model end to end: radiation-pressure steady state (including the
//! bistability cubic), the linearized probe response in three variants
//! (exact closed form, resolved-sideband, weak-coupling Lorentzian), the
//! phase-modulation homodyne receiver, counterpropagating-mode splitting,
//! the atomic Λ-system correspondence, plus parameter sweeps and Lorentzian
//! fits for extracting window width and depth.
//!
//! Unit conventions: every frequency-like quantity is an *angular* rate in
//! rad/s, masses in kg, lengths in m, powers in W. Front ends that speak
//! linear Hz (as laboratory tables do) must multiply by 2π exactly once at
//! ingestion.
//!
//! All types are plain immutable values and all operations are pure
//! functions; everything is `Send + Sync` and grid evaluations parallelize
//! without affecting results.

pub mod eit;
pub mod error;
pub mod fit;
pub mod homodyne;
pub mod params;
pub mod response;
pub mod splitting;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{
    photon_flux, zero_point_fluctuation, CavityParams, CouplingParams, DriveParams,
    MechanicalParams, OperatingPoint, SystemParams, HBAR, SPEED_OF_LIGHT,
};
pub use response::{
    a_minus_closed_form, group_delay_at_center, group_delay_numeric, omit_width,
    response_closed_form, response_direct_solve, response_rsb, susceptibility,
    transmission_weak_coupling, LinearResponse, ModelVariant, TransmissionPoint,
};
pub use steady_state::{operating_point, solve_steady_state, SteadyStateRoot};
