//! Retrodictive analysis of micromaser field measurements.
//!
//! In a micromaser, excited two-level atoms cross a high-Q cavity one at a
//! time and are detected as excited or ground on exit. The cavity field
//! itself is never observed directly, so a recorded sequence of atomic
//! detections *is* the field measurement. This crate answers the question
//! that record poses: what did the detections say about the photon number
//! before the atoms went through?
//!
//! Three routes to that answer live here and are tested against each other:
//!
//! - [`pom`] builds the measurement operator for any detection sequence as a
//!   diagonal coefficient vector: each excited detection contributes a
//!   cos²(θ√(n+k)) Rabi factor, each ground detection a sin²(θ√(n+k)) factor
//!   and a unit shift of every later argument.
//! - [`retrodict`] runs the same physics as per-atom backward updates of
//!   photon-number weights, combines them with a prior, and reports the
//!   supported photon numbers and the gaps between them.
//! - [`oracle`] is an independent forward engine: closed-form resonant
//!   Jaynes-Cummings evolution of the joint atom-field state, conditioned
//!   click by click, plus a dense matrix-exponential cross-check of the
//!   closed form.
//!
//! At θ = π the trapping condition shapes everything: an excited atom above
//! `n = k²−1` photons must exit excited, so excited detections concentrate
//! weight on those photon numbers while ground detections forbid them and
//! punch gaps into the distribution.
//!
//! The `retromaser` binary exposes the same functionality as subcommands
//! (`pom`, `retrodict`, `predict`, `figure`, `table1`, `verify`) emitting
//! CSV or JSON tables; see the crate examples for library walkthroughs of
//! each capability.

pub mod cli;
pub mod error;
pub mod oracle;
pub mod pom;
pub mod retrodict;
pub mod types;

pub use error::{Error, Result};
pub use oracle::{
    bayes_posterior, evolve_one_atom, matrix_exponential_check, sequence_likelihood, JointState,
    SequenceLikelihood,
};
pub use pom::{completeness_deviation, PomElement, TwoAtomRow, COMPLETENESS_MAX_LEN};
pub use retrodict::{
    backward_update, retrodict_state, retrodict_with_final, FinalField, PriorSpec,
    RetrodictiveState, SupportReport, SUPPORT_EPS,
};
pub use types::{
    excited_factor, ground_factor, outcome_factor, rabi_angle, AtomOutcome, DetectionSequence,
    FockWeights, MaserParams,
};
