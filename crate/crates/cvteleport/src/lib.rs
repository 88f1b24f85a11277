//! Gaussian simulation and optimization of continuous-variable quantum
//! teleportation whose entanglement comes from a quantum nondemolition
//! interaction.
//!
//! The protocol under study teleports one optical mode using a two-mode
//! state produced by a QND coupling of strength `g`, a Bell measurement
//! built from a second coupling (QND of strength `g'`, an unbalanced beam
//! splitter, or any symplectic interaction), optional local Gaussian
//! operations on the shared modes, and a displacement with tunable gains.
//! Everything is exact linear algebra on covariance matrices; no sampling
//! is involved.
//!
//! - [`symplectic`]: 2x2 and 4x4 symplectic matrices, elementary optical
//!   transformations, Bloch-Messiah factorization.
//! - [`covariance`]: two-mode covariance matrices and their standard form.
//! - [`protocol`]: the teleportation pipeline from configuration to output
//!   state, added-noise matrix, and first-moment map.
//! - [`metrics`]: conditional-variance product, signal transfer, fidelity,
//!   added photon number, and the quantum-regime flags.
//! - [`optimize`]: closed-form optima (gains, Bell coupling, local
//!   operations) together with brute-force numeric cross-checks.
//! - [`reproduce`]: the golden table of reference values with tolerances.
//! - [`sweep`]: grid evaluation with CSV and JSON output.
//! - [`check`]: the randomized invariant suite behind `cvteleport check`.
//!
//! ```
//! use cvteleport::metrics::evaluate;
//! use cvteleport::protocol::ProtocolConfig;
//!
//! let report = evaluate(&ProtocolConfig::qnd(1.0, 4.0 / 3.0)).unwrap();
//! assert!((report.f - 2.0 * 6.0_f64.sqrt() / 7.0).abs() < 1e-12);
//! assert!(report.flags.combined());
//! ```

pub mod check;
pub mod covariance;
pub mod error;
pub mod metrics;
pub mod optimize;
pub mod protocol;
pub mod reproduce;
pub mod sweep;
mod search;
pub mod symplectic;
pub mod tol;

pub use covariance::CovarianceMatrix2Mode;
pub use error::{Error, Result};
pub use metrics::{evaluate, MetricsReport};
pub use protocol::{run_protocol, BellInteraction, GainPolicy, ProtocolConfig};
pub use symplectic::{SymplecticMat2, SymplecticMat4};
