//! Radial entire solutions of the nonlinear biharmonic equation
//! `Δ²u = u^p` on `ℝⁿ`: shooting solver, exact reference solutions,
//! stability classification and executable versions of the qualitative
//! properties (amplitude bound, monotonicity, non-intersection, Rellich
//! bound, variational instability probes).
//!
//! The crate is organised around the pipeline
//!
//! ```text
//! quartic      exact polynomial layer: symbol Q4, stability polynomial,
//!              critical exponents, characteristic roots
//! closedform   exact solutions used as oracles (critical profile,
//!              singular profile, closed-form test-function energy)
//! radial_ode   adaptive integration of the radial system and the
//!              shooting iteration on the second initial value
//! emden        log-radius transform of solved profiles and the
//!              graph-property checks
//! spectral     radial quadrature of the stability quadratic form and
//!              instability probes
//! ```
//!
//! All computations are deterministic pure functions of their inputs;
//! every value type is immutable after construction and safe to share
//! across threads.

pub mod closedform;
mod dopri;
pub mod emden;
mod quad;
pub mod quartic;
pub mod radial_ode;
pub mod report;
pub mod special;
pub mod spectral;

pub use quartic::{ProblemParams, Regime, RootSet};
pub use radial_ode::{RadialSolution, ShootingConfig, State, TrajectoryClass};
pub use report::{Applicability, VerificationReport};
