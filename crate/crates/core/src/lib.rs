//! Generalized Nörlund summation of Taylor series in weighted Dirichlet spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`sequences`]: determining sequences `(p_n)`, prefix sums and growth diagnostics.
//! * [`power_series`]: truncated Taylor series with Hadamard products and division by `z - ζ`.
//! * [`norlund`]: the operators `N_n^α` as coefficient multipliers.
//! * [`dirichlet`]: local and weighted Dirichlet energies for point-mass weights, with a quadrature cross-check.
//! * [`operator_norms`]: the upper-triangular matrices `T_n^α`, their spectral norms and analytic bounds.
//! * [`experiments`]: the experiment runner behind the `summability` binary.

pub mod dirichlet;
pub mod error;
pub mod experiments;
pub mod norlund;
pub mod operator_norms;
pub mod power_series;
pub mod sequences;

pub use dirichlet::{PointMassWeight, QuadratureSpec};
pub use error::{Error, Result};
pub use experiments::{CheckOutcome, Command, ExperimentConfig, ExperimentResult, NGrid, OutputFormat};
pub use norlund::NorlundOperator;
pub use operator_norms::NorlundMatrix;
pub use power_series::CoefficientSeries;
pub use sequences::{DeterminingSequence, GrowthReport, Monotonicity, SequenceKind};
