//! Walsh-Hadamard spectral toolkit.
//!
//! Walsh functions and orderings ([`walsh`]), classical transforms
//! ([`transform`]), a small statevector simulator ([`quantum`]) driving a
//! sign-safe hybrid transform ([`hybrid`]), Walsh operational matrices
//! ([`calculus`]), a Picard ODE solver ([`ode`]) and an expression language
//! for right-hand sides ([`expr`]).

pub mod calculus;
pub mod error;
pub mod expr;
pub mod hybrid;
pub mod ode;
pub mod quantum;
pub mod transform;
pub mod walsh;

pub use calculus::{
    differentiation_matrix, integrate_sampled, integrate_spectrum, integration_matrix,
    IntegrationBackend, MatrixKind, OperationalMatrix,
};
pub use error::{Error, Result};
pub use expr::{EvalError, Expr, ParseError};
pub use hybrid::{classical_side_opcount, hybrid_wht, HybridConfig, HybridTrace, MeasurementMode};
pub use ode::{
    analytic_reference, builtin_problem, picard_solve, IVProblem, SolutionTrace, SolverBackend,
    SolverConfig,
};
pub use quantum::{MeasurementResult, StateVector};
pub use transform::{fwht, iwht, wht_naive, OpCount};
pub use walsh::{SampledFunction, SpectralVector, WalshOrdering};
