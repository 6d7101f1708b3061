//! Exact antiferromagnetic Ising computations on quasi-line graphs:
//! partition functions as integer cut polynomials, Glauber dynamics with
//! mixing diagnostics, per-vertex gadget reductions of cubic max-cut
//! instances, and the expander-driven slow-mixing bottleneck.
//!
//! Numeric work runs generically over a [`scalar::Weight`] scalar:
//! `BigRational` wherever exactness is required (interaction strengths
//! like 2^76 overflow floats), `f64`/`f32` where speed wins. Concrete
//! aliases for both flavors live at the crate root.

pub mod chain_analysis;
pub mod decode;
pub mod error;
pub mod expander;
pub mod field;
pub mod gadget;
pub mod generate;
pub mod glauber;
pub mod graph;
pub mod hardcore;
pub mod maxcut;
pub mod poly;
pub mod recognition;
pub mod rng;
pub mod scalar;
pub mod spin;
pub mod torpid;
pub mod zsigma;

pub use error::{Error, Result};
pub use graph::{Graph, Multigraph};
pub use poly::CountPolynomial;
pub use scalar::{MuSpec, Rational, Weight, WeightValue};
pub use spin::SpinConfig;

/// Transition matrix in exact rational arithmetic.
pub type ExactTransitionMatrix = chain_analysis::TransitionMatrix<Rational>;
/// Transition matrix in double precision.
pub type FloatTransitionMatrix = chain_analysis::TransitionMatrix<f64>;
