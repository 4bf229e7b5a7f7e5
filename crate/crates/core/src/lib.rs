//! Numerical verification of uncertainty relations for the angular momentum
//! `L_z` and azimuthal angle `φ` pair.
//!
//! Three state families are supported: states on the circle `φ ∈ [0, 2π)`
//! expanded in Fourier modes, torsion-pendulum states on the whole line
//! expanded in Hermite functions, and fixed-`l` states on the sphere. Every
//! mean, deviation and inner product is computed two ways: spectrally (exact
//! matrix elements in the basis) and by the brute-force grid [`oracle`].
//!
//! The [`relations`] module checks the Cauchy–Schwarz bound, the
//! Robertson–Schrödinger bound, the adjointness mismatch that decides
//! whether the latter is entitled to hold, and several derived relations.

pub mod algebra;
pub mod error;
pub mod operators;
pub mod oracle;
pub mod relations;
pub mod sampling;
pub mod scenario;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operators::{Evaluator, Observable};
pub use relations::{MismatchMatrix, RelationReport};
pub use states::{OscillatorState, PeriodicState, SphereState, State};

/// Reduced Planck constant in natural units.
pub const DEFAULT_HBAR: f64 = 1.0;
