//! Special functions and quadrature rules used by every basis.
//!
//! All functions here are pure; none of them allocate shared state.

mod hermite;
mod quadrature;
mod spherical;

pub use hermite::{
    hermite_function, hermite_functions, hermite_polynomial, MAX_HERMITE_ORDER,
};
pub use quadrature::{gauss_hermite, gauss_legendre, periodic_trapezoid, Domain, QuadratureRule};
pub use spherical::{normalized_legendre, spherical_harmonic, theta_lm};
