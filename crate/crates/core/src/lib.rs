//! Robust super-hedging on lattice jump models.
//!
//! The crate prices path-dependent options under the family of *all*
//! martingale measures supported on a finite state lattice, extracts an
//! explicit super-hedging strategy from the concave-envelope dynamic
//! programme, and ships two verifiers:
//!
//! * [`lp::verify_strong_duality`] — brute-force super-hedging duality on
//!   fully enumerated path trees (adapted-hedging LP vs. martingale-measure
//!   LP vs. DP price);
//! * [`decomp::verify_decomposition`] — the optional decomposition
//!   `V(t,X) = V(0,X) + ∫ H dX − C` with `C` non-decreasing path by path,
//!   under several mutually singular simulated law families with one common
//!   strategy `H`.
//!
//! Numeric kernels that benefit from a second arithmetic (the upper concave
//! envelope and the dense simplex) are generic over [`scalar::Scalar`],
//! instantiated with `f64` for production and `BigRational` as an exact
//! oracle.

pub mod calculus;
pub mod decomp;
pub mod envelope;
pub mod error;
pub mod lp;
pub mod measures;
pub mod model;
pub mod mollifier;
pub mod path;
pub mod payoff;
pub mod scalar;
pub mod simplex;
pub mod value;

pub use error::{Error, Result};

/// Working scalar for all model arithmetic.
pub type Real = f64;

/// Exact scalar used by the rational simplex oracle.
pub type Exact = num_rational::BigRational;

/// Concave envelope over the working scalar.
pub type RealEnvelope = envelope::UpperEnvelope<Real>;

/// Dense LP over the working scalar.
pub type RealLp = simplex::DenseLp<Real>;
