//! Exponential sums with Dirichlet coefficients of L-functions, at desk scale.
//!
//! The crate computes the objects these sums are built from and checks the
//! identities that connect them:
//!
//! * [`eigenforms`]: exact Ramanujan tau, normalized Hecke eigenvalues,
//!   Satake parameters, symmetric-square coefficients.
//! * [`characters`]: Dirichlet characters, Gauss sums, and the expansion of
//!   additive characters into multiplicative ones.
//! * [`amplitude`] and [`farey`]: the amplitude `f`, its frequency map
//!   `h = f' + x f''`, the local approximation `g`, and the Farey dissection
//!   of the `h`-image projected back to integer intervals.
//! * [`oscillatory`]: panel quadrature of `e(phi)`, exponential-integral
//!   bounds, truncated Perron integrals and partial summation.
//! * [`expsum`]: direct and Farey-regrouped exponential sums with bound tracking.
//! * [`piatetski`]: primes of the form `floor(n^c)` and their Hecke statistics.
//!
//! Floating-point analysis is generic over [`Real`] (`f32`/`f64`); the type
//! aliases below fix `f64`, which is what every verification battery uses.

// `!(x >= lo)` style guards are how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod arith;
pub mod characters;
pub mod ddouble;
pub mod eigenforms;
mod error;
pub mod expsum;
pub mod farey;
pub mod oscillatory;
pub mod piatetski;
mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{e, e_ratio, Real};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");










pub type Complex64 = num_complex::Complex<f64>;
pub type PowerAmplitude64 = amplitude::PowerAmplitude<f64>;
pub type LocalApproximation64 = amplitude::LocalApproximation<f64>;
pub type DirichletCharacter64 = characters::DirichletCharacter<f64>;
pub type GaussSum64 = characters::GaussSum<f64>;
pub type SatakeAngle64 = eigenforms::SatakeAngle<f64>;
pub type FareyArc64 = farey::FareyArc<f64>;
pub type ProjectedInterval64 = farey::ProjectedInterval<f64>;
pub type PolyLogPhase64 = oscillatory::PolyLogPhase<f64>;
