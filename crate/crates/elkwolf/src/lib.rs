//! Numerical laboratory for a three-species predator-prey system in which
//! part of the prey population lives inside a refuge.
//!
//! The state is `(E, N, P)`: prey density inside the refuge, prey density
//! outside it, and predator density. The vector field is
//!
//! ```text
//! E' = alpha E (1 - E/K) - gamma E P - q psi E
//! N' = beta N + mu E - xi N P
//! P' = theta1 gamma E P + theta2 xi N P - eta P
//! ```
//!
//! The crate provides, as pure library functions:
//!
//! - closed-form equilibria with existence windows ([`equilibria`]),
//! - characteristic-polynomial and Routh-Hurwitz local stability, algebraic
//!   stability conditions, and a Lyapunov-function certificate ([`stability`]),
//! - adaptive Dormand-Prince 5(4) integration with dense output and
//!   attractor-feature extraction ([`integrator`]),
//! - Hopf bifurcation location, transversality, and the first Lyapunov
//!   coefficient with the full normal-form coefficient set ([`hopf`]),
//! - Latin hypercube sampling and partial rank correlation sensitivity
//!   analysis ([`sensitivity`]),
//! - biparametric stability-region grids and one-parameter bifurcation
//!   diagrams ([`scan`]),
//! - a self-test battery of numbered regression criteria ([`selftest`]).
//!
//! The numerical core is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the aliases at the crate root fix `f64` for the common
//! case. Statistics, scans, and the self tests are `f64` only.

pub mod equilibria;
pub mod error;
pub mod hopf;
pub mod integrator;
pub mod model;
pub mod scalar;
pub mod scan;
pub mod selftest;
pub mod sensitivity;
pub mod stability;

pub use error::{Error, Result};
pub use scalar::Real;

/// The eleven model parameters at `f64`.
pub type ParameterSet = model::ParameterSet<f64>;
/// Population triple `(E, N, P)` at `f64`.
pub type State = model::State<f64>;
/// Classified fixed point at `f64`.
pub type Equilibrium = equilibria::Equilibrium<f64>;
/// Characteristic polynomial coefficients at `f64`.
pub type CharPoly = stability::CharPoly<f64>;
/// Time-sampled trajectory at `f64`.
pub type Orbit = integrator::Orbit<f64>;
/// Located Hopf bifurcation at `f64`.
pub type HopfPoint = hopf::HopfPoint<f64>;
/// Normal-form coefficient set at `f64`.
pub type NormalFormReport = hopf::NormalFormReport<f64>;
