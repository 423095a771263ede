//! Numerical toolkit for the thinned Pearcey process: Pearcey integrals,
//! the Pearcey kernel, Fredholm determinants of its restriction to a
//! symmetric interval, the associated Hamiltonian system, closed-form
//! asymptotics and the confluent hypergeometric parametrix.

pub mod acceptance;
pub mod asymptotics;
pub mod chf;
pub mod error;
pub mod fredholm;
pub mod hamiltonian;
pub mod kernel;
pub mod linalg;
pub mod ode;
pub mod pearcey_fn;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use pearcey_fn::{ModelParams, PearceyValues};
