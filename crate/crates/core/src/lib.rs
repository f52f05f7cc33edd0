//! Arbitrary-spin relativistic quantum mechanics lab.
//!
//! The crate builds the Clifford-Dirac generator families in dimension 2N,
//! spin operators for any spin up to 7/2, the operator bridges between the
//! canonical (RCQM), Foldy-Wouthuysen and covariant representations, and
//! evolves momentum-grid wave packets while checking conservation laws and
//! Poincaré-algebra closure.

pub mod cli;
pub mod clifford;
pub mod fields;
pub mod linalg;
pub mod observables;
pub mod report;
pub mod spin;
pub mod transforms;
