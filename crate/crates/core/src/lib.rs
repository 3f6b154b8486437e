//! Counting negative eigenvalues of a magnetic Schrödinger operator with
//! Aharonov–Bohm-type flux on a Neumann strip, and auditing closed-form
//! bounds for that count.

pub mod audit;
pub mod bounds;
pub mod error;
pub mod inequalities;
pub mod lattice;
pub mod modes;
pub mod potential;
pub mod quadrature;
pub mod runner;
pub mod solver;
pub mod sturm;
pub mod testfn;

pub use error::{Error, Result};
