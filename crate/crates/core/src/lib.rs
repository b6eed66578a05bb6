//! Exact rational verification toolkit for square-lattice Ising two-point
//! correlations on the unphysical locus nu = -k.
//!
//! The crate computes the correlation series C(M,N) by three independent
//! routes (row/diagonal Toeplitz determinants, Forrester-Witte-style
//! determinants, and the quadratic coupled recursion), checks the Painleve VI
//! sigma-form ODE families satisfied by their logarithmic derivatives,
//! recovers Okamoto parameters through the Cosgrove classification, and
//! verifies the boundary-condition branch structure of the analytic solutions
//! at t = 0 -- all in exact `BigRational` arithmetic with zero tolerance.

pub mod boundary;
pub mod corr;
pub mod det;
pub mod painleve;
pub mod series;
pub mod special;
pub mod suite;

pub use series::{Rat, SeriesError, SeriesK, Var};
