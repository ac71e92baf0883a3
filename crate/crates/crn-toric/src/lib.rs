//! Exact analysis of chemical reaction networks under mass-action and
//! generalized mass-action kinetics.
//!
//! The pipeline: parse a network ([`model`]), analyze its structure —
//! deficiency, reversibility, stoichiometric subspace ([`graph`]), extreme
//! currents of the flux cone ([`cone`]) — then search for or validate a
//! network translation ([`translation`]), build symbolic tree constants of
//! the translated reaction graph ([`trees`]), and produce a binomial
//! steady-state description with sign-condition checks and a numeric solver
//! ([`steady_state`]). Everything symbolic or structural is computed in
//! exact rational arithmetic ([`rat`], [`linalg`], [`lp`], [`symbolic`]);
//! floating point only enters the final numeric solve and verification.
//!
//! Reports in text and JSON form are assembled by [`report`]; the `crn-toric`
//! binary ([`cli`]) exposes the whole pipeline as subcommands. Runnable
//! walkthroughs live in the crate's `examples/` directory.

// Matrix kernels (elimination, pivoting, tableau updates) address rows and
// columns by computed index; iterator rewrites obscure the arithmetic.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod cone;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod rat;
pub mod report;
pub mod steady_state;
pub mod symbolic;
pub mod translation;
pub mod trees;

pub use error::{CrnError, Result};
