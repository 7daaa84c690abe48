//! Exact computations around the cuspidal group and Eisenstein ideals of
//! `J_0(N)` for square-free levels `N`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`]: big integers, rationals, integer matrices and their
//!   Hermite and Smith normal forms, lattices.
//! * [`divlattice`]: the divisor set of `N` with its total order, box
//!   addition, signs and the matrices `24Λ` and `A`.
//! * [`cuspgroup`]: orders of the cuspidal divisor classes `C_{M,N}`, by
//!   closed form and by an independent eta-quotient lattice.
//! * [`qseries`]: truncated q-expansions of weight 2 and 4 Eisenstein series,
//!   their Hecke action and residues.
//! * [`modsym`]: integral modular symbols, Hecke rings and Eisenstein ideals.
//! * [`verify`]: the verification suites shared by the CLI and tests.
//! * [`cli`]: the `eislab` command-line front end.

pub mod cli;
pub mod cuspgroup;
pub mod divlattice;
pub mod error;
pub mod exactnum;
pub mod modsym;
pub mod qseries;
pub mod serde_big;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::SquareFreeLevel;
