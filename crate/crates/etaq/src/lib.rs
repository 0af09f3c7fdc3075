//! Exact computation with eta-quotients on Gamma0(N).
//!
//! The modules build on each other bottom-up: [`ntheory`] and [`cyclo`] supply
//! arithmetic, [`gamma0`] and [`etaquot`] the curve and the quotient objects,
//! and the remaining modules the dimension formula, character classification,
//! q-expansions, Hecke operators, the admissible-quotient search and the
//! level-4 Eisenstein identities.

pub mod charclass;
pub mod cli;
pub mod cyclo;
pub mod dims;
pub mod eisenstein;
pub mod error;
pub mod etaquot;
pub mod gamma0;
pub mod hecke;
pub mod ntheory;
pub mod qseries;
pub mod search;

pub use error::{Error, Result};
