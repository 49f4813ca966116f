//! Exact sparse multivariate polynomial arithmetic over Gaussian rationals.
//!
//! [`MPoly`] is the general workhorse (not necessarily homogeneous); it is
//! what resultant elimination, dehomogenization and chart changes produce.
//! [`HomoPoly`] wraps an `MPoly` with a verified homogeneity invariant and is
//! the type rational maps are built from.

mod float;
mod gaussian;
mod gaussint;
mod gcd;
mod homo;
mod modp;
mod mpoly;
mod parse;
mod resultant;
mod univariate;

pub use float::{FloatPoly, LogPolar};
pub use gaussian::GaussianRational;
pub use gcd::{gcd, gcd_many};
pub use homo::HomoPoly;
pub use modp::{certified_coprime_mod, certified_squarefree_mod};
pub use mpoly::MPoly;
pub use parse::parse;
pub use resultant::resultant_mpoly;
pub use univariate::{resultant_bivariate, resultant_scalar, RatPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("polynomial is not homogeneous; monomials of degrees {degrees:?}: {monomials:?}")]
    NotHomogeneous {
        degrees: Vec<u32>,
        monomials: Vec<String>,
    },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
}
