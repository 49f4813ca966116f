//! Computational experiments with rational self-maps of complex projective
//! spaces: exact degree sequences and intermediate degrees, indeterminacy
//! loci, backward-orbit sampling of equidistribution measures, Green-function
//! approximation, and Monte-Carlo proximity functions.
//!
//! The crate is organized around a small tower of modules:
//!
//! * [`polyalg`] — exact sparse homogeneous polynomial arithmetic over
//!   Gaussian rationals (GCD, resultants, parsing).
//! * [`projcore`] — projective points, Fubini–Study geometry and sampling.
//! * [`ratmap`] — rational maps as reduced homogeneous tuples; composition,
//!   iteration, degree sequences, indeterminacy loci.
//! * [`solve`] — numerical root solving: univariate Aberth iteration,
//!   bivariate systems by resultant elimination, fibers of maps.
//! * [`degrees`] — intermediate degrees, topological degree, inequality
//!   reports.
//! * [`measures`] — empirical measures from backward iteration, pushforwards,
//!   moment discrepancies, Green-function grids.
//! * [`proximity`] — Monte-Carlo proximity functions for hyperplanes and
//!   points, the Haar-mean identity, and the exceptional-set scanner.

pub mod degrees;
pub mod measures;
pub mod parallel;
pub mod polyalg;
pub mod projcore;
pub mod proximity;
pub mod ratmap;
pub mod rng;
pub mod solve;

pub use polyalg::{GaussianRational, HomoPoly};
pub use projcore::ProjPoint;
pub use ratmap::RationalMap;
