//! Exact and numeric tools for periodic dressing chains: rational-function
//! arithmetic, the Bäcklund action of the extended affine Weyl group,
//! closed-form solutions, SUSY partners of the harmonic oscillator and
//! forward integration.

pub mod chain;
pub mod closed_form;
pub mod io;
pub mod numeric;
pub mod parse;
pub mod ratfun;
pub mod susy;
pub mod weyl;

pub use chain::{symmetric_seed, ChainError, ChainParams, ChainSolution};
pub use numeric::Grid;
pub use parse::{format_rational, parse_decimal, parse_ratfun, parse_rational, ParseError};
pub use ratfun::{BigRat, Poly, RatFun, RatFunError};
pub use susy::{SeedKind, SeedSpec};
pub use weyl::{Generator, WeylError, WeylWord};
