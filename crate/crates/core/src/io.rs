//! JSON documents for chain solutions and orbit members. Rationals are
//! written as `"p/q"` strings and rational functions as coefficient lists,
//! lowest degree first, so a round trip is exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainError, ChainParams, ChainSolution};
use crate::parse::{format_rational, parse_rational, ParseError};
use crate::ratfun::{BigRat, Poly, RatFun, RatFunError};
use crate::weyl::{Generator, OrbitMember, WeylError, WeylWord};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("bad rational: {0}")]
    Rational(#[from] ParseError),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunDoc {
    pub num_coeffs: Vec<String>,
    pub den_coeffs: Vec<String>,
}

fn poly_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn parse_rats(v: &[String]) -> Result<Vec<BigRat>, DocError> {
    v.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

impl From<&RatFun> for RatFunDoc {
    fn from(r: &RatFun) -> Self {
        Self {
            num_coeffs: poly_strings(r.num()),
            den_coeffs: poly_strings(r.den()),
        }
    }
}

impl RatFunDoc {
    pub fn to_ratfun(&self) -> Result<RatFun, DocError> {
        let num = Poly::from_coeffs(parse_rats(&self.num_coeffs)?);
        let den = Poly::from_coeffs(parse_rats(&self.den_coeffs)?);
        Ok(RatFun::new(num, den)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDocument {
    pub n: usize,
    pub lambda: String,
    pub eps: Vec<String>,
    pub c0: String,
    pub f: Vec<RatFunDoc>,
    /// Human-readable `f_i`, ignored on input.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f_text: Vec<String>,
}

impl From<&ChainSolution> for ChainDocument {
    fn from(sol: &ChainSolution) -> Self {
        let p = sol.params();
        Self {
            n: sol.n(),
            lambda: format_rational(p.lambda()),
            eps: p.eps().iter().map(format_rational).collect(),
            c0: format_rational(p.c0()),
            f: sol.f().iter().map(RatFunDoc::from).collect(),
            f_text: sol.f().iter().map(ToString::to_string).collect(),
        }
    }
}

impl ChainDocument {
    pub fn to_solution(&self) -> Result<ChainSolution, DocError> {
        let params = ChainParams::new(
            parse_rational(&self.lambda)?,
            parse_rats(&self.eps)?,
            parse_rational(&self.c0)?,
        )?;
        let f = self
            .f
            .iter()
            .map(RatFunDoc::to_ratfun)
            .collect::<Result<Vec<_>, _>>()?;
        let sol = ChainSolution::new(params, f)?;
        if sol.n() != self.n {
            return Err(ChainError::LengthMismatch {
                expected: self.n,
                got: sol.n(),
            }
            .into());
        }
        Ok(sol)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub index: usize,
    pub word: Vec<String>,
    pub alpha: Vec<String>,
    pub solution: ChainDocument,
}

impl OrbitRecord {
    pub fn new(index: usize, member: &OrbitMember) -> Self {
        Self {
            index,
            word: member.word.gens().iter().map(ToString::to_string).collect(),
            alpha: member
                .state
                .alpha
                .values()
                .iter()
                .map(format_rational)
                .collect(),
            solution: ChainDocument::from(&member.solution),
        }
    }

    pub fn word(&self) -> Result<WeylWord, DocError> {
        let gens = self
            .word
            .iter()
            .map(|g| g.parse::<Generator>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeylWord(gens))
    }

    pub fn to_solution(&self) -> Result<ChainSolution, DocError> {
        self.solution.to_solution()
    }
}
