//! Bäcklund transformations of the dressing chain as an action of the
//! extended affine Weyl group `W̃(A_m^(1)) = ⟨s_0, …, s_m, π⟩`.
//!
//! On a state `(f, α)` of period `n = m + 1`:
//!
//! ```text
//! s_j: f_j     -> f_j     + α_j / (f_j + f_{j+1})
//!      f_{j+1} -> f_{j+1} - α_j / (f_j + f_{j+1})
//!      α_k     -> α_k - a_{kj} α_j          (a = Cartan matrix of A_m^(1))
//! π:   f_j -> f_{j+1},  α_j -> α_{j+1}
//! ```
//!
//! Words act left to right: the word `[π, s_0]` applies `π` first.

mod orbit;
mod relations;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::chain::{AlphaVector, ChainError, ChainParams, ChainSolution};
use crate::ratfun::{BigRat, RatFun};

pub use orbit::{orbit, orbit_from_seed, Orbit, OrbitEdge, OrbitMember};
pub use relations::{verify_relations, CheckStatus, RelationCheck, RelationReport, Witness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeylError {
    #[error("the Weyl group action needs period >= 2, got {0}")]
    PeriodTooSmall(usize),
    #[error("generator s{index} out of range for m = {m}")]
    GeneratorOutOfRange { index: usize, m: usize },
    #[error("f_{j} + f_{next} vanishes identically; s{j} undefined after prefix [{prefix}]", next = .j + 1)]
    VanishingDenominator { j: usize, prefix: WeylWord },
    #[error("unknown generator {0:?}")]
    BadGenerator(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    S(usize),
    Pi,
    PiInv,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::S(j) => write!(f, "s{j}"),
            Generator::Pi => write!(f, "pi"),
            Generator::PiInv => write!(f, "pi^-1"),
        }
    }
}

impl FromStr for Generator {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "pi" | "π" => Ok(Generator::Pi),
            "pi^-1" | "pi_inv" | "π⁻¹" => Ok(Generator::PiInv),
            t => t
                .strip_prefix('s')
                .and_then(|d| d.parse().ok())
                .map(Generator::S)
                .ok_or_else(|| WeylError::BadGenerator(s.to_string())),
        }
    }
}

/// A free word in the generators; relations are verified, never assumed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylWord(pub Vec<Generator>);

impl WeylWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn gens(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    pub fn then(&self, g: Generator) -> Self {
        let mut w = self.clone();
        w.push(g);
        w
    }

    /// `w` repeated `k` times.
    pub fn repeat(&self, k: usize) -> Self {
        Self(self.0.repeat(k))
    }
}

impl From<Vec<Generator>> for WeylWord {
    fn from(v: Vec<Generator>) -> Self {
        Self(v)
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for WeylWord {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(|c: char| c.is_whitespace() || c == ',' || c == '.')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(WeylWord)
    }
}

/// Generalized Cartan matrix of `A_m^(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    m: usize,
}

impl CartanMatrix {
    pub fn new(m: usize) -> Result<Self, WeylError> {
        if m == 0 {
            return Err(WeylError::PeriodTooSmall(1));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entry(&self, k: usize, j: usize) -> i32 {
        cartan_entry(self.m + 1, k, j)
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        let n = self.m + 1;
        (0..n)
            .map(|k| (0..n).map(|j| self.entry(k, j)).collect())
            .collect()
    }

    /// Order of `s_i s_j` from `a_ij a_ji`: 2 when they commute, 3 for a
    /// simple bond, `None` (infinite) for the double bond of `A_1^(1)`.
    pub fn relation_order(&self, i: usize, j: usize) -> Option<u32> {
        match self.entry(i, j) * self.entry(j, i) {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }
}

fn cartan_entry(n: usize, k: usize, j: usize) -> i32 {
    if k == j {
        2
    } else if n == 2 {
        -2
    } else if (k + 1) % n == j || (j + 1) % n == k {
        -1
    } else {
        0
    }
}

/// The object the group acts on: `(f_0..f_m)` and `(α_0..α_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainState {
    pub f: Vec<RatFun>,
    pub alpha: AlphaVector,
}

impl ChainState {
    pub fn new(f: Vec<RatFun>, alpha: AlphaVector) -> Result<Self, WeylError> {
        if f.len() != alpha.len() {
            return Err(ChainError::LengthMismatch {
                expected: alpha.len(),
                got: f.len(),
            }
            .into());
        }
        if f.len() < 2 {
            return Err(WeylError::PeriodTooSmall(f.len()));
        }
        Ok(Self { f, alpha })
    }

    pub fn from_solution(sol: &ChainSolution) -> Result<Self, WeylError> {
        Self::new(sol.f().to_vec(), sol.alpha())
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// Back to a [`ChainSolution`], rebuilding `ε` from `α` with `ε_1` pinned.
    pub fn to_solution(&self, eps1: BigRat, c0: BigRat) -> Result<ChainSolution, WeylError> {
        let params = ChainParams::from_alpha(&self.alpha, eps1, c0)?;
        Ok(ChainSolution::new(params, self.f.clone())?)
    }
}

/// Reflection `s_j`. A zero `α_j` leaves the state unchanged.
pub fn apply_s(j: usize, state: &ChainState) -> Result<ChainState, WeylError> {
    let n = state.n();
    if j >= n {
        return Err(WeylError::GeneratorOutOfRange { index: j, m: n - 1 });
    }
    let a = state.alpha.values();
    let aj = &a[j];
    if aj.is_zero() {
        return Ok(state.clone());
    }
    let k = (j + 1) % n;
    let denom = &state.f[j] + &state.f[k];
    if denom.is_zero() {
        return Err(WeylError::VanishingDenominator {
            j,
            prefix: WeylWord::empty(),
        });
    }
    let shift = RatFun::constant(aj.clone())
        .checked_div(&denom)
        .expect("nonzero denominator");
    let mut f = state.f.clone();
    f[j] = &f[j] + &shift;
    f[k] = &f[k] - &shift;
    let alpha = (0..n)
        .map(|i| &a[i] - aj * BigRat::from_integer(cartan_entry(n, i, j).into()))
        .collect();
    Ok(ChainState {
        f,
        alpha: AlphaVector::new_unchecked(alpha, state.alpha.lambda().clone()),
    })
}

/// Rotation `π`: index `j` receives what was at `j + 1`.
pub fn apply_pi(state: &ChainState) -> ChainState {
    rotate(state, 1)
}

pub fn apply_pi_inv(state: &ChainState) -> ChainState {
    rotate(state, state.n() - 1)
}

fn rotate(state: &ChainState, by: usize) -> ChainState {
    let mut f = state.f.clone();
    f.rotate_left(by);
    let mut alpha = state.alpha.values().to_vec();
    alpha.rotate_left(by);
    ChainState {
        f,
        alpha: AlphaVector::new_unchecked(alpha, state.alpha.lambda().clone()),
    }
}

pub fn apply_generator(g: Generator, state: &ChainState) -> Result<ChainState, WeylError> {
    match g {
        Generator::S(j) => apply_s(j, state),
        Generator::Pi => Ok(apply_pi(state)),
        Generator::PiInv => Ok(apply_pi_inv(state)),
    }
}

/// Applies `w` left to right. A vanishing denominator reports the prefix
/// that was applied successfully before the failing generator.
pub fn apply_word(w: &WeylWord, state: &ChainState) -> Result<ChainState, WeylError> {
    let mut cur = state.clone();
    for (i, &g) in w.gens().iter().enumerate() {
        cur = apply_generator(g, &cur).map_err(|e| match e {
            WeylError::VanishingDenominator { j, .. } => WeylError::VanishingDenominator {
                j,
                prefix: WeylWord(w.gens()[..i].to_vec()),
            },
            other => other,
        })?;
    }
    Ok(cur)
}
