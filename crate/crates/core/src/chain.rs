//! Cyclic dressing chains of period `n = m + 1`.
//!
//! The chain couples `n` functions through
//!
//! ```text
//! f_i' + f_{i+1}' = f_i^2 - f_{i+1}^2 + 2(ε_i - ε_{i+1}),   i = 1..n (cyclic)
//! ```
//!
//! with the closure `ε_{n+1} = ε_1 - λ`. Internally everything is 0-based:
//!
//! | code        | math                 |
//! |-------------|----------------------|
//! | `f[i]`      | `f_{i+1}`            |
//! | `eps[i]`    | `ε_{i+1}`            |
//! | `alpha[i]`  | `α_i = 2(ε_{i+1} - ε_{i+2})` |
//! | equation `i`| pairs `f[i]`, `f[(i+1) % n]`, constant `alpha[i]` |
//!
//! so the constant term of equation `i` is exactly `alpha[i]`.

use num_traits::Zero;
use thiserror::Error;

use crate::ratfun::{BigRat, RatFun};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("chain period must be at least 1")]
    EmptyChain,
    #[error("lambda must be nonzero for period {0} >= 2")]
    ZeroLambda(usize),
    #[error("expected {expected} components, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("alpha components sum to {sum}, expected 2*lambda = {expected}")]
    AlphaSum {
        sum: Box<BigRat>,
        expected: Box<BigRat>,
    },
    #[error("(sum f)' is not constant: {0}")]
    SumRuleNotConstant(RatFun),
}

/// Period, `λ`, factorization energies and the integration constant `c0`.
///
/// Only `ε_1..ε_n` are stored; the closure value `ε_{n+1}` is always derived.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainParams {
    lambda: BigRat,
    eps: Vec<BigRat>,
    c0: BigRat,
}

impl ChainParams {
    pub fn new(lambda: BigRat, eps: Vec<BigRat>, c0: BigRat) -> Result<Self, ChainError> {
        if eps.is_empty() {
            return Err(ChainError::EmptyChain);
        }
        if eps.len() >= 2 && lambda.is_zero() {
            return Err(ChainError::ZeroLambda(eps.len()));
        }
        Ok(Self { lambda, eps, c0 })
    }

    /// Rebuilds `ε` from `α`, pinning `ε_1`.
    pub fn from_alpha(alpha: &AlphaVector, eps1: BigRat, c0: BigRat) -> Result<Self, ChainError> {
        let a = alpha.values();
        let two = BigRat::from_integer(2.into());
        let mut eps = Vec::with_capacity(a.len());
        eps.push(eps1);
        for ai in &a[..a.len() - 1] {
            let next = eps.last().unwrap() - ai / &two;
            eps.push(next);
        }
        Self::new(alpha.lambda().clone(), eps, c0)
    }

    pub fn n(&self) -> usize {
        self.eps.len()
    }

    /// Degree of the algebra, `n - 1`.
    pub fn m(&self) -> usize {
        self.eps.len() - 1
    }

    pub fn lambda(&self) -> &BigRat {
        &self.lambda
    }

    pub fn eps(&self) -> &[BigRat] {
        &self.eps
    }

    pub fn c0(&self) -> &BigRat {
        &self.c0
    }

    /// `ε_{n+1} = ε_1 - λ`
    pub fn eps_closure(&self) -> BigRat {
        &self.eps[0] - &self.lambda
    }

    /// `eps[i]` for `i < n`, the closure value for `i == n`.
    pub fn eps_ext(&self, i: usize) -> BigRat {
        if i == self.n() {
            self.eps_closure()
        } else {
            self.eps[i].clone()
        }
    }

    pub fn alpha(&self) -> AlphaVector {
        alpha_from_eps(self)
    }
}

/// `α_i = 2(ε_{i+1} - ε_{i+2})` (1-based ε), with closure.
pub fn alpha_from_eps(params: &ChainParams) -> AlphaVector {
    let two = BigRat::from_integer(2.into());
    let n = params.n();
    let alpha = (0..n)
        .map(|i| &two * (params.eps_ext(i) - params.eps_ext(i + 1)))
        .collect();
    AlphaVector {
        alpha,
        lambda: params.lambda.clone(),
    }
}

/// Parameter vector `(α_0..α_m)` with `Σα = 2λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlphaVector {
    alpha: Vec<BigRat>,
    lambda: BigRat,
}

impl AlphaVector {
    pub fn new(alpha: Vec<BigRat>, lambda: BigRat) -> Result<Self, ChainError> {
        if alpha.is_empty() {
            return Err(ChainError::EmptyChain);
        }
        let sum: BigRat = alpha.iter().sum();
        let expected = &lambda * BigRat::from_integer(2.into());
        if sum != expected {
            return Err(ChainError::AlphaSum {
                sum: Box::new(sum),
                expected: Box::new(expected),
            });
        }
        Ok(Self { alpha, lambda })
    }

    /// Takes `λ = Σα / 2`.
    pub fn from_components(alpha: Vec<BigRat>) -> Result<Self, ChainError> {
        let lambda = alpha.iter().sum::<BigRat>() / BigRat::from_integer(2.into());
        Self::new(alpha, lambda)
    }

    /// Callers must preserve `Σα = 2λ`; checked in debug builds.
    pub(crate) fn new_unchecked(alpha: Vec<BigRat>, lambda: BigRat) -> Self {
        debug_assert_eq!(
            alpha.iter().sum::<BigRat>(),
            &lambda * BigRat::from_integer(2.into())
        );
        Self { alpha, lambda }
    }

    pub fn values(&self) -> &[BigRat] {
        &self.alpha
    }

    pub fn lambda(&self) -> &BigRat {
        &self.lambda
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn sum(&self) -> BigRat {
        self.alpha.iter().sum()
    }
}

/// A tuple `(f_1..f_n)` of exact rational functions together with its
/// parameters. Nothing forces it to solve the chain; see [`ChainSolution::is_solution`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainSolution {
    params: ChainParams,
    f: Vec<RatFun>,
}

impl ChainSolution {
    pub fn new(params: ChainParams, f: Vec<RatFun>) -> Result<Self, ChainError> {
        if f.len() != params.n() {
            return Err(ChainError::LengthMismatch {
                expected: params.n(),
                got: f.len(),
            });
        }
        Ok(Self { params, f })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn f(&self) -> &[RatFun] {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn alpha(&self) -> AlphaVector {
        self.params.alpha()
    }

    pub fn into_parts(self) -> (ChainParams, Vec<RatFun>) {
        (self.params, self.f)
    }

    pub fn residuals(&self) -> Vec<RatFun> {
        chain_residuals(&self.f, self.alpha().values())
    }

    /// All residuals are the zero rational function.
    pub fn is_solution(&self) -> bool {
        self.residuals().iter().all(RatFun::is_zero)
    }
}

/// `r_i = f_i' + f_{i+1}' - (f_i^2 - f_{i+1}^2 + α_i)`, cyclic.
///
/// For `n = 1` the single equation pairs `f_0` with itself and reads
/// `2 f_0' - 2λ`.
pub fn chain_residuals(f: &[RatFun], alpha: &[BigRat]) -> Vec<RatFun> {
    let n = f.len();
    assert_eq!(n, alpha.len(), "one alpha per chain equation");
    let df: Vec<RatFun> = f.iter().map(RatFun::derivative).collect();
    let sq: Vec<RatFun> = f.iter().map(|fi| fi * fi).collect();
    (0..n)
        .map(|i| {
            let k = (i + 1) % n;
            let lhs = &df[i] + &df[k];
            let rhs = &(&sq[i] - &sq[k]) + &RatFun::constant(alpha[i].clone());
            &lhs - &rhs
        })
        .collect()
}

/// `f_i = (λx + c0)/n` with `ε_i = -(i-1)λ/n`, so that every `α_i = 2λ/n`.
pub fn symmetric_seed(n: usize, lambda: BigRat, c0: BigRat) -> Result<ChainSolution, ChainError> {
    if n == 0 {
        return Err(ChainError::EmptyChain);
    }
    let nn = BigRat::from_integer(n.into());
    let step = &lambda / &nn;
    let eps = (0..n)
        .map(|i| -(&step * BigRat::from_integer(i.into())))
        .collect();
    let fi = RatFun::linear(step.clone(), &c0 / &nn);
    let params = ChainParams::new(lambda, eps, c0)?;
    ChainSolution::new(params, vec![fi; n])
}

/// Normalization of the potential recovered from `f_1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PotentialForm {
    /// `V = (f1' + f1^2)/2 + ε_1`, what `H = Q⁻Q⁺ + ε_1` with
    /// `Q^± = (±d/dx - f)/√2` gives.
    #[default]
    Factorized,
    /// `V = f1' + f1^2 + ε_1`, without the factor one half.
    Printed,
}

pub fn potential_from_f1(f1: &RatFun, eps1: &BigRat, form: PotentialForm) -> RatFun {
    let core = &f1.derivative() + &(f1 * f1);
    let scaled = match form {
        PotentialForm::Factorized => core.scale(&BigRat::new(1.into(), 2.into())),
        PotentialForm::Printed => core,
    };
    &scaled + &RatFun::constant(eps1.clone())
}

/// `(Σ f_i)'`, which equals `λ` for any exact solution.
pub fn sum_rule_check(sol: &ChainSolution) -> Result<BigRat, ChainError> {
    let total = sol.f().iter().fold(RatFun::zero(), |acc, fi| &acc + fi);
    let d = total.derivative();
    d.as_constant().ok_or(ChainError::SumRuleNotConstant(d))
}

/// `c0` read off a tuple: `Σ f_i - λx`, if that is a constant.
pub fn integration_constant(f: &[RatFun], lambda: &BigRat) -> Option<BigRat> {
    let total = f.iter().fold(RatFun::zero(), |acc, fi| &acc + fi);
    (&total - &RatFun::linear(lambda.clone(), BigRat::zero())).as_constant()
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}
