//! Polynomials in the energy variable attached to the ladder operators of a
//! `k`-step partner, and the equally spaced ladders they produce.

use num_traits::One;
use serde::Serialize;

use crate::parse::format_rational;
use crate::ratfun::{BigRat, Poly};

/// `N(E)` and `P(E) = N(E + 1) - N(E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderPolynomials {
    pub n: Poly,
    pub p: Poly,
}

impl LadderPolynomials {
    fn from_n(n: Poly) -> Self {
        let p = &n.shift(&BigRat::one()) - &n;
        Self { n, p }
    }
}

fn linear_factor(root: &BigRat) -> Poly {
    Poly::linear(BigRat::one(), -root.clone())
}

/// `N(E) = (E - 1/2) ∏_j (E - ε_j)(E - ε_j - 1)`.
pub fn ladder_polynomial(eps: &[BigRat]) -> LadderPolynomials {
    let half = BigRat::new(1.into(), 2.into());
    let n = eps.iter().fold(linear_factor(&half), |acc, e| {
        &(&acc * &linear_factor(e)) * &linear_factor(&(e + BigRat::one()))
    });
    LadderPolynomials::from_n(n)
}

/// `N(E) = ∏_i (E - 𝓔_i)` for arbitrary roots.
pub fn ladder_polynomial_generic(roots: &[BigRat]) -> LadderPolynomials {
    let n = roots
        .iter()
        .fold(Poly::one(), |acc, r| &acc * &linear_factor(r));
    LadderPolynomials::from_n(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ladder {
    #[serde(serialize_with = "ser_rat")]
    pub base: BigRat,
    #[serde(serialize_with = "ser_rats")]
    pub levels: Vec<BigRat>,
    /// Another ladder starts at the same energy.
    pub duplicate: bool,
}

fn ser_rat<S: serde::Serializer>(r: &BigRat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_rats<S: serde::Serializer>(v: &[BigRat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// Ladder `i` is `𝓔_i, 𝓔_i + 1, ..., 𝓔_i + count - 1`.
pub fn ladder_spectrum(extremal: &[BigRat], count: usize) -> Vec<Ladder> {
    extremal
        .iter()
        .enumerate()
        .map(|(i, base)| {
            let mut levels = Vec::with_capacity(count);
            let mut e = base.clone();
            for _ in 0..count {
                levels.push(e.clone());
                e += BigRat::one();
            }
            let duplicate = extremal
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && other == base);
            Ladder {
                base: base.clone(),
                levels,
                duplicate,
            }
        })
        .collect()
}
