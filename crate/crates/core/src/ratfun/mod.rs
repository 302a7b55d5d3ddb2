//! Exact univariate rational functions over arbitrary-precision rationals.
//!
//! A [`RatFun`] is always stored in lowest terms with a monic denominator,
//! so two rational functions are equal exactly when their representations
//! are structurally equal. Every other module leans on this: exact residual
//! checks are `is_zero()` tests and orbit deduplication hashes the
//! representation directly.

mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use num_rational::BigRational as BigRat;
pub use poly::Poly;

/// Nearest `f64`, or NaN when out of range.
pub fn to_f64(r: &BigRat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatFunError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole at x = {0}")]
    Pole(BigRat),
    #[error("pole at x = {0}")]
    PoleFloat(f64),
}

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Builds and reduces `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    /// Makes the denominator monic; the caller guarantees coprimality.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Self::normalized(num, den)
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRat::from_integer(c.into()))
    }

    /// `a*x + b`
    pub fn linear(a: BigRat, b: BigRat) -> Self {
        Self::from_poly(Poly::linear(a, b))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this is a constant function.
    pub fn as_constant(&self) -> Option<BigRat> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn recip(&self) -> Result<Self, RatFunError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFun) -> Result<Self, RatFunError> {
        if rhs.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        // coprime stays coprime under powers
        Self {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(num, &self.den * &self.den)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &BigRat) -> Result<BigRat, RatFunError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(RatFunError::Pole(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Correctly rounded evaluation at a float point: the float is converted
    /// exactly to a rational, evaluated exactly, then rounded once.
    pub fn eval_f64(&self, x: f64) -> Result<f64, RatFunError> {
        let xr = BigRat::from_float(x).ok_or(RatFunError::PoleFloat(x))?;
        match self.eval(&xr) {
            Ok(v) => Ok(v.to_f64().unwrap_or(f64::NAN)),
            Err(_) => Err(RatFunError::PoleFloat(x)),
        }
    }

    /// Fast float evaluator with rounded coefficients, for dense grids.
    pub fn to_float(&self) -> FloatRatFun {
        let conv = |p: &Poly| {
            p.coeffs()
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect()
        };
        FloatRatFun {
            num: conv(&self.num),
            den: conv(&self.den),
        }
    }
}

/// Rational function with `f64` coefficients, evaluated by Horner's rule.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatRatFun {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl FloatRatFun {
    /// Value at `x`, or `None` where the denominator vanishes.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let horner = |c: &[f64]| c.iter().rev().fold(0.0, |acc, &a| acc * x + a);
        let d = horner(&self.den);
        (d != 0.0).then(|| horner(&self.num) / d)
    }
}

impl Default for RatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<BigRat> for RatFun {
    fn from(c: BigRat) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFun::from_poly(&self.num + &rhs.num);
            }
            return RatFun::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        // only factors of gcd(d1, d2) can cancel against the new numerator
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return RatFun::zero();
            }
            return RatFun::normalized(num, &self.den * &rhs.den);
        }
        let d1 = self.den.exact_div(&g);
        let d2 = rhs.den.exact_div(&g);
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return RatFun::zero();
        }
        let h = num.gcd(&g);
        let den = &(&d1 * &d2) * &g.exact_div(&h);
        RatFun::normalized(num.exact_div(&h), den)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        // cross-cancel so the product is already coprime
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1);
        let d2 = rhs.den.exact_div(&g1);
        let n2 = rhs.num.exact_div(&g2);
        let d1 = self.den.exact_div(&g2);
        RatFun::normalized(&n1 * &n2, &d1 * &d2)
    }
}

macro_rules! forward_owned {
    ($($tr:ident::$m:ident),*) => {$(
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfun;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn common_denominator() {
        let x = RatFun::x();
        let inv = x.recip().unwrap();
        assert_eq!(&x + &inv, rf("(x^2+1)/x"));
    }

    #[test]
    fn cancellation_in_product() {
        assert_eq!(&rf("x/(x+1)") * &rf("x+1"), RatFun::x());
    }

    #[test]
    fn gcd_reduction_on_construction() {
        let r = RatFun::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(r, rf("x+1"));
        assert!(r.is_polynomial());
    }

    #[test]
    fn denominator_is_monic() {
        let r = RatFun::new(Poly::from_ints(&[1]), Poly::from_ints(&[2, 4])).unwrap();
        assert_eq!(r.den(), &Poly::from_coeffs(vec![q(1, 2), q(1, 1)]));
        assert_eq!(r.num(), &Poly::constant(q(1, 4)));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            RatFun::x().checked_div(&RatFun::zero()),
            Err(RatFunError::DivisionByZero)
        );
        assert!(RatFun::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn derivatives() {
        assert_eq!(rf("x^2").derivative(), rf("2x"));
        assert_eq!(rf("1/x").derivative(), rf("-1/x^2"));
        assert_eq!(rf("x/3 + 1/x").derivative(), rf("1/3 - 1/x^2"));
    }

    #[test]
    fn evaluation() {
        assert_eq!(rf("(x^2+1)/x").eval(&q(2, 1)), Ok(q(5, 2)));
        assert_eq!(rf("1/x").eval(&q(0, 1)), Err(RatFunError::Pole(q(0, 1))));
        assert_eq!(rf("x/3").eval(&q(1, 1)), Ok(q(1, 3)));
        assert_eq!(rf("x/3").eval_f64(1.0), Ok(1.0 / 3.0));
        assert_eq!(rf("1/x").eval_f64(0.0), Err(RatFunError::PoleFloat(0.0)));
    }

    #[test]
    fn float_evaluator_matches_exact() {
        let r = rf("(x^3 - 2x + 1/7)/(x^2 + 3)");
        let fr = r.to_float();
        for &x in &[-2.5, -0.1, 0.0, 1.0, 3.75] {
            let exact = r.eval_f64(x).unwrap();
            assert!((fr.eval(x).unwrap() - exact).abs() < 1e-14 * exact.abs().max(1.0));
        }
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-6i64..=6, 1i64..=4), 0..=4)
            .prop_map(|cs| Poly::from_coeffs(cs.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    fn small_ratfun() -> impl Strategy<Value = RatFun> {
        (small_poly(), small_poly())
            .prop_filter_map("zero denominator", |(n, d)| RatFun::new(n, d).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in small_ratfun(), b in small_ratfun(), c in small_ratfun()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            if !b.is_zero() {
                prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
            }
        }

        #[test]
        fn leibniz_rule(a in small_ratfun(), b in small_ratfun()) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduction_is_idempotent(a in small_ratfun()) {
            let again = RatFun::new(a.num().clone(), a.den().clone()).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn derivative_matches_central_difference(a in small_ratfun(), x0 in 0.3f64..2.7) {
            let h = 1e-5;
            let (lo, hi, mid) = (a.eval_f64(x0 - h), a.eval_f64(x0 + h), a.derivative().eval_f64(x0));
            if let (Ok(lo), Ok(hi), Ok(mid)) = (lo, hi, mid) {
                // skip points close to a pole, where the difference is ill conditioned
                prop_assume!(lo.abs() < 1e3 && hi.abs() < 1e3 && mid.abs() < 1e3);
                prop_assert!(((hi - lo) / (2.0 * h) - mid).abs() < 1e-6 * mid.abs().max(1.0));
            }
        }
    }
}
