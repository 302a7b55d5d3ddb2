//! Closed-form chain solutions of low period, the `f_2, f_3` recovery for
//! period three, and residuals of the Painlevé IV and V equations.

use num_traits::Zero;
use thiserror::Error;

use crate::chain::{ChainError, ChainParams, ChainSolution};
use crate::ratfun::{to_f64, BigRat, RatFun, RatFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("expected a period-{expected} chain, got period {got}")]
    WrongPeriod { expected: usize, got: usize },
    #[error("lambda*x + c0 - f1 vanishes identically")]
    VanishingDenominator,
    #[error("g vanishes identically")]
    ZeroFunction,
    #[error("singular point of the equation at {0}")]
    Singular(f64),
    #[error("no pair of sample points gives a solvable fit")]
    NoFit,
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
}

fn half() -> BigRat {
    BigRat::new(1.into(), 2.into())
}

fn two() -> BigRat {
    BigRat::from_integer(2.into())
}

/// Period one: `f_1 = λx + c`.
pub fn pha0_solution(
    lambda: BigRat,
    c: BigRat,
    eps1: BigRat,
) -> Result<ChainSolution, ClosedFormError> {
    let f1 = RatFun::linear(lambda.clone(), c.clone());
    let params = ChainParams::new(lambda, vec![eps1], c)?;
    Ok(ChainSolution::new(params, vec![f1])?)
}

/// Period two: with `t = λx + c0` and `A = 2(ε_2 - ε_1) + λ`,
/// `f_1 = (t + A/t)/2` and `f_2 = (t - A/t)/2`.
pub fn pha1_solution(
    lambda: BigRat,
    c0: BigRat,
    eps1: BigRat,
    eps2: BigRat,
) -> Result<ChainSolution, ClosedFormError> {
    if lambda.is_zero() {
        return Err(ClosedFormError::ZeroLambda);
    }
    let t = RatFun::linear(lambda.clone(), c0.clone());
    let a = two() * (&eps2 - &eps1) + &lambda;
    let a_over_t = RatFun::constant(a).checked_div(&t)?;
    let f1 = (&t + &a_over_t).scale(&half());
    let f2 = (&t - &a_over_t).scale(&half());
    let params = ChainParams::new(lambda, vec![eps1, eps2], c0)?;
    Ok(ChainSolution::new(params, vec![f1, f2])?)
}

/// Period two in the uncorrected form `f_1 = t + A/t`, `f_2 = t - f_1`.
///
/// Kept for comparison only: it does not solve the period-two chain unless
/// `A = 0`.
pub fn pha1_solution_uncorrected(
    lambda: BigRat,
    c0: BigRat,
    eps1: BigRat,
    eps2: BigRat,
) -> Result<ChainSolution, ClosedFormError> {
    if lambda.is_zero() {
        return Err(ClosedFormError::ZeroLambda);
    }
    let t = RatFun::linear(lambda.clone(), c0.clone());
    let a = two() * (&eps2 - &eps1) + &lambda;
    let f1 = &t + &RatFun::constant(a).checked_div(&t)?;
    let f2 = &t - &f1;
    let params = ChainParams::new(lambda, vec![eps1, eps2], c0)?;
    Ok(ChainSolution::new(params, vec![f1, f2])?)
}

/// Recovers `(f_2, f_3)` of a period-three chain from `f_1`:
///
/// ```text
/// 2 f_2 = s - K/s,  2 f_3 = s + K/s,
/// s = λx + c0 - f_1,  K = f_1' + 2(ε_2 - ε_3) - λ
/// ```
pub fn pha2_f2f3_from_f1(
    f1: &RatFun,
    params: &ChainParams,
) -> Result<(RatFun, RatFun), ClosedFormError> {
    if params.n() != 3 {
        return Err(ClosedFormError::WrongPeriod {
            expected: 3,
            got: params.n(),
        });
    }
    let lambda = params.lambda();
    let s = &RatFun::linear(lambda.clone(), params.c0().clone()) - f1;
    if s.is_zero() {
        return Err(ClosedFormError::VanishingDenominator);
    }
    let eps = params.eps();
    let k = &f1.derivative() + &RatFun::constant(two() * (&eps[1] - &eps[2]) - lambda);
    let k_over_s = k.checked_div(&s)?;
    let f2 = (&s - &k_over_s).scale(&half());
    let f3 = (&s + &k_over_s).scale(&half());
    Ok((f2, f3))
}

/// Pointwise variant of [`pha2_f2f3_from_f1`] for sampled `f_1`.
pub fn pha2_f2f3_sampled(
    x: f64,
    f1: f64,
    df1: f64,
    lambda: f64,
    c0: f64,
    eps2_minus_eps3: f64,
) -> Result<(f64, f64), ClosedFormError> {
    let s = lambda * x + c0 - f1;
    if s == 0.0 {
        return Err(ClosedFormError::Singular(x));
    }
    let k = df1 + 2.0 * eps2_minus_eps3 - lambda;
    Ok((0.5 * (s - k / s), 0.5 * (s + k / s)))
}

/// Constants of `g'' = g'^2/(2g) + 3/2 g^3 + 4x g^2 + 2(x^2 - b0) g + b1/g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P4Params {
    pub b0: BigRat,
    pub b1: BigRat,
}

/// Painlevé IV residual as an exact rational function.
pub fn painleve4_residual(g: &RatFun, p: &P4Params) -> Result<RatFun, ClosedFormError> {
    if g.is_zero() {
        return Err(ClosedFormError::ZeroFunction);
    }
    let (rhs_free, lin, inv) = p4_parts(g)?;
    let rhs = &(&rhs_free - &lin.scale(&(two() * &p.b0))) + &inv.scale(&p.b1);
    Ok(&g.derivative().derivative() - &rhs)
}

/// Splits the right-hand side into the parameter-free part, the
/// coefficient function of `-2 b0` (which is `g`) and of `b1` (`1/g`).
fn p4_parts(g: &RatFun) -> Result<(RatFun, RatFun, RatFun), ClosedFormError> {
    let x = RatFun::x();
    let dg = g.derivative();
    let g2 = g * g;
    let term1 = (&dg * &dg).checked_div(&g.scale(&two()))?;
    let term2 = (&g2 * g).scale(&BigRat::new(3.into(), 2.into()));
    let term3 = (&x * &g2).scale(&BigRat::from_integer(4.into()));
    let term4 = (&(&x * &x) * g).scale(&two());
    let free = &(&(&term1 + &term2) + &term3) + &term4;
    Ok((free, g.clone(), g.recip()?))
}

/// Pointwise Painlevé IV residual from `(g, g', g'')`.
pub fn painleve4_residual_at(
    g: [f64; 3],
    x: f64,
    b0: f64,
    b1: f64,
) -> Result<f64, ClosedFormError> {
    let [v, d, dd] = g;
    if v == 0.0 || !v.is_finite() {
        return Err(ClosedFormError::Singular(x));
    }
    let rhs =
        d * d / (2.0 * v) + 1.5 * v * v * v + 4.0 * x * v * v + 2.0 * (x * x - b0) * v + b1 / v;
    Ok(dd - rhs)
}

/// Residuals on a grid for a callable returning `(g, g', g'')`.
pub fn painleve4_residual_grid<F>(
    g: F,
    p: &P4Params,
    xs: &[f64],
) -> Result<Vec<f64>, ClosedFormError>
where
    F: Fn(f64) -> [f64; 3],
{
    let (b0, b1) = (to_f64(&p.b0), to_f64(&p.b1));
    xs.iter()
        .map(|&x| painleve4_residual_at(g(x), x, b0, b1))
        .collect()
}

/// `(g, g', g'')` sampler for an exact rational function.
pub fn ratfun_sampler(g: &RatFun) -> impl Fn(f64) -> [f64; 3] {
    let d = g.derivative();
    let dd = d.derivative();
    let fs = [g.to_float(), d.to_float(), dd.to_float()];
    move |x| fs.clone().map(|f| f.eval(x).unwrap_or(f64::NAN))
}

/// Result of fitting `(b0, b1)` to `g = f_1 + λx - c0`.
#[derive(Clone, Debug, PartialEq)]
pub struct P4Fit {
    pub g: RatFun,
    pub params: P4Params,
    pub sample_points: [BigRat; 2],
    /// Exact residual with the fitted constants; zero iff `g` solves P-IV.
    pub residual: RatFun,
}

impl P4Fit {
    pub fn consistent(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Substitutes `f_1 = g - λx + c0` and solves the two conditions
/// `residual(x_a) = residual(x_b) = 0`, which are linear in `(b0, b1)`,
/// exactly. The fit is then checked as a rational-function identity.
pub fn painleve4_fit(sol: &ChainSolution) -> Result<P4Fit, ClosedFormError> {
    let p = sol.params();
    let g = &sol.f()[0] + &RatFun::linear(p.lambda().clone(), -p.c0().clone());
    if g.is_zero() {
        return Err(ClosedFormError::ZeroFunction);
    }
    let (free, lin, inv) = p4_parts(&g)?;
    // residual = g'' - free + 2 b0 g - b1/g
    let base = &g.derivative().derivative() - &free;
    let row = |x: &BigRat| -> Option<(BigRat, BigRat, BigRat)> {
        Some((
            two() * lin.eval(x).ok()?,
            -inv.eval(x).ok()?,
            -base.eval(x).ok()?,
        ))
    };
    let candidates: Vec<BigRat> = (1..=12)
        .flat_map(|k| {
            [
                BigRat::from_integer(k.into()),
                BigRat::new(1.into(), (k + 1).into()),
            ]
        })
        .collect();
    for (i, xa) in candidates.iter().enumerate() {
        let Some((a11, a12, r1)) = row(xa) else {
            continue;
        };
        for xb in &candidates[i + 1..] {
            let Some((a21, a22, r2)) = row(xb) else {
                continue;
            };
            let det = &a11 * &a22 - &a12 * &a21;
            if det.is_zero() {
                continue;
            }
            let b0 = (&r1 * &a22 - &a12 * &r2) / &det;
            let b1 = (&a11 * &r2 - &r1 * &a21) / &det;
            let params = P4Params { b0, b1 };
            let residual = painleve4_residual(&g, &params)?;
            return Ok(P4Fit {
                g,
                params,
                sample_points: [xa.clone(), xb.clone()],
                residual,
            });
        }
    }
    Err(ClosedFormError::NoFit)
}

/// Constants `c_1..c_4` of the Painlevé V equation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct P5Params {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Pointwise Painlevé V residual
///
/// ```text
/// w'' - [ (1/(2w) + 1/(w-1)) w'^2 - w'/z + (w-1)^2/z^2 (c1 w + c2/w)
///         + c3 w/z + c4 w(w+1)/(w-1) ]
/// ```
pub fn painleve5_residual_at(w: [f64; 3], z: f64, p: &P5Params) -> Result<f64, ClosedFormError> {
    let [v, d, dd] = w;
    if z == 0.0 || v == 0.0 || v == 1.0 || !v.is_finite() {
        return Err(ClosedFormError::Singular(z));
    }
    let wm1 = v - 1.0;
    let rhs = (0.5 / v + 1.0 / wm1) * d * d - d / z
        + wm1 * wm1 / (z * z) * (p.c1 * v + p.c2 / v)
        + p.c3 * v / z
        + p.c4 * v * (v + 1.0) / wm1;
    Ok(dd - rhs)
}

pub fn painleve5_residual_grid<F>(
    w: F,
    p: &P5Params,
    zs: &[f64],
) -> Result<Vec<f64>, ClosedFormError>
where
    F: Fn(f64) -> [f64; 3],
{
    zs.iter()
        .map(|&z| painleve5_residual_at(w(z), z, p))
        .collect()
}

/// Largest absolute entry.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, r| m.max(r.abs()))
}
