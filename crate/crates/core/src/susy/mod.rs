//! SUSY partners of the harmonic oscillator `H_0 = -½ d²/dx² + x²/2`.
//!
//! Seeds `u_j` solve `H_0 u = ε_j u` without being square integrable.
//! A `k`-step transformation with seeds `u_1..u_k` produces
//! `V_1 = x²/2 - (ln W)''` and maps `ψ_n` to `W(u_1..u_k, ψ_n)/W(u_1..u_k)`.

mod ladder;
mod special;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ladder::{
    ladder_polynomial, ladder_polynomial_generic, ladder_spectrum, Ladder, LadderPolynomials,
};
pub use special::{gamma_ratio, hermite_psi, hyp1f1, ode_stack};

use crate::numeric::{central_diff5_second, Grid};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SusyError {
    #[error("1F1({a}; {b}; {z}) did not converge")]
    SeriesDivergence { a: f64, b: f64, z: f64 },
    #[error("|x| = {x} exceeds x_max = {x_max}")]
    OutOfRange { x: f64, x_max: f64 },
    #[error("Γ((3 - 2ε)/4) has a pole at ε = {eps} and ν = {nu} is nonzero")]
    GammaPole { eps: f64, nu: f64 },
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("Wronskian vanishes at x = {x}")]
    SingularWronskian { x: f64 },
    #[error("Wronskian has a node in [{lo}, {hi}]")]
    Node { lo: f64, hi: f64 },
    #[error("E_{n} coincides with the factorization energy {eps}")]
    NormalizationPole { n: usize, eps: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedKind {
    General1F1,
    /// The bound state `ψ_n`; requires `ε = n + 1/2`.
    HermiteBound {
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub eps: f64,
    pub nu: f64,
    pub kind: SeedKind,
}

impl SeedSpec {
    pub fn general(eps: f64, nu: f64) -> Self {
        Self {
            eps,
            nu,
            kind: SeedKind::General1F1,
        }
    }

    pub fn hermite_bound(n: usize) -> Self {
        Self {
            eps: n as f64 + 0.5,
            nu: 0.0,
            kind: SeedKind::HermiteBound { n },
        }
    }

    pub fn validate(&self) -> Result<(), SusyError> {
        if !self.eps.is_finite() || !self.nu.is_finite() {
            return Err(SusyError::InvalidSeed(format!(
                "eps = {}, nu = {}",
                self.eps, self.nu
            )));
        }
        if let SeedKind::HermiteBound { n } = self.kind {
            if self.eps != n as f64 + 0.5 {
                return Err(SusyError::InvalidSeed(format!(
                    "hermite_bound({n}) needs eps = {}, got {}",
                    n as f64 + 0.5,
                    self.eps
                )));
            }
        }
        Ok(())
    }
}

pub const DEFAULT_X_MAX: f64 = 8.0;

/// A seed ready for evaluation:
///
/// ```text
/// u = e^{-x²/2} [ 1F1(a, 1/2, x²) + 2νx Γ(a+1/2)/Γ(a) 1F1(a+1/2, 3/2, x²) ],
/// a = (1 - 2ε)/4
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedState {
    spec: SeedSpec,
    a: f64,
    /// `2ν Γ(a+1/2)/Γ(a)`
    odd_coeff: f64,
    x_max: f64,
}

impl SeedState {
    pub fn new(spec: SeedSpec) -> Result<Self, SusyError> {
        Self::with_x_max(spec, DEFAULT_X_MAX)
    }

    pub fn with_x_max(spec: SeedSpec, x_max: f64) -> Result<Self, SusyError> {
        spec.validate()?;
        let a = (1.0 - 2.0 * spec.eps) / 4.0;
        let odd_coeff = match spec.kind {
            SeedKind::HermiteBound { .. } => 0.0,
            SeedKind::General1F1 if spec.nu == 0.0 => 0.0,
            SeedKind::General1F1 => match gamma_ratio(a) {
                Some(r) => 2.0 * spec.nu * r,
                None => {
                    return Err(SusyError::GammaPole {
                        eps: spec.eps,
                        nu: spec.nu,
                    })
                }
            },
        };
        Ok(Self {
            spec,
            a,
            odd_coeff,
            x_max,
        })
    }

    pub fn spec(&self) -> &SeedSpec {
        &self.spec
    }

    pub fn eps(&self) -> f64 {
        self.spec.eps
    }

    /// `(u, u')` at `x`.
    pub fn value_and_slope(&self, x: f64) -> Result<(f64, f64), SusyError> {
        if x.abs() > self.x_max {
            return Err(SusyError::OutOfRange {
                x,
                x_max: self.x_max,
            });
        }
        if let SeedKind::HermiteBound { n } = self.spec.kind {
            let s = hermite_psi(n, x, 1);
            return Ok((s[0], s[1]));
        }
        let z = x * x;
        let a = self.a;
        let f1 = hyp1f1(a, 0.5, z)?;
        let df1 = 2.0 * a * hyp1f1(a + 1.0, 1.5, z)?;
        let (mut b, mut db) = (f1, 2.0 * x * df1);
        if self.odd_coeff != 0.0 {
            let a2 = a + 0.5;
            let g = hyp1f1(a2, 1.5, z)?;
            let dg = a2 / 1.5 * hyp1f1(a2 + 1.0, 2.5, z)?;
            b += self.odd_coeff * x * g;
            db += self.odd_coeff * (g + 2.0 * z * dg);
        }
        let gauss = (-0.5 * z).exp();
        Ok((gauss * b, gauss * (db - x * b)))
    }

    /// `u, u', ..., u^{(order)}` at `x`.
    pub fn derivs(&self, x: f64, order: usize) -> Result<Vec<f64>, SusyError> {
        let (u, du) = self.value_and_slope(x)?;
        Ok(ode_stack(u, du, x, self.spec.eps, order))
    }
}

/// `W, W', W''`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WronskianValue {
    pub w: f64,
    pub dw: f64,
    pub ddw: f64,
}

/// Determinant by LU with partial pivoting.
pub fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let k = m.len();
    let mut d = 1.0;
    for c in 0..k {
        let p = (c..k)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        let (top, bottom) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in bottom {
            let factor = row[c] / pivot[c];
            if factor != 0.0 {
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= factor * p;
                }
            }
        }
    }
    d
}

fn minor(stacks: &[Vec<f64>], rows: &[usize]) -> f64 {
    det(rows
        .iter()
        .map(|&r| stacks.iter().map(|s| s[r]).collect())
        .collect())
}

/// `W` of `k` functions given their derivative stacks (each of order
/// `>= k + 1`), together with `W'` and `W''` by row-shift expansion.
pub fn wronskian(stacks: &[Vec<f64>]) -> WronskianValue {
    let k = stacks.len();
    if k == 0 {
        return WronskianValue {
            w: 1.0,
            dw: 0.0,
            ddw: 0.0,
        };
    }
    let base: Vec<usize> = (0..k).collect();
    let w = minor(stacks, &base);
    let mut rows = base.clone();
    rows[k - 1] = k;
    let dw = minor(stacks, &rows);
    rows[k - 1] = k + 1;
    let mut ddw = minor(stacks, &rows);
    if k >= 2 {
        let mut rows = base;
        rows[k - 2] = k - 1;
        rows[k - 1] = k;
        ddw += minor(stacks, &rows);
    }
    WronskianValue { w, dw, ddw }
}

/// Value of the Wronskian only; stacks need order `>= k - 1`.
pub fn wronskian_value(stacks: &[Vec<f64>]) -> f64 {
    minor(stacks, &(0..stacks.len()).collect::<Vec<_>>())
}

fn prepare(seeds: &[SeedSpec]) -> Result<Vec<SeedState>, SusyError> {
    seeds.iter().map(|s| SeedState::new(*s)).collect()
}

fn seed_wronskian(states: &[SeedState], x: f64) -> Result<WronskianValue, SusyError> {
    let k = states.len();
    let stacks = states
        .iter()
        .map(|s| s.derivs(x, k + 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(wronskian(&stacks))
}

/// Wronskian of the seeds at `x`.
pub fn seed_wronskian_at(seeds: &[SeedSpec], x: f64) -> Result<WronskianValue, SusyError> {
    seed_wronskian(&prepare(seeds)?, x)
}

fn potential_from(wv: WronskianValue, x: f64) -> Result<f64, SusyError> {
    if wv.w == 0.0 || !wv.w.is_finite() {
        return Err(SusyError::SingularWronskian { x });
    }
    let l = wv.dw / wv.w;
    Ok(0.5 * x * x - (wv.ddw / wv.w - l * l))
}

/// `V_1 = x²/2 - (W''/W - (W'/W)²)`.
pub fn partner_potential(seeds: &[SeedSpec], x: f64) -> Result<f64, SusyError> {
    potential_from(seed_wronskian_at(seeds, x)?, x)
}

/// `V_1` on a grid; a sign change of `W` is reported with its bracket.
pub fn partner_potential_grid(seeds: &[SeedSpec], grid: &Grid) -> Result<Vec<f64>, SusyError> {
    let report = nonsingularity_check(seeds, grid)?;
    if let Some(&(lo, hi)) = report.node_brackets.first() {
        return Err(SusyError::Node { lo, hi });
    }
    let states = prepare(seeds)?;
    grid.points()
        .par_iter()
        .map(|&x| potential_from(seed_wronskian(&states, x)?, x))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeReport {
    pub ok: bool,
    pub min_abs_w: f64,
    /// Brackets `[lo, hi]` containing a zero of `W`, refined by bisection.
    pub node_brackets: Vec<(f64, f64)>,
}

const BISECT_ITERS: usize = 60;

/// Scans `W` for sign changes (and exact zeros) over the grid.
pub fn nonsingularity_check(seeds: &[SeedSpec], grid: &Grid) -> Result<NodeReport, SusyError> {
    let states = prepare(seeds)?;
    let xs = grid.points();
    let w: Vec<f64> = xs
        .par_iter()
        .map(|&x| seed_wronskian(&states, x).map(|v| v.w))
        .collect::<Result<_, _>>()?;
    let min_abs_w = w.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let mut brackets = Vec::new();
    for i in 0..xs.len() {
        if w[i] == 0.0 {
            brackets.push((xs[i], xs[i]));
            continue;
        }
        if i + 1 < xs.len() && w[i + 1] != 0.0 && w[i].signum() != w[i + 1].signum() {
            let (mut lo, mut hi) = (xs[i], xs[i + 1]);
            let s_lo = w[i].signum();
            for _ in 0..BISECT_ITERS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let wm = seed_wronskian(&states, mid)?.w;
                if wm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if wm.signum() == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            brackets.push((lo, hi));
        }
    }
    Ok(NodeReport {
        ok: brackets.is_empty(),
        min_abs_w,
        node_brackets: brackets,
    })
}

/// `W(u_1..u_k, ψ_n)/W(u_1..u_k)` without normalization.
pub fn transformed_state_unnormalized(
    seeds: &[SeedSpec],
    n: usize,
    x: f64,
) -> Result<f64, SusyError> {
    transformed_unnormalized(&prepare(seeds)?, n, x)
}

fn transformed_unnormalized(states: &[SeedState], n: usize, x: f64) -> Result<f64, SusyError> {
    let k = states.len();
    let mut stacks = states
        .iter()
        .map(|s| s.derivs(x, k))
        .collect::<Result<Vec<_>, _>>()?;
    let below = wronskian_value(&stacks);
    if below == 0.0 || !below.is_finite() {
        return Err(SusyError::SingularWronskian { x });
    }
    stacks.push(hermite_psi(n, x, k));
    Ok(wronskian_value(&stacks) / below)
}

fn normalization(states: &[SeedState], n: usize) -> Result<f64, SusyError> {
    let e = n as f64 + 0.5;
    let mut prod = 1.0;
    for s in states {
        let d = e - s.eps();
        if d == 0.0 {
            return Err(SusyError::NormalizationPole { n, eps: s.eps() });
        }
        prod *= d;
    }
    Ok(prod.abs().sqrt().recip())
}

/// `φ_n = W(u_1..u_k, ψ_n)/W(u_1..u_k) / sqrt(|∏(E_n - ε_j)|)`.
pub fn transformed_state(seeds: &[SeedSpec], n: usize, x: f64) -> Result<f64, SusyError> {
    let states = prepare(seeds)?;
    Ok(normalization(&states, n)? * transformed_unnormalized(&states, n, x)?)
}

/// `φ_n` on every grid point.
pub fn transformed_state_grid(
    seeds: &[SeedSpec],
    n: usize,
    grid: &Grid,
) -> Result<Vec<f64>, SusyError> {
    let states = prepare(seeds)?;
    let c = normalization(&states, n)?;
    grid.points()
        .par_iter()
        .map(|&x| Ok(c * transformed_unnormalized(&states, n, x)?))
        .collect()
}

/// Max over interior grid points of `|-½φ_n'' + V_1 φ_n - E_n φ_n|`, with
/// `φ_n''` from 5-point central differences.
pub fn schrodinger_residual(seeds: &[SeedSpec], n: usize, grid: &Grid) -> Result<f64, SusyError> {
    let v = partner_potential_grid(seeds, grid)?;
    let phi = transformed_state_grid(seeds, n, grid)?;
    let dd = central_diff5_second(&phi, grid.h());
    let e = n as f64 + 0.5;
    Ok(dd
        .iter()
        .enumerate()
        .map(|(i, d2)| {
            let k = i + 2;
            (-0.5 * d2 + (v[k] - e) * phi[k]).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Grid {
        Grid::new(-6.0, 6.0, 2000).unwrap()
    }

    /// `u''` from differentiating the series twice, independent of the
    /// ODE recursion.
    fn u_second_by_series(eps: f64, nu: f64, x: f64) -> f64 {
        let a = (1.0 - 2.0 * eps) / 4.0;
        let a2 = a + 0.5;
        let c = 2.0 * nu * gamma_ratio(a).unwrap();
        let z = x * x;
        let f = hyp1f1(a, 0.5, z).unwrap();
        let df = 2.0 * a * hyp1f1(a + 1.0, 1.5, z).unwrap();
        let ddf = 2.0 * a * (a + 1.0) / 1.5 * hyp1f1(a + 2.0, 2.5, z).unwrap();
        let g = hyp1f1(a2, 1.5, z).unwrap();
        let dg = a2 / 1.5 * hyp1f1(a2 + 1.0, 2.5, z).unwrap();
        let ddg = a2 * (a2 + 1.0) / (1.5 * 2.5) * hyp1f1(a2 + 2.0, 3.5, z).unwrap();
        let b = f + c * x * g;
        let db = 2.0 * x * df + c * (g + 2.0 * z * dg);
        let ddb = 2.0 * df + 4.0 * z * ddf + c * (6.0 * x * dg + 4.0 * x * z * ddg);
        (-0.5 * z).exp() * (ddb - 2.0 * x * db + (z - 1.0) * b)
    }

    #[test]
    fn ground_state_seed_is_gaussian() {
        let s = SeedState::new(SeedSpec::general(0.5, 0.0)).unwrap();
        for x in [-2.0, 0.0, 1.5] {
            let (u, du) = s.value_and_slope(x).unwrap();
            assert!((u - (-0.5 * x * x).exp()).abs() < 1e-15);
            assert!((du + x * u).abs() < 1e-15);
        }
    }

    #[test]
    fn seed_eps_minus_half() {
        let s = SeedState::new(SeedSpec::general(-0.5, 0.0)).unwrap();
        let (u, du) = s.value_and_slope(1.0).unwrap();
        assert!((u - 0.5f64.exp()).abs() < 1e-13);
        assert!((u - 1.6487).abs() < 1e-4);
        assert!((du - 0.5f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn seed_with_erf_branch() {
        // ε = -1/2: u = e^{x²/2}(1 + ν erf x)
        let s = SeedState::new(SeedSpec::general(-0.5, 2.0)).unwrap();
        let (u, _) = s.value_and_slope(0.8).unwrap();
        // e^{0.32}(1 + 2 erf 0.8) to 30 digits: 3.42106344921479203555...
        assert!((u - 3.421063449214792).abs() < 1e-14);
    }

    #[test]
    fn seed_second_derivative_against_series() {
        for (eps, nu) in [
            (-0.6, 0.0),
            (-1.2, 0.3),
            (0.25, -0.7),
            (-0.5, 2.0),
            (2.3, 0.5),
        ] {
            let s = SeedState::new(SeedSpec::general(eps, nu)).unwrap();
            for x in [-3.0, -0.4, 0.0, 1.1, 4.5] {
                let st = s.derivs(x, 2).unwrap();
                let oracle = u_second_by_series(eps, nu, x);
                assert!(
                    (st[2] - oracle).abs() <= 1e-9 * oracle.abs().max(1e-300),
                    "eps={eps} x={x}"
                );
            }
        }
    }

    #[test]
    fn hermite_bound_seed() {
        let s = SeedState::new(SeedSpec::hermite_bound(3)).unwrap();
        assert_eq!(s.eps(), 3.5);
        assert_eq!(s.derivs(0.4, 3).unwrap(), hermite_psi(3, 0.4, 3));
        let bad = SeedSpec {
            eps: 1.0,
            nu: 0.0,
            kind: SeedKind::HermiteBound { n: 3 },
        };
        assert!(SeedState::new(bad).is_err());
    }

    #[test]
    fn gamma_pole_handling() {
        // a = -1/2: pole of Γ(a + 1/2)
        assert!(matches!(
            SeedState::new(SeedSpec::general(1.5, 1.0)),
            Err(SusyError::GammaPole { .. })
        ));
        assert!(SeedState::new(SeedSpec::general(1.5, 0.0)).is_ok());
        // a = -1: 1/Γ(a) = 0 removes the odd part
        let s = SeedState::new(SeedSpec::general(2.5, 4.0)).unwrap();
        let (u, _) = s.value_and_slope(1.0).unwrap();
        // 1F1(-1; 1/2; 1) = -1
        assert!((u + (-0.5f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn out_of_range() {
        let s = SeedState::new(SeedSpec::general(-0.5, 0.0)).unwrap();
        assert!(matches!(
            s.derivs(9.0, 2),
            Err(SusyError::OutOfRange { .. })
        ));
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(det(vec![vec![2.0, 1.0], vec![4.0, 3.0]]), 2.0);
        assert_eq!(det(vec![vec![0.0, 1.0], vec![1.0, 0.0]]), -1.0);
        assert_eq!(det(vec![vec![1.0, 2.0], vec![2.0, 4.0]]), 0.0);
        let m = vec![
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ];
        assert!((det(m) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn wronskian_single_and_pair() {
        let st = hermite_psi(2, 0.3, 2);
        let w = wronskian(std::slice::from_ref(&st));
        assert_eq!((w.w, w.dw, w.ddw), (st[0], st[1], st[2]));
        for x in [-1.0, 0.2, 2.5] {
            let w = wronskian(&[hermite_psi(0, x, 3), hermite_psi(1, x, 3)]);
            assert!((w.dw / w.w + 2.0 * x).abs() < 1e-9);
            // (ln W)'' = -2
            let l = w.dw / w.w;
            assert!((w.ddw / w.w - l * l + 2.0).abs() < 1e-9);
        }
        let u = hermite_psi(1, 0.7, 3);
        let u2: Vec<f64> = u.iter().map(|v| 2.0 * v).collect();
        assert_eq!(wronskian(&[u, u2]).w, 0.0);
    }

    #[test]
    fn ground_state_partner_shifts_by_one() {
        let seeds = [SeedSpec::general(0.5, 0.0)];
        let v = partner_potential_grid(&seeds, &grid()).unwrap();
        for (x, vi) in grid().points().iter().zip(v) {
            assert!((vi - (0.5 * x * x + 1.0)).abs() < 1e-12);
        }
        assert_eq!(partner_potential(&[], 1.5).unwrap(), 1.125);
    }

    #[test]
    fn node_detection() {
        let g = grid();
        assert!(
            nonsingularity_check(&[SeedSpec::general(0.5, 0.0)], &g)
                .unwrap()
                .ok
        );
        assert!(
            nonsingularity_check(&[SeedSpec::general(-0.5, 0.0)], &g)
                .unwrap()
                .ok
        );
        let r = nonsingularity_check(&[SeedSpec::general(-0.5, 2.0)], &g).unwrap();
        assert!(!r.ok);
        // node where erf x = -1/2
        let (lo, hi) = r.node_brackets[0];
        assert!(hi - lo < 1e-10);
        assert!((statrs::function::erf::erf(lo) + 0.5).abs() < 1e-9);
        assert!(matches!(
            partner_potential_grid(&[SeedSpec::general(-0.5, 2.0)], &g),
            Err(SusyError::Node { .. })
        ));
    }

    #[test]
    fn transformed_state_cases() {
        for x in [-1.0, 0.5] {
            assert_eq!(
                transformed_state(&[], 3, x).unwrap(),
                hermite_psi(3, x, 0)[0]
            );
        }
        let g0 = [SeedSpec::general(0.5, 0.0)];
        assert!(transformed_state_unnormalized(&g0, 0, 0.7).unwrap().abs() < 1e-15);
        assert!(matches!(
            transformed_state(&g0, 0, 0.7),
            Err(SusyError::NormalizationPole { n: 0, .. })
        ));
    }

    #[test]
    fn eps_minus_half_states_are_shifted_oscillator() {
        // u = e^{x²/2}: φ_n = ψ_n' - xψ_n = -√(2(n+1)) ψ_{n+1}, normalized by √(n+1)
        let seeds = [SeedSpec::general(-0.5, 0.0)];
        for n in 0..4 {
            for x in [-2.0, 0.1, 1.7] {
                let phi = transformed_state(&seeds, n, x).unwrap();
                let oracle = -std::f64::consts::SQRT_2 * hermite_psi(n + 1, x, 0)[0];
                assert!((phi - oracle).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_step_schrodinger_residual() {
        let seeds = [SeedSpec::general(-0.5, 0.0)];
        for n in 0..=5 {
            let r = schrodinger_residual(&seeds, n, &grid()).unwrap();
            assert!(r < 1e-6, "n={n} {r}");
        }
    }

    #[test]
    fn two_step_adjacent_bound_states() {
        // deleting ψ_1, ψ_2: W ∝ e^{-x²}(8x² + 4) is nodeless
        let seeds = [SeedSpec::hermite_bound(1), SeedSpec::hermite_bound(2)];
        assert!(nonsingularity_check(&seeds, &grid()).unwrap().ok);
        for n in [0, 3, 4, 5] {
            let r = schrodinger_residual(&seeds, n, &grid()).unwrap();
            assert!(r < 1e-6, "n={n} {r}");
        }
        assert!(transformed_state(&seeds, 2, 0.3).is_err());
    }

    #[test]
    fn two_even_seeds_vanish_at_origin() {
        let seeds = [SeedSpec::general(-0.6, 0.0), SeedSpec::general(-1.2, 0.0)];
        assert_eq!(seed_wronskian_at(&seeds, 0.0).unwrap().w, 0.0);
        assert!(!nonsingularity_check(&seeds, &grid()).unwrap().ok);
    }

    #[test]
    fn swap_antisymmetry() {
        let a = SeedSpec::general(-0.6, 0.3);
        let b = SeedSpec::general(-1.7, 0.1);
        for x in [-1.2, 0.4, 2.2] {
            let ab = seed_wronskian_at(&[a, b], x).unwrap();
            let ba = seed_wronskian_at(&[b, a], x).unwrap();
            assert!((ab.w + ba.w).abs() <= 1e-12 * ab.w.abs());
            let va = partner_potential(&[a, b], x).unwrap();
            let vb = partner_potential(&[b, a], x).unwrap();
            assert!((va - vb).abs() < 1e-9 * va.abs().max(1.0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn seeds_solve_the_oscillator(eps in -3.0f64..0.4, nu in -0.9f64..0.9, x in -6.0f64..6.0) {
            let s = SeedState::new(SeedSpec::general(eps, nu)).unwrap();
            let st = s.derivs(x, 2).unwrap();
            let oracle = u_second_by_series(eps, nu, x);
            prop_assume!(st[0] != 0.0);
            prop_assert!((st[2] - oracle).abs() <= 1e-9 * oracle.abs().max(st[0].abs()));
        }
    }
}
