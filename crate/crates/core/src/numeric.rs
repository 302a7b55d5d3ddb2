//! Forward integration of odd-period chains and finite-difference residuals
//! for sampled solutions.
//!
//! Solving `d_i + d_{i+1} = R_i` (cyclic) for the derivatives `d_i` is only
//! possible for odd `n`; for even `n` the alternating vector is in the kernel.
//! Even periods are supported by [`sampled_residuals`] only.

use rayon::prelude::*;
use thiserror::Error;

use crate::chain::{ChainParams, ChainSolution};
use crate::ratfun::to_f64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid grid [{x0}, {x1}] with {steps} steps")]
    InvalidGrid { x0: f64, x1: f64, steps: usize },
    #[error("explicit form needs an odd period, got {0}")]
    EvenPeriod(usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("solution blew up after x = {last_good}")]
    BlowUp { last_good: f64 },
    #[error("pole of f_{index} at x = {x}")]
    Pole { index: usize, x: f64 },
    #[error("at least 5 grid points are needed, got {0}")]
    GridTooSmall(usize),
}

/// Uniform grid on `[x0, x1]` with `steps` intervals (`steps + 1` points).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    x0: f64,
    x1: f64,
    steps: usize,
}

impl Grid {
    pub fn new(x0: f64, x1: f64, steps: usize) -> Result<Self, NumericError> {
        if x1.partial_cmp(&x0) != Some(std::cmp::Ordering::Greater)
            || steps < 2
            || !x0.is_finite()
            || !x1.is_finite()
        {
            return Err(NumericError::InvalidGrid { x0, x1, steps });
        }
        Ok(Self { x0, x1, steps })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / self.steps as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.steps {
            self.x1
        } else {
            self.x0 + i as f64 * self.h()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// Chain values on a grid; `f[i][k]` is `f_{i+1}` at grid point `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledChain {
    pub grid: Grid,
    pub f: Vec<Vec<f64>>,
    pub params: ChainParams,
}

impl SampledChain {
    pub fn new(grid: Grid, f: Vec<Vec<f64>>, params: ChainParams) -> Result<Self, NumericError> {
        if f.len() != params.n() {
            return Err(NumericError::LengthMismatch {
                expected: params.n(),
                got: f.len(),
            });
        }
        if let Some(bad) = f.iter().find(|fi| fi.len() != grid.len()) {
            return Err(NumericError::LengthMismatch {
                expected: grid.len(),
                got: bad.len(),
            });
        }
        Ok(Self { grid, f, params })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// Values of all components at grid point `k`.
    pub fn row(&self, k: usize) -> Vec<f64> {
        self.f.iter().map(|fi| fi[k]).collect()
    }
}

/// Floating-point copy of `(λ, α)` used inside the integrator.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainRhs {
    lambda: f64,
    alpha: Vec<f64>,
}

impl ChainRhs {
    pub fn new(params: &ChainParams) -> Self {
        let alpha = params.alpha();
        Self {
            lambda: to_f64(params.lambda()),
            alpha: alpha.values().iter().map(to_f64).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `R_i = f_i^2 - f_{i+1}^2 + α_i`.
    pub fn rhs(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        (0..n)
            .map(|i| {
                let k = (i + 1) % n;
                f[i] * f[i] - f[k] * f[k] + self.alpha[i]
            })
            .collect()
    }

    /// `d_i = ½ Σ_k (-1)^k R_{i+k}`, the inverse of `d ↦ d_i + d_{i+1}`.
    pub fn derivatives(&self, f: &[f64]) -> Result<Vec<f64>, NumericError> {
        let n = self.n();
        if f.len() != n {
            return Err(NumericError::LengthMismatch {
                expected: n,
                got: f.len(),
            });
        }
        if n.is_multiple_of(2) {
            return Err(NumericError::EvenPeriod(n));
        }
        let r = self.rhs(f);
        Ok((0..n)
            .map(|i| {
                let s: f64 = (0..n)
                    .map(|k| {
                        if k % 2 == 0 {
                            r[(i + k) % n]
                        } else {
                            -r[(i + k) % n]
                        }
                    })
                    .sum();
                0.5 * s
            })
            .collect())
    }
}

pub fn explicit_derivatives(f: &[f64], params: &ChainParams) -> Result<Vec<f64>, NumericError> {
    ChainRhs::new(params).derivatives(f)
}

const BLOW_UP: f64 = 1e9;

/// Classical fixed-step RK4 from `grid.x0()` to `grid.x1()`.
pub fn rk4_integrate(
    initial: &[f64],
    params: &ChainParams,
    grid: &Grid,
) -> Result<SampledChain, NumericError> {
    let sys = ChainRhs::new(params);
    let n = sys.n();
    if n.is_multiple_of(2) {
        return Err(NumericError::EvenPeriod(n));
    }
    if initial.len() != n {
        return Err(NumericError::LengthMismatch {
            expected: n,
            got: initial.len(),
        });
    }
    let h = grid.h();
    let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len()); n];
    let mut y = initial.to_vec();
    for (i, v) in y.iter().enumerate() {
        out[i].push(*v);
    }
    for step in 0..grid.steps() {
        let k1 = sys.derivatives(&y)?;
        let k2 = sys.derivatives(&axpy(&y, &k1, h / 2.0))?;
        let k3 = sys.derivatives(&axpy(&y, &k2, h / 2.0))?;
        let k4 = sys.derivatives(&axpy(&y, &k3, h))?;
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite() || v.abs() > BLOW_UP) {
            return Err(NumericError::BlowUp {
                last_good: grid.point(step),
            });
        }
        for (i, v) in y.iter().enumerate() {
            out[i].push(*v);
        }
    }
    SampledChain::new(*grid, out, params.clone())
}

/// Independent trajectories integrated in parallel.
pub fn rk4_sweep(
    initials: &[Vec<f64>],
    params: &ChainParams,
    grid: &Grid,
) -> Vec<Result<SampledChain, NumericError>> {
    initials
        .par_iter()
        .map(|y0| rk4_integrate(y0, params, grid))
        .collect()
}

/// `max_k |Σ_i d_i - λ|` along a trajectory.
pub fn conservation_defect(sc: &SampledChain) -> Result<f64, NumericError> {
    let sys = ChainRhs::new(&sc.params);
    let mut worst = 0.0f64;
    for k in 0..sc.grid.len() {
        let d = sys.derivatives(&sc.row(k))?;
        worst = worst.max((d.iter().sum::<f64>() - sys.lambda()).abs());
    }
    Ok(worst)
}

/// Samples an exact solution on a grid.
pub fn sample_solution(sol: &ChainSolution, grid: &Grid) -> Result<SampledChain, NumericError> {
    let xs = grid.points();
    let f = sol
        .f()
        .iter()
        .enumerate()
        .map(|(i, fi)| {
            let fl = fi.to_float();
            xs.iter()
                .map(|&x| {
                    fl.eval(x)
                        .filter(|v| v.is_finite())
                        .ok_or(NumericError::Pole { index: i + 1, x })
                })
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SampledChain::new(*grid, f, sol.params().clone())
}

/// 5-point central derivative at interior points `2..len-2`.
pub fn central_diff5(v: &[f64], h: f64) -> Vec<f64> {
    (2..v.len().saturating_sub(2))
        .map(|k| (v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]) / (12.0 * h))
        .collect()
}

/// 5-point central second derivative at interior points `2..len-2`.
pub fn central_diff5_second(v: &[f64], h: f64) -> Vec<f64> {
    (2..v.len().saturating_sub(2))
        .map(|k| {
            (-v[k - 2] + 16.0 * v[k - 1] - 30.0 * v[k] + 16.0 * v[k + 1] - v[k + 2])
                / (12.0 * h * h)
        })
        .collect()
}

/// Max |residual| of each cyclic equation, derivatives by 5-point
/// differences; the two points at each end are excluded.
pub fn sampled_residuals(sc: &SampledChain) -> Result<Vec<f64>, NumericError> {
    let len = sc.grid.len();
    if len < 5 {
        return Err(NumericError::GridTooSmall(len));
    }
    let sys = ChainRhs::new(&sc.params);
    let h = sc.grid.h();
    let d: Vec<Vec<f64>> = sc.f.iter().map(|fi| central_diff5(fi, h)).collect();
    let n = sc.n();
    let mut worst = vec![0.0f64; n];
    for k in 2..len - 2 {
        let r = sys.rhs(&sc.row(k));
        for i in 0..n {
            let j = (i + 1) % n;
            let res = d[i][k - 2] + d[j][k - 2] - r[i];
            worst[i] = worst[i].max(res.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{rat as q, symmetric_seed};
    use crate::weyl::{apply_generator, ChainState, Generator};
    use proptest::prelude::*;

    fn seed3() -> ChainSolution {
        symmetric_seed(3, q(1, 1), q(0, 1)).unwrap()
    }

    #[test]
    fn grid_shape() {
        let g = Grid::new(-6.0, 6.0, 2000).unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g.point(2000), 6.0);
        assert!((g.point(1000)).abs() < 1e-15);
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn explicit_n3_formula() {
        let params = ChainParams::new(q(1, 1), vec![q(0, 1), q(1, 5), q(-1, 3)], q(0, 1)).unwrap();
        let sys = ChainRhs::new(&params);
        let f = [0.3, -1.1, 2.0];
        let r = sys.rhs(&f);
        let d = sys.derivatives(&f).unwrap();
        assert!((d[0] - (r[0] - r[1] + r[2]) / 2.0).abs() < 1e-14);
        for i in 0..3 {
            assert!((d[i] + d[(i + 1) % 3] - r[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn seed_derivatives_are_lambda_over_n() {
        let d = explicit_derivatives(&[1.0 / 3.0; 3], seed3().params()).unwrap();
        for di in d {
            assert!((di - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn even_period_rejected() {
        let s = symmetric_seed(2, q(1, 1), q(0, 1)).unwrap();
        assert_eq!(
            explicit_derivatives(&[0.5, 0.5], s.params()),
            Err(NumericError::EvenPeriod(2))
        );
        let g = Grid::new(1.0, 2.0, 10).unwrap();
        assert!(rk4_integrate(&[0.5, 0.5], s.params(), &g).is_err());
    }

    #[test]
    fn seed_trajectory() {
        let g = Grid::new(1.0, 2.0, 1000).unwrap();
        let sc = rk4_integrate(&[1.0 / 3.0; 3], seed3().params(), &g).unwrap();
        for fi in &sc.f {
            assert!((fi[1000] - 2.0 / 3.0).abs() < 1e-8);
        }
        assert!(sampled_residuals(&sc).unwrap().iter().all(|r| *r < 1e-8));
    }

    #[test]
    fn perturbed_conservation() {
        let g = Grid::new(1.0, 2.0, 200).unwrap();
        let sc = rk4_integrate(
            &[1.0 / 3.0 + 0.01, 1.0 / 3.0, 1.0 / 3.0],
            seed3().params(),
            &g,
        )
        .unwrap();
        assert!(conservation_defect(&sc).unwrap() < 1e-12);
    }

    #[test]
    fn blow_up_reported() {
        let g = Grid::new(0.0, 10.0, 10000).unwrap();
        let err = rk4_integrate(&[5.0, -5.0, 0.0], seed3().params(), &g).unwrap_err();
        assert!(matches!(err, NumericError::BlowUp { last_good } if last_good < 10.0));
    }

    fn s0_image() -> ChainSolution {
        let seed = seed3();
        let st =
            apply_generator(Generator::S(0), &ChainState::from_solution(&seed).unwrap()).unwrap();
        st.to_solution(q(0, 1), q(0, 1)).unwrap()
    }

    #[test]
    fn orbit_member_sampled_and_integrated() {
        let sol = s0_image();
        let g = Grid::new(1.0, 2.0, 400).unwrap();
        let exact = sample_solution(&sol, &g).unwrap();
        assert!(sampled_residuals(&exact).unwrap().iter().all(|r| *r < 1e-9));
        let sc = rk4_integrate(&exact.row(0), sol.params(), &g).unwrap();
        for i in 0..3 {
            assert!((sc.f[i][400] - exact.f[i][400]).abs() < 1e-6);
        }
    }

    #[test]
    fn even_period_residuals() {
        let s = symmetric_seed(4, q(2, 1), q(1, 1)).unwrap();
        let g = Grid::new(-1.0, 1.0, 100).unwrap();
        let sc = sample_solution(&s, &g).unwrap();
        assert!(sampled_residuals(&sc).unwrap().iter().all(|r| *r < 1e-12));
    }

    #[test]
    fn pole_on_grid() {
        let g = Grid::new(-1.0, 1.0, 10).unwrap();
        assert!(matches!(
            sample_solution(&s0_image(), &g),
            Err(NumericError::Pole { .. })
        ));
    }

    #[test]
    fn rk4_fourth_order() {
        let sol = s0_image();
        let err = |steps| {
            let g = Grid::new(1.0, 2.0, steps).unwrap();
            let exact = sample_solution(&sol, &g).unwrap();
            let sc = rk4_integrate(&exact.row(0), sol.params(), &g).unwrap();
            (0..3)
                .map(|i| (sc.f[i][steps] - exact.f[i][steps]).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(20) / err(40);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn sweep_matches_serial() {
        let g = Grid::new(1.0, 1.5, 50).unwrap();
        let inits = vec![vec![0.3, 0.3, 0.4], vec![0.2, 0.5, 0.3]];
        let par = rk4_sweep(&inits, seed3().params(), &g);
        for (y0, r) in inits.iter().zip(par) {
            assert_eq!(r.unwrap(), rk4_integrate(y0, seed3().params(), &g).unwrap());
        }
    }

    proptest! {
        #[test]
        fn sum_of_derivatives_is_lambda(f in proptest::collection::vec(-10.0f64..10.0, 5)) {
            let s = symmetric_seed(5, q(3, 2), q(0, 1)).unwrap();
            let d = explicit_derivatives(&f, s.params()).unwrap();
            let scale = f.iter().map(|v| v * v).sum::<f64>().max(1.0);
            prop_assert!((d.iter().sum::<f64>() - 1.5).abs() < 1e-13 * scale);
        }
    }
}
