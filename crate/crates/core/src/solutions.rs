//! Regular and singular solutions of `-y'' + (a(a+1)/x^2 + q) y = lambda y`
//! built by Picard iteration on their Volterra integral equations
//!
//! ```text
//! phi(x)  = u(x) + int_0^x G(x,t) q(t) phi(t) dt
//! psi~(x) = v(x) - int_x^1 G(x,t) q(t) psi~(t) dt
//! ```
//!
//! with `G(x,t) = v(x)u(t) - u(x)v(t) = Q(x)P(t) - P(x)Q(t)`. Since the kernel
//! is separable, each Picard step costs two cumulative integrals. The
//! iteration is run on the increments (the Neumann series), which decay
//! factorially, so the stopping test never meets a rounding floor.
//!
//! The singular solution is stored through `x^a psi~` and `x^{a+1} psi~'`,
//! which stay finite at the origin.

use crate::bessel::{check_order, odd_double_factorial, FundamentalPair};
use crate::error::{Error, Result};
use crate::numerics::{integrate, Grid, GridFn};

/// Picard iterations allowed before giving up.
pub const MAX_PICARD: usize = 60;
/// Stop when the last increment is this small relative to the solution.
const PICARD_TOL: f64 = 1e-15;
/// Largest tolerated spread of the wronskian over the middle third.
pub const WRONSKIAN_SPREAD_LIMIT: f64 = 1e-4;
/// Below this the wronskian is treated as vanishing.
pub const DEGENERATE_LIMIT: f64 = 1e-8;

/// Real potential sampled on a grid, with its mean cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    samples: GridFn,
    mean: f64,
}

impl Potential {
    pub fn new(samples: GridFn) -> Self {
        let mean = integrate(&samples);
        Self { samples, mean }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = grid.sample(f);
        GridFn::new(grid, samples.into_values()).map(Self::new)
    }

    pub fn zero(grid: &Grid) -> Self {
        Self::new(grid.zeros())
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self::new(grid.constant(c))
    }

    pub fn samples(&self) -> &GridFn {
        &self.samples
    }

    pub fn values(&self) -> &[f64] {
        self.samples.values()
    }

    pub fn grid(&self) -> &Grid {
        self.samples.grid()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `q + c v`.
    pub fn perturbed(&self, c: f64, v: &GridFn) -> Result<Self> {
        self.samples.axpy(c, v).map(Self::new)
    }

    pub fn is_zero(&self) -> bool {
        self.values().iter().all(|&v| v == 0.0)
    }
}

/// `Q`, `P` and their derivatives sampled on the grid, in rescaled form.
struct Fundamental {
    a: i32,
    jhat: Vec<f64>,
    jhat_deriv: Vec<f64>,
    r: Vec<f64>,
    r_deriv: Vec<f64>,
}

impl Fundamental {
    fn new(a: u32, lambda: f64, grid: &Grid) -> Result<Self> {
        let pair = FundamentalPair::new(a, lambda)?;
        let n = grid.n_points();
        let mut f = Self {
            a: a as i32,
            jhat: Vec::with_capacity(n),
            jhat_deriv: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            r_deriv: Vec::with_capacity(n),
        };
        for &x in grid.x() {
            let s = pair.scaled(x);
            f.jhat.push(s.jhat);
            f.jhat_deriv.push(s.jhat_deriv);
            f.r.push(s.r);
            f.r_deriv.push(s.r_deriv);
        }
        Ok(f)
    }

    fn q_prime(&self, i: usize, x: f64) -> f64 {
        x.powi(self.a) * self.jhat_deriv[i]
    }

    fn p_prime(&self, i: usize, x: f64) -> f64 {
        self.r_deriv[i] / x.powi(self.a + 1)
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn validate(a: u32, lambda: f64) -> Result<()> {
    check_order(a, "solutions")?;
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("lambda = {lambda}")));
    }
    Ok(())
}

/// Regular solution `phi ~ x^{a+1}` and its derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularSolution {
    pub phi: GridFn,
    pub phi_prime: GridFn,
    /// `phi / x^{a+1}`, equal to 1 at the origin.
    pub scaled: GridFn,
    pub iterations: usize,
}

/// Solves the regular Volterra equation on the grid of `q`.
///
/// The iteration runs on `phi / x^{a+1}`; the powers of `t` carried by the
/// integrands are absorbed into weighted panel rules so that the first
/// panels are integrated to full order.
pub fn solve_regular(a: u32, lambda: f64, q: &Potential) -> Result<RegularSolution> {
    validate(a, lambda)?;
    let grid = q.grid();
    let fund = Fundamental::new(a, lambda, grid)?;
    let x = grid.x();
    let n = x.len();
    let ai = a as i32;
    let d = odd_double_factorial(a + 1);
    let qv = q.values();
    let rule_p = grid.panel_rule(1);
    let rule_q = grid.panel_rule(2 * ai + 2);

    let mut scaled: Vec<f64> = fund.jhat.iter().map(|j| d * j).collect();
    let mut phi_p: Vec<f64> = (0..n).map(|i| d * fund.q_prime(i, x[i])).collect();
    let done = |scaled: Vec<f64>, phi_p: Vec<f64>, iterations| -> Result<RegularSolution> {
        let phi = (0..n).map(|i| x[i].powi(ai + 1) * scaled[i]).collect();
        Ok(RegularSolution {
            phi: GridFn::new(grid, phi)?,
            phi_prime: GridFn::new(grid, phi_p)?,
            scaled: GridFn::new(grid, scaled)?,
            iterations,
        })
    };
    if q.is_zero() {
        return done(scaled, phi_p, 0);
    }
    let mut delta = scaled.clone();
    let mut f_p = vec![0.0; n];
    let mut f_q = vec![0.0; n];
    for iter in 1..=MAX_PICARD {
        // P q phi = t (r q phi^) and Q q phi = t^{2a+2} (jhat q phi^).
        for i in 0..n {
            let g = qv[i] * delta[i];
            f_p[i] = fund.r[i] * g;
            f_q[i] = fund.jhat[i] * g;
        }
        let j_p = rule_p.prefix(&f_p);
        let j_q = rule_q.prefix(&f_q);
        delta[0] = 0.0;
        for i in 1..n {
            let x2a1 = x[i].powi(2 * ai + 1);
            delta[i] = fund.jhat[i] * j_p[i] - fund.r[i] * j_q[i] / x2a1;
            scaled[i] += delta[i];
            phi_p[i] += fund.q_prime(i, x[i]) * j_p[i] - fund.p_prime(i, x[i]) * j_q[i];
        }
        let inc = sup(&delta);
        let size = sup(&scaled);
        if !inc.is_finite() || !size.is_finite() {
            return Err(Error::Divergence {
                iterations: iter,
                increment: inc,
            });
        }
        if inc <= PICARD_TOL * size {
            return done(scaled, phi_p, iter);
        }
        if iter == MAX_PICARD {
            return Err(Error::Divergence {
                iterations: iter,
                increment: inc / size,
            });
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Singular solution stored as `x^a psi` and `x^{a+1} psi'`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSolution {
    order: u32,
    pub scaled: GridFn,
    pub scaled_prime: GridFn,
    /// `psi'(0)`, finite only for `a = 0`.
    origin_prime: f64,
    pub iterations: usize,
}

impl SingularSolution {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Value at node `i`; infinite at the origin when `a >= 1`.
    pub fn value(&self, i: usize) -> f64 {
        let x = self.scaled.grid().x()[i];
        if i == 0 && self.order > 0 {
            return self.scaled[0].signum() * f64::INFINITY;
        }
        self.scaled[i] / x.powi(self.order as i32)
    }

    /// Derivative at node `i`; infinite at the origin when `a >= 1`.
    pub fn derivative(&self, i: usize) -> f64 {
        let x = self.scaled.grid().x()[i];
        if i == 0 {
            return if self.order == 0 {
                self.origin_prime
            } else {
                self.scaled_prime[0].signum() * f64::INFINITY
            };
        }
        self.scaled_prime[i] / x.powi(self.order as i32 + 1)
    }

    /// Raw values, with the origin flagged by an infinity when `a >= 1`.
    pub fn raw_values(&self) -> Vec<f64> {
        (0..self.scaled.len()).map(|i| self.value(i)).collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            order: self.order,
            scaled: self.scaled.scale(c),
            scaled_prime: self.scaled_prime.scale(c),
            origin_prime: c * self.origin_prime,
            iterations: self.iterations,
        }
    }
}

/// Solves the singular Volterra equation on the grid of `q`.
pub fn solve_singular(a: u32, lambda: f64, q: &Potential) -> Result<SingularSolution> {
    validate(a, lambda)?;
    let grid = q.grid();
    let fund = Fundamental::new(a, lambda, grid)?;
    let x = grid.x();
    let n = x.len();
    let d = odd_double_factorial(a + 1);
    let qv = q.values();
    let ai = a as i32;
    let unit = grid.panel_rule(0);
    let weighted = grid.panel_rule(-2 * ai);

    let mut s: Vec<f64> = fund.r.iter().map(|r| -r / d).collect();
    let mut sp: Vec<f64> = fund.r_deriv.iter().map(|r| -r / d).collect();
    // v'(0) = 0 when a = 0.
    let mut origin_prime = 0.0;
    let done = |s: Vec<f64>, sp: Vec<f64>, origin_prime, iterations| -> Result<SingularSolution> {
        Ok(SingularSolution {
            order: a,
            scaled: GridFn::new(grid, s)?,
            scaled_prime: GridFn::new(grid, sp)?,
            origin_prime,
            iterations,
        })
    };
    if q.is_zero() {
        return done(s, sp, origin_prime, 0);
    }
    let mut delta = s.clone();
    let mut g_p = vec![0.0; n];
    let mut g_q = vec![0.0; n];
    for iter in 1..=MAX_PICARD {
        // P q psi = t^{-2a} (r q s) and Q q psi = t jhat q s.
        for i in 0..n {
            g_p[i] = fund.r[i] * qv[i] * delta[i];
            g_q[i] = x[i] * fund.jhat[i] * qv[i] * delta[i];
        }
        let i_p = weighted.suffix(&g_p);
        let i_q = unit.suffix(&g_q);
        if a == 0 {
            origin_prime -= fund.jhat_deriv[0] * i_p[0];
        }
        for i in 0..n {
            let (inc, inc_p) = if i == 0 && a > 0 {
                (fund.r[0] * i_q[0], fund.r_deriv[0] * i_q[0])
            } else {
                let x2a1 = x[i].powi(2 * ai + 1);
                (
                    -x2a1 * fund.jhat[i] * i_p[i] + fund.r[i] * i_q[i],
                    -x2a1 * fund.jhat_deriv[i] * i_p[i] + fund.r_deriv[i] * i_q[i],
                )
            };
            delta[i] = inc;
            s[i] += inc;
            sp[i] += inc_p;
        }
        let inc = sup(&delta);
        let size = sup(&s);
        if !inc.is_finite() || !size.is_finite() {
            return Err(Error::Divergence {
                iterations: iter,
                increment: inc,
            });
        }
        if inc <= PICARD_TOL * size {
            return done(s, sp, origin_prime, iter);
        }
        if iter == MAX_PICARD {
            return Err(Error::Divergence {
                iterations: iter,
                increment: inc / size,
            });
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Mean and spread of `phi psi' - phi' psi` over the middle third of the grid.
pub fn wronskian_stats(reg: &RegularSolution, sing: &SingularSolution) -> (f64, f64) {
    let grid = reg.phi.grid();
    let n = grid.n_points();
    let x = grid.x();
    let a = sing.order() as i32;
    let (lo, hi) = (n / 3, 2 * n / 3);
    let vals: Vec<f64> = (lo..=hi)
        .map(|i| {
            let xa = x[i].powi(a);
            reg.phi[i] * sing.scaled_prime[i] / (xa * x[i]) - reg.phi_prime[i] * sing.scaled[i] / xa
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let (mn, mx) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    (mean, mx - mn)
}

/// Regular and singular solutions at one `lambda` with their wronskian.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    pub order: u32,
    pub lambda: f64,
    pub regular: RegularSolution,
    pub singular: SingularSolution,
    pub wronskian: f64,
    pub wronskian_spread: f64,
}

impl SolutionPair {
    pub fn phi(&self) -> &GridFn {
        &self.regular.phi
    }

    pub fn phi_prime(&self) -> &GridFn {
        &self.regular.phi_prime
    }

    /// `psi = psi~ / W`, normalised so that `W(phi, psi) = 1`.
    pub fn psi(&self) -> Result<SingularSolution> {
        if self.wronskian.abs() <= DEGENERATE_LIMIT {
            return Err(Error::NearDegenerate {
                value: self.wronskian,
            });
        }
        Ok(self.singular.scale(1.0 / self.wronskian))
    }
}

/// Solves both equations and evaluates the wronskian.
pub fn solve(a: u32, lambda: f64, q: &Potential) -> Result<SolutionPair> {
    let regular = solve_regular(a, lambda, q)?;
    let singular = solve_singular(a, lambda, q)?;
    let (wronskian, spread) = wronskian_stats(&regular, &singular);
    if !(spread <= WRONSKIAN_SPREAD_LIMIT * (1.0 + wronskian.abs())) {
        return Err(Error::WronskianAccuracy {
            spread,
            limit: WRONSKIAN_SPREAD_LIMIT * (1.0 + wronskian.abs()),
        });
    }
    Ok(SolutionPair {
        order: a,
        lambda,
        regular,
        singular,
        wronskian,
        wronskian_spread: spread,
    })
}

/// `W(lambda, q) = W(phi, psi~)`.
pub fn wronskian(a: u32, lambda: f64, q: &Potential) -> Result<f64> {
    solve(a, lambda, q).map(|p| p.wronskian)
}

/// Singular solution normalised by the wronskian.
pub fn psi(a: u32, lambda: f64, q: &Potential) -> Result<SingularSolution> {
    solve(a, lambda, q)?.psi()
}
