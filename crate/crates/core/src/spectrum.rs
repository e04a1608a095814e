//! Dirichlet eigenvalues, normalised eigenfunctions, terminal velocities,
//! their gradients and the dual fields `V_n`, `W_n`.
//!
//! Eigenvalues are located by Sturm oscillation: the number of sign changes
//! of `phi(., lambda)` on `(0, 1]` equals the number of eigenvalues below
//! `lambda`. Counting brackets every mode exactly once, then a bracketed
//! root solve on `lambda -> phi(1, lambda)` finishes it.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{check_order, FundamentalPair};
use crate::error::{Error, Result};
use crate::numerics::{bracket_root, integrate, GridFn, RealSeq};
use crate::solutions::{solve, solve_regular, Potential, RegularSolution};

const MAX_WIDENINGS: usize = 60;
const ROOT_RTOL: f64 = 1e-13;

/// `(n + a/2)^2 pi^2 + mean - a(a+1)`.
pub fn asymptotic_eigenvalue(a: u32, n: usize, mean: f64) -> f64 {
    let k = n as f64 + a as f64 / 2.0;
    k * k * PI * PI + mean - (a * (a + 1)) as f64
}

fn sign_changes(v: &[f64]) -> usize {
    let mut count = 0;
    let mut prev = 0.0;
    for &x in v {
        if x != 0.0 {
            if prev != 0.0 && (x > 0.0) != (prev > 0.0) {
                count += 1;
            }
            prev = x;
        }
    }
    count
}

/// Number of Dirichlet eigenvalues strictly below `lambda`.
pub fn count_below(a: u32, lambda: f64, q: &Potential) -> Result<usize> {
    let reg = solve_regular(a, lambda, q)?;
    Ok(sign_changes(&reg.phi.values()[1..]))
}

fn phi_at_one(a: u32, lambda: f64, q: &Potential) -> Result<f64> {
    Ok(solve_regular(a, lambda, q)?.phi.last())
}

/// The `n`-th Dirichlet eigenvalue (`n >= 1`).
pub fn eigenvalue(a: u32, q: &Potential, n: usize) -> Result<f64> {
    check_order(a, "eigenvalue")?;
    if n == 0 {
        return Err(Error::InvalidArgument("mode index starts at 1".into()));
    }
    let centre = asymptotic_eigenvalue(a, n, q.mean());
    let half = 0.6 * (2 * n as u32 + a) as f64 * PI * PI;
    let (mut lo, mut hi) = (centre - half, centre + half);

    let mut step = half;
    let mut count_lo = count_below(a, lo, q)?;
    let mut widenings = 0;
    while count_lo > n - 1 {
        step *= 2.0;
        lo -= step;
        count_lo = count_below(a, lo, q)?;
        widenings += 1;
        if widenings > MAX_WIDENINGS {
            return Err(Error::MissedEigenvalue(format!(
                "no lower bracket for mode {n} (count {count_lo} at {lo})"
            )));
        }
    }
    let mut step = half;
    let mut count_hi = count_below(a, hi, q)?;
    while count_hi < n {
        step *= 2.0;
        hi += step;
        count_hi = count_below(a, hi, q)?;
        widenings += 1;
        if widenings > MAX_WIDENINGS {
            return Err(Error::MissedEigenvalue(format!(
                "no upper bracket for mode {n} (count {count_hi} at {hi})"
            )));
        }
    }
    // Shrink until exactly the n-th eigenvalue lies in (lo, hi].
    while count_lo != n - 1 || count_hi != n {
        let mid = 0.5 * (lo + hi);
        let c = count_below(a, mid, q)?;
        if c >= n {
            hi = mid;
            count_hi = c;
        } else {
            lo = mid;
            count_lo = c;
        }
        if hi - lo <= ROOT_RTOL * hi.abs().max(1.0) {
            return Err(Error::MissedEigenvalue(format!(
                "mode {n}: oscillation count jumps from {count_lo} to {count_hi} near {hi}"
            )));
        }
    }
    let tol = ROOT_RTOL * lo.abs().max(hi.abs()).max(1.0);
    let mut failure = None;
    let bracket = bracket_root(
        |lambda| match phi_at_one(a, lambda, q) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(bracket?.root)
}

/// The `n_modes` smallest eigenvalues, checked to be strictly increasing.
pub fn eigenvalues(a: u32, q: &Potential, n_modes: usize) -> Result<RealSeq> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument(
            "at least one mode is required".into(),
        ));
    }
    let values: Vec<f64> = (1..=n_modes)
        .into_par_iter()
        .map(|n| eigenvalue(a, q, n))
        .collect::<Result<_>>()?;
    for (k, w) in values.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::MissedEigenvalue(format!(
                "eigenvalues {} and {} are not increasing: {} >= {}",
                k + 1,
                k + 2,
                w[0],
                w[1]
            )));
        }
    }
    RealSeq::new(values)
}

type ZeroKey = (u32, usize, usize);

fn zero_cache() -> &'static Mutex<HashMap<ZeroKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<ZeroKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `lambda_{a,n}(0)` on the grid of `q`, computed once and cached.
pub fn zero_potential_eigenvalue(a: u32, q: &Potential, n: usize) -> Result<f64> {
    let key = (a, q.grid().n_points(), n);
    if let Some(&v) = zero_cache().lock().expect("zero-potential cache").get(&key) {
        return Ok(v);
    }
    let v = eigenvalue(a, &Potential::zero(q.grid()), n)?;
    zero_cache()
        .lock()
        .expect("zero-potential cache")
        .insert(key, v);
    Ok(v)
}

fn l2_norm(f: &GridFn) -> f64 {
    integrate(&f.map(|v| v * v)).sqrt()
}

/// `phi(., lambda_n) / ||phi(., lambda_n)||`, positive near the origin.
pub fn eigenfunction(a: u32, q: &Potential, lambda_n: f64) -> Result<GridFn> {
    let reg = solve_regular(a, lambda_n, q)?;
    Ok(reg.phi.scale(1.0 / l2_norm(&reg.phi)))
}

fn kappa_from(a: u32, q: &Potential, reg: &RegularSolution, n: usize) -> Result<f64> {
    let dphi = reg.phi_prime.last();
    if dphi.abs() < 1e-12 {
        return Err(Error::DegenerateEigenvalue { value: dphi.abs() });
    }
    let lambda0 = zero_potential_eigenvalue(a, q, n)?;
    let reference = FundamentalPair::new(a, lambda0)?.u_prime(1.0);
    Ok((dphi / reference).abs().ln())
}

/// `kappa_n = ln |phi'(1, lambda_n(q), q) / u'(1, lambda_n(0))|`.
pub fn terminal_velocity(a: u32, q: &Potential, lambda_n: f64, n: usize) -> Result<f64> {
    let reg = solve_regular(a, lambda_n, q)?;
    kappa_from(a, q, &reg, n)
}

/// Everything attached to one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenData {
    pub n: usize,
    pub lambda: f64,
    /// Normalised eigenfunction.
    pub g: GridFn,
    pub g_prime: GridFn,
    pub kappa: f64,
    /// `g^2`.
    pub grad_lambda: GridFn,
    /// `-a_n + g^2 int a_n`.
    pub grad_kappa: GridFn,
    /// `a_n = phi psi` at the eigenvalue.
    pub a_fn: GridFn,
    pub a_fn_prime: GridFn,
    /// `V_n = 2 (g^2)'`.
    pub v_field: GridFn,
    /// `W_n = -2 (grad kappa_n)'`.
    pub w_field: GridFn,
}

/// Builds the mode record at a known eigenvalue.
pub fn eigen_data_at(a: u32, q: &Potential, n: usize, lambda: f64) -> Result<EigenData> {
    let pair = solve(a, lambda, q)?;
    let psi = pair.psi()?;
    let grid = q.grid().clone();
    let x = grid.x();
    let ai = a as i32;
    let reg = &pair.regular;

    let norm = l2_norm(&reg.phi);
    let g = reg.phi.scale(1.0 / norm);
    let g_prime = reg.phi_prime.scale(1.0 / norm);
    let kappa = kappa_from(a, q, reg, n)?;

    // a_n = x phi^ (x^a psi), a_n' = (phi'/x^a)(x^a psi) + phi^ (x^{a+1} psi').
    let s = psi.scaled.values();
    let sp = psi.scaled_prime.values();
    let phat = reg.scaled.values();
    let mut a_vals = vec![0.0; x.len()];
    let mut ap_vals = vec![0.0; x.len()];
    ap_vals[0] = s[0] * phat[0];
    for i in 1..x.len() {
        a_vals[i] = x[i] * phat[i] * s[i];
        ap_vals[i] = reg.phi_prime[i] / x[i].powi(ai) * s[i] + phat[i] * sp[i];
    }
    let a_fn = GridFn::new(&grid, a_vals)?;
    let a_fn_prime = GridFn::new(&grid, ap_vals)?;
    let mean_a = integrate(&a_fn);

    let grad_lambda = g.map(|v| v * v);
    let grad_kappa = grad_lambda.scale(mean_a).axpy(-1.0, &a_fn)?;
    let v_field = (&g * &g_prime).scale(4.0);
    let w_field = a_fn_prime.scale(2.0).axpy(-mean_a, &v_field)?;
    Ok(EigenData {
        n,
        lambda,
        g,
        g_prime,
        kappa,
        grad_lambda,
        grad_kappa,
        a_fn,
        a_fn_prime,
        v_field,
        w_field,
    })
}

/// Mode record for the `n`-th eigenvalue.
pub fn eigen_data(a: u32, q: &Potential, n: usize) -> Result<EigenData> {
    let lambda = eigenvalue(a, q, n)?;
    eigen_data_at(a, q, n, lambda)
}

/// Mode records `1..=n_modes`, computed in parallel.
pub fn modes(a: u32, q: &Potential, n_modes: usize) -> Result<Vec<EigenData>> {
    let lambdas = eigenvalues(a, q, n_modes)?;
    lambdas
        .as_slice()
        .par_iter()
        .enumerate()
        .map(|(k, &lambda)| eigen_data_at(a, q, k + 1, lambda))
        .collect()
}

pub fn grad_lambda(a: u32, q: &Potential, n: usize) -> Result<GridFn> {
    Ok(eigen_data(a, q, n)?.grad_lambda)
}

pub fn grad_kappa(a: u32, q: &Potential, n: usize) -> Result<GridFn> {
    Ok(eigen_data(a, q, n)?.grad_kappa)
}

pub fn a_fn(a: u32, q: &Potential, n: usize) -> Result<GridFn> {
    Ok(eigen_data(a, q, n)?.a_fn)
}

/// `(V_n, W_n)`.
pub fn dual_fields(a: u32, q: &Potential, n: usize) -> Result<(GridFn, GridFn)> {
    let d = eigen_data(a, q, n)?;
    Ok((d.v_field, d.w_field))
}

/// Truncated spectral data `(mean, lambda~, n kappa)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub a: u32,
    #[serde(rename = "N")]
    pub n_modes: usize,
    pub mean: f64,
    pub lambda_tilde: RealSeq,
    pub n_kappa: RealSeq,
}

impl SpectralData {
    /// `lambda_n` recovered from `lambda~_n`.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        asymptotic_eigenvalue(self.a, n, self.mean) + self.lambda_tilde.get(n)
    }

    /// The `2N + 1` coordinates `(mean, lambda~, n kappa)` in one vector.
    pub fn coordinates(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.n_modes + 1);
        v.push(self.mean);
        v.extend(self.lambda_tilde.iter());
        v.extend(self.n_kappa.iter());
        v
    }
}

fn spectral_from(a: u32, q: &Potential, lambdas: &RealSeq, kappas: &[f64]) -> Result<SpectralData> {
    let n_modes = lambdas.len();
    let lt = (1..=n_modes)
        .map(|n| lambdas.get(n) - asymptotic_eigenvalue(a, n, q.mean()))
        .collect();
    let nk = kappas
        .iter()
        .enumerate()
        .map(|(k, v)| (k + 1) as f64 * v)
        .collect();
    Ok(SpectralData {
        a,
        n_modes,
        mean: q.mean(),
        lambda_tilde: RealSeq::new(lt)?,
        n_kappa: RealSeq::new(nk)?,
    })
}

/// The spectral map truncated at `n_modes`.
pub fn spectral_map(a: u32, q: &Potential, n_modes: usize) -> Result<SpectralData> {
    let lambdas = eigenvalues(a, q, n_modes)?;
    let kappas: Vec<f64> = lambdas
        .as_slice()
        .par_iter()
        .enumerate()
        .map(|(k, &lambda)| terminal_velocity(a, q, lambda, k + 1))
        .collect::<Result<_>>()?;
    spectral_from(a, q, &lambdas, &kappas)
}

/// Spectral data from already computed mode records.
pub fn spectral_data_from_modes(
    a: u32,
    q: &Potential,
    modes: &[EigenData],
) -> Result<SpectralData> {
    let lambdas = RealSeq::new(modes.iter().map(|m| m.lambda).collect())?;
    let kappas: Vec<f64> = modes.iter().map(|m| m.kappa).collect();
    spectral_from(a, q, &lambdas, &kappas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid;

    #[test]
    fn free_spectrum_a0() {
        let grid = Grid::default_grid();
        let ev = eigenvalues(0, &Potential::zero(&grid), 3).unwrap();
        for n in 1..=3 {
            let exact = (n * n) as f64 * PI * PI;
            assert!((ev.get(n) - exact).abs() / exact < 1e-7);
        }
    }

    #[test]
    fn counting_matches_spectrum() {
        let grid = Grid::default_grid();
        let q = Potential::zero(&grid);
        assert_eq!(count_below(0, 5.0, &q).unwrap(), 0);
        assert_eq!(count_below(0, 20.0, &q).unwrap(), 1);
        assert_eq!(count_below(0, 90.0, &q).unwrap(), 3);
        assert_eq!(count_below(0, -500.0, &q).unwrap(), 0);
    }
}
