//! The truncated spectral map, its differential and explicit inverse
//! differential, Newton recovery of a potential from spectral data, and the
//! tangent/normal fields of the isospectral set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{inner, Grid, GridFn, RealSeq};
use crate::solutions::Potential;
use crate::spectrum::{modes, spectral_data_from_modes, spectral_map, EigenData, SpectralData};

/// Spectral data to be matched. Same layout and JSON schema as
/// [`SpectralData`].
pub type SpectralTarget = SpectralData;

/// `(mean, lambda~, n kappa)` as three coordinates blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coordinates {
    pub mean: f64,
    pub lambda_tilde: RealSeq,
    pub n_kappa: RealSeq,
}

impl Coordinates {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.mean];
        v.extend(self.lambda_tilde.iter());
        v.extend(self.n_kappa.iter());
        v
    }
}

/// `q -> (mean, lambda~, n kappa)`, truncated at `n_modes`.
pub fn forward(a: u32, q: &Potential, n_modes: usize) -> Result<SpectralData> {
    spectral_map(a, q, n_modes)
}

/// Mode data at one potential, enough to linearise the spectral map there.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub a: u32,
    pub modes: Vec<EigenData>,
    pub data: SpectralData,
    grid: Grid,
}

pub fn linearize(a: u32, q: &Potential, n_modes: usize) -> Result<Linearization> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument("at least one mode is needed".into()));
    }
    let m = modes(a, q, n_modes)?;
    let data = spectral_data_from_modes(a, q, &m)?;
    Ok(Linearization {
        a,
        modes: m,
        data,
        grid: q.grid().clone(),
    })
}

impl Linearization {
    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    fn check_len(&self, name: &str, s: &RealSeq) -> Result<()> {
        if s.len() != self.n_modes() {
            return Err(Error::InvalidArgument(format!(
                "{name} has {} entries, expected {}",
                s.len(),
                self.n_modes()
            )));
        }
        Ok(())
    }

    /// `(<1, v>, (<g_n^2 - 1, v>), (<n grad kappa_n, v>))`.
    pub fn apply(&self, v: &GridFn) -> Result<Coordinates> {
        self.grid.check(v.grid())?;
        let one = self.grid.constant(1.0);
        let mean = inner(&one, v)?;
        let mut lt = Vec::with_capacity(self.n_modes());
        let mut nk = Vec::with_capacity(self.n_modes());
        for m in &self.modes {
            lt.push(inner(&m.grad_lambda, v)? - mean);
            nk.push(m.n as f64 * inner(&m.grad_kappa, v)?);
        }
        Ok(Coordinates {
            mean,
            lambda_tilde: RealSeq::new(lt)?,
            n_kappa: RealSeq::new(nk)?,
        })
    }

    /// `eta0 + Σ eta_n W_n + Σ (xi_n / n) V_n`.
    pub fn inverse(&self, eta0: f64, eta: &RealSeq, xi: &RealSeq) -> Result<GridFn> {
        self.check_len("eta", eta)?;
        self.check_len("xi", xi)?;
        let mut out = self.grid.constant(eta0);
        for (k, m) in self.modes.iter().enumerate() {
            out = out.axpy(eta.get(k + 1), &m.w_field)?;
            out = out.axpy(xi.get(k + 1) / m.n as f64, &m.v_field)?;
        }
        Ok(out)
    }

    /// Tangent field `Σ (xi_n / n) V_n` of the isospectral set.
    pub fn tangent(&self, xi: &RealSeq) -> Result<GridFn> {
        self.check_len("xi", xi)?;
        let mut out = self.grid.zeros();
        for (k, m) in self.modes.iter().enumerate() {
            out = out.axpy(xi.get(k + 1) / m.n as f64, &m.v_field)?;
        }
        Ok(out)
    }

    /// Normal field `eta0 + Σ eta_n (g_n^2 - 1)`.
    pub fn normal(&self, eta0: f64, eta: &RealSeq) -> Result<GridFn> {
        self.check_len("eta", eta)?;
        let mut out = self.grid.constant(eta0);
        for (k, m) in self.modes.iter().enumerate() {
            let c = eta.get(k + 1);
            out = out.axpy(c, &m.grad_lambda)?.map(|v| v - c);
        }
        Ok(out)
    }

    /// Pairings of the rows `(1, grad lambda~_n, n grad kappa_n)` with the
    /// columns `(1, W_n, V_n / n)`. The identity up to quadrature error.
    pub fn pairing_matrix(&self) -> Result<Vec<Vec<f64>>> {
        let n = self.n_modes();
        let mut columns = Vec::with_capacity(2 * n + 1);
        columns.push(self.grid.constant(1.0));
        columns.extend(self.modes.iter().map(|m| m.w_field.clone()));
        columns.extend(self.modes.iter().map(|m| m.v_field.scale(1.0 / m.n as f64)));
        columns
            .iter()
            .map(|c| Ok(self.apply(c)?.to_vec()))
            .collect::<Result<Vec<_>>>()
            .map(|cols| {
                // cols[j][i] is row i of column j; transpose to rows.
                (0..2 * n + 1)
                    .map(|i| cols.iter().map(|c| c[i]).collect())
                    .collect()
            })
    }
}

pub fn differential_apply(
    a: u32,
    q: &Potential,
    v: &GridFn,
    n_modes: usize,
) -> Result<Coordinates> {
    linearize(a, q, n_modes)?.apply(v)
}

pub fn inverse_differential_apply(
    a: u32,
    q: &Potential,
    eta0: f64,
    eta: &RealSeq,
    xi: &RealSeq,
) -> Result<GridFn> {
    if eta.len() != xi.len() {
        return Err(Error::InvalidArgument(format!(
            "eta and xi lengths differ ({} vs {})",
            eta.len(),
            xi.len()
        )));
    }
    linearize(a, q, eta.len())?.inverse(eta0, eta, xi)
}

pub fn iso_tangent(a: u32, q: &Potential, xi: &RealSeq) -> Result<GridFn> {
    linearize(a, q, xi.len())?.tangent(xi)
}

pub fn iso_normal(a: u32, q: &Potential, eta0: f64, eta: &RealSeq) -> Result<GridFn> {
    linearize(a, q, eta.len())?.normal(eta0, eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryOptions {
    /// Stop once the Euclidean data residual drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Keep the linearisation of the initial potential for every step.
    pub frozen: bool,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 30,
            frozen: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveryReport {
    pub iterations: usize,
    /// Residual of the starting potential first, then one entry per step.
    pub data_residual_history: Vec<f64>,
    /// Step length actually taken at each iteration (1 or halved).
    pub step_lengths: Vec<f64>,
    pub converged: bool,
    #[serde(skip)]
    pub final_potential: Potential,
}

impl RecoveryReport {
    pub fn final_residual(&self) -> f64 {
        *self
            .data_residual_history
            .last()
            .expect("history starts non-empty")
    }
}

fn check_target(a: u32, target: &SpectralTarget) -> Result<()> {
    let n = target.n_modes;
    if target.a != a {
        return Err(Error::InvalidArgument(format!(
            "target is for a = {}, recovery asked for a = {a}",
            target.a
        )));
    }
    if n == 0 || target.lambda_tilde.len() != n || target.n_kappa.len() != n {
        return Err(Error::InvalidArgument(format!(
            "target sequences must both have N = {n} entries"
        )));
    }
    if !target.mean.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    Ok(())
}

fn residual(target: &SpectralTarget, data: &SpectralData) -> (f64, f64, RealSeq, RealSeq) {
    let n = target.n_modes;
    let dm = target.mean - data.mean;
    let dl: Vec<f64> = (1..=n)
        .map(|k| target.lambda_tilde.get(k) - data.lambda_tilde.get(k))
        .collect();
    let dk: Vec<f64> = (1..=n)
        .map(|k| target.n_kappa.get(k) - data.n_kappa.get(k))
        .collect();
    let norm = (dm * dm + dl.iter().chain(&dk).map(|v| v * v).sum::<f64>()).sqrt();
    (norm, dm, RealSeq::from(dl), RealSeq::from(dk))
}

/// Newton iteration `q <- q + (d F(q))^{-1} (target - F(q))` with the explicit
/// inverse differential. A step that increases the residual is halved once;
/// if the halved step still increases it, the iteration stops and the report
/// is returned unconverged.
pub fn recover(
    a: u32,
    target: &SpectralTarget,
    q0: &Potential,
    options: RecoveryOptions,
) -> Result<RecoveryReport> {
    check_target(a, target)?;
    if !(options.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let n = target.n_modes;
    let mut q = q0.clone();
    let mut lin = linearize(a, &q, n)?;
    let frozen = options.frozen.then(|| lin.clone());
    let (mut res, mut dm, mut dl, mut dk) = residual(target, &lin.data);
    let mut history = vec![res];
    let mut steps = Vec::new();
    let mut converged = res < options.tol;
    while !converged && steps.len() < options.max_iter {
        let basis = frozen.as_ref().unwrap_or(&lin);
        let step = basis.inverse(dm, &dl, &dk)?;
        let mut accepted = None;
        for t in [1.0, 0.5] {
            let candidate = q.perturbed(t, &step)?;
            // A failed forward solve counts as an increase.
            if let Ok(l) = linearize(a, &candidate, n) {
                let r = residual(target, &l.data);
                if r.0 < res {
                    accepted = Some((t, candidate, l, r));
                    break;
                }
            }
        }
        let Some((t, candidate, l, r)) = accepted else {
            break;
        };
        q = candidate;
        lin = l;
        (res, dm, dl, dk) = r;
        history.push(res);
        steps.push(t);
        converged = res < options.tol;
    }
    Ok(RecoveryReport {
        iterations: steps.len(),
        data_residual_history: history,
        step_lengths: steps,
        converged,
        final_potential: q,
    })
}
