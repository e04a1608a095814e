//! Cumulative (running) integrals on a uniform grid.
//!
//! Each panel `[x_i, x_{i+1}]` is integrated against the degree-5 Lagrange
//! interpolant through six neighbouring nodes, optionally multiplied by a
//! power weight `t^r`. The weighted moments are evaluated with Gauss–Legendre
//! on sub-panels, graded near the origin where `t^r` varies fastest, so that
//! singular weights such as `t^{-2a}` are integrated accurately on every
//! panel except `[0, h]`.

use super::grid::Grid;

const STENCIL: usize = 6;

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Per-panel quadrature weights for `∫ t^r f(t) dt`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    power: i32,
    starts: Vec<usize>,
    weights: Vec<[f64; STENCIL]>,
}

fn lagrange(sigma: f64, start: usize) -> [f64; STENCIL] {
    let mut out = [0.0; STENCIL];
    for (j, o) in out.iter_mut().enumerate() {
        let sj = (start + j) as f64;
        let mut num = 1.0;
        let mut den = 1.0;
        for k in 0..STENCIL {
            if k != j {
                let sk = (start + k) as f64;
                num *= sigma - sk;
                den *= sj - sk;
            }
        }
        *o = num / den;
    }
    out
}

fn sub_panels(panel: usize, power: i32) -> usize {
    let r = power.unsigned_abs() as usize;
    let k = if panel == 0 {
        1 + r / 4
    } else if power < 0 {
        // t^r with r < 0 is far from polynomial on the first panels.
        (4 * r).div_ceil(panel)
    } else {
        r.div_ceil(2 * panel)
    };
    k.clamp(1, 256)
}

impl PanelRule {
    /// Weight `t^power`. For negative powers the panel `[0, h]` is singular
    /// and its weights are left as NaN; use only suffix sums that stop at
    /// node 1.
    pub fn power(grid: &Grid, power: i32) -> Self {
        let n = grid.n_points();
        let h = grid.h();
        let panels = n - 1;
        let scale = h.powi(power + 1);
        let mut starts = Vec::with_capacity(panels);
        let mut weights = Vec::with_capacity(panels);
        for i in 0..panels {
            let start = i.saturating_sub(2).min(n - STENCIL);
            starts.push(start);
            if i == 0 && power < 0 {
                weights.push([f64::NAN; STENCIL]);
                continue;
            }
            let k = sub_panels(i, power);
            let width = 1.0 / k as f64;
            let mut w = [0.0; STENCIL];
            for s in 0..k {
                let a = i as f64 + s as f64 * width;
                let half = 0.5 * width;
                let mid = a + half;
                for (node, gw) in GL_NODES.iter().zip(GL_WEIGHTS) {
                    let sigma = mid + half * node;
                    let rho = if power == 0 { 1.0 } else { sigma.powi(power) };
                    let l = lagrange(sigma, start);
                    for j in 0..STENCIL {
                        w[j] += gw * half * rho * l[j];
                    }
                }
            }
            for wj in &mut w {
                *wj *= scale;
            }
            weights.push(w);
        }
        Self {
            power,
            starts,
            weights,
        }
    }

    pub fn unit(grid: &Grid) -> Self {
        Self::power(grid, 0)
    }

    pub fn weight_power(&self) -> i32 {
        self.power
    }

    fn panel(&self, i: usize, f: &[f64]) -> f64 {
        let s = self.starts[i];
        self.weights[i]
            .iter()
            .zip(&f[s..s + STENCIL])
            .map(|(w, v)| w * v)
            .sum()
    }

    /// `out[i] = ∫_0^{x_i} t^r f(t) dt`. Requires a non-negative power.
    pub fn prefix(&self, f: &[f64]) -> Vec<f64> {
        assert!(
            self.power >= 0,
            "prefix integrals need an integrable weight"
        );
        let n = f.len();
        let mut out = vec![0.0; n];
        for i in 0..n - 1 {
            out[i + 1] = out[i] + self.panel(i, f);
        }
        out
    }

    /// `out[i] = ∫_{x_i}^1 t^r f(t) dt`.
    ///
    /// For negative powers `out[0]` is NaN and `f[0]` may be any finite
    /// placeholder: stencils of the nonsingular panels still read it, so the
    /// caller must supply the limiting value of the smooth factor there.
    pub fn suffix(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let mut out = vec![0.0; n];
        for i in (0..n - 1).rev() {
            out[i] = out[i + 1] + self.panel(i, f);
        }
        out
    }
}
