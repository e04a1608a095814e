#![allow(dead_code)]

use singular_sl::bessel::FundamentalPair;
use singular_sl::numerics::{derivative, inner, Grid, GridFn};
use singular_sl::solutions::Potential;
use singular_sl::spectrum::EigenData;

pub const GL10_NODES: [f64; 10] = [
    -0.973_906_528_517_171_7,
    -0.865_063_366_688_984_5,
    -0.679_409_568_299_024_4,
    -0.433_395_394_129_247_2,
    -0.148_874_338_981_631_2,
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
pub const GL10_WEIGHTS: [f64; 10] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_35,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Four-point Lagrange interpolation of nodal values at `t`.
pub fn interp_cubic(grid: &Grid, values: &[f64], t: f64) -> f64 {
    let h = grid.h();
    let n = values.len();
    let i = ((t / h).floor() as usize).min(n - 2);
    let start = i.saturating_sub(1).min(n - 4);
    let mut out = 0.0;
    for j in 0..4 {
        let xj = (start + j) as f64 * h;
        let mut l = 1.0;
        for k in 0..4 {
            if k != j {
                let xk = (start + k) as f64 * h;
                l *= (t - xk) / (xj - xk);
            }
        }
        out += l * values[start + j];
    }
    out
}

/// Gauss points and weights of every panel, in panel order.
pub fn panel_points(grid: &Grid) -> Vec<[(f64, f64); 10]> {
    let h = grid.h();
    (0..grid.n_points() - 1)
        .map(|p| {
            let mid = (p as f64 + 0.5) * h;
            let mut pts = [(0.0, 0.0); 10];
            for k in 0..10 {
                pts[k] = (mid + 0.5 * h * GL10_NODES[k], 0.5 * h * GL10_WEIGHTS[k]);
            }
            pts
        })
        .collect()
}

/// `phi(x_i) - u(x_i) - int_0^{x_i} G(x_i, t) q(t) phi(t) dt` at the given
/// nodes, with `phi` interpolated from its nodal values.
pub fn regular_residual(
    a: u32,
    lambda: f64,
    grid: &Grid,
    q: impl Fn(f64) -> f64,
    phi: &[f64],
    nodes: &[usize],
) -> Vec<f64> {
    let pair = FundamentalPair::new(a, lambda).unwrap();
    let panels = panel_points(grid);
    // u(t), v(t) q(t) phi(t) at all Gauss points.
    let data: Vec<[(f64, f64, f64); 10]> = panels
        .iter()
        .map(|pts| {
            let mut d = [(0.0, 0.0, 0.0); 10];
            for (k, &(t, w)) in pts.iter().enumerate() {
                let e = pair.eval(t);
                let qphi = q(t) * interp_cubic(grid, phi, t);
                d[k] = (w * e.u * qphi, w * e.v * qphi, 0.0);
            }
            d
        })
        .collect();
    nodes
        .iter()
        .map(|&i| {
            let x = grid.x()[i];
            let e = pair.eval(x);
            if i == 0 {
                return phi[0] - e.u;
            }
            let mut integral = 0.0;
            for panel in &data[..i] {
                for &(uq, vq, _) in panel {
                    integral += e.v * uq - e.u * vq;
                }
            }
            phi[i] - e.u - integral
        })
        .collect()
}

/// `x^a (psi~(x) - v(x) + int_x^1 G(x, t) q(t) psi~(t) dt)` at the given
/// nodes (all positive), with `x^a psi~` interpolated from its nodal values.
pub fn singular_residual_scaled(
    a: u32,
    lambda: f64,
    grid: &Grid,
    q: impl Fn(f64) -> f64,
    psi_scaled: &[f64],
    nodes: &[usize],
) -> Vec<f64> {
    let pair = FundamentalPair::new(a, lambda).unwrap();
    let panels = panel_points(grid);
    let ai = a as i32;
    let data: Vec<[(f64, f64); 10]> = panels
        .iter()
        .map(|pts| {
            let mut d = [(0.0, 0.0); 10];
            for (k, &(t, w)) in pts.iter().enumerate() {
                let e = pair.eval(t);
                let qpsi = q(t) * interp_cubic(grid, psi_scaled, t) / t.powi(ai);
                d[k] = (w * e.u * qpsi, w * e.v * qpsi);
            }
            d
        })
        .collect();
    nodes
        .iter()
        .map(|&i| {
            assert!(i > 0);
            let x = grid.x()[i];
            let e = pair.eval(x);
            let mut integral = 0.0;
            for panel in &data[i..] {
                for &(uq, vq) in panel {
                    integral += e.v * uq - e.u * vq;
                }
            }
            let xa = x.powi(ai);
            psi_scaled[i] - e.v_scaled + xa * integral
        })
        .collect()
}

pub fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Worst deviation of each of the six pairing identities over all `n, m`
/// in `modes`, in the order
/// `<g_n^2,(g_m^2)'> = 0`, `<a_n,(g_m^2)'> = -d/2`, `<a_n,a_m'> = 0`,
/// `<grad k_n,(grad k_m)'> = 0`, `<grad k_n,(grad l_m)'> = d/2`,
/// `<grad l_n,(grad l_m)'> = 0`.
///
/// Derivatives are taken by finite differences on the grid, independently
/// of the analytic derivatives the library keeps.
pub fn pairing_errors(modes: &[EigenData]) -> [f64; 6] {
    let d_g2: Vec<GridFn> = modes.iter().map(|m| derivative(&m.grad_lambda)).collect();
    let d_a: Vec<GridFn> = modes.iter().map(|m| derivative(&m.a_fn)).collect();
    let d_k: Vec<GridFn> = modes.iter().map(|m| derivative(&m.grad_kappa)).collect();
    let mut err = [0.0f64; 6];
    for (i, n) in modes.iter().enumerate() {
        for j in 0..modes.len() {
            let d = if i == j { 0.5 } else { 0.0 };
            let vals = [
                inner(&n.grad_lambda, &d_g2[j]).unwrap(),
                inner(&n.a_fn, &d_g2[j]).unwrap() + d,
                inner(&n.a_fn, &d_a[j]).unwrap(),
                inner(&n.grad_kappa, &d_k[j]).unwrap(),
                inner(&n.grad_kappa, &d_g2[j]).unwrap() - d,
                inner(&n.grad_lambda, &d_g2[j]).unwrap(),
            ];
            for k in 0..6 {
                err[k] = err[k].max(vals[k].abs());
            }
        }
    }
    err
}

/// Central difference `(f(q + eps v) - f(q - eps v)) / (2 eps)`.
pub fn central_difference(
    q: &Potential,
    v: &GridFn,
    eps: f64,
    f: impl Fn(&Potential) -> f64,
) -> f64 {
    let plus = f(&q.perturbed(eps, v).unwrap());
    let minus = f(&q.perturbed(-eps, v).unwrap());
    (plus - minus) / (2.0 * eps)
}
