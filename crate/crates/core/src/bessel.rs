//! Riccati–Bessel functions `j_a(z) = sqrt(pi z / 2) J_{a+1/2}(z)` and
//! `eta_a(z) = (-1)^a sqrt(pi z / 2) J_{-a-1/2}(z)`, so that `j_0 = sin` and
//! `eta_0 = cos`, together with the fundamental system `u`, `v` of
//! `-y'' + a(a+1)/x^2 y = lambda y`.
//!
//! Internally everything is written in terms of `s = lambda x^2` and the
//! regular rescalings
//!
//! * `jhat_a = Q_a / x^{a+1}` where `Q_a(x) = omega^{-(a+1)} j_a(omega x)`,
//! * `r_a = x^a P_a` where `P_a(x) = omega^a eta_a(omega x)`,
//!
//! which are entire functions of `s`. This covers `lambda <= 0` (hyperbolic
//! and polynomial cases) and the origin without special branches.

use crate::error::{Error, Result};
use crate::numerics::{integrate, Grid};

/// Largest supported order.
pub const MAX_ORDER: u32 = 20;

const SERIES_MAX_TERMS: usize = 2000;

/// Non-negative integer order `a` of the inverse-square singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BesselOrder(u32);

impl BesselOrder {
    pub fn new(a: u32) -> Result<Self> {
        check_order(a, "bessel")?;
        Ok(Self(a))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

pub(crate) fn check_order(a: u32, what: &'static str) -> Result<()> {
    if a > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            order: a,
            what,
            supported: "0..=20",
        });
    }
    Ok(())
}

/// `(2k - 1)!!`, with `(-1)!! = 1`.
pub fn odd_double_factorial(k: u32) -> f64 {
    (1..=k).map(|i| (2 * i - 1) as f64).product()
}

/// Below this argument the power series is used for `j_a`.
pub fn z_switch(a: u32) -> f64 {
    (a as f64).max(1.0)
}

/// `cos(sqrt s)` and `sin(sqrt s)/sqrt s`, continued to `s <= 0`.
fn cos_sinc(s: f64) -> (f64, f64) {
    if s > 0.0 {
        let w = s.sqrt();
        (w.cos(), if w < 1e-8 { 1.0 - s / 6.0 } else { w.sin() / w })
    } else if s < 0.0 {
        let m = (-s).sqrt();
        (
            m.cosh(),
            if m < 1e-8 {
                1.0 - s / 6.0
            } else {
                m.sinh() / m
            },
        )
    } else {
        (1.0, 1.0)
    }
}

/// Power series of `jhat_a(s) = (1/(2a+1)!!) sum_k (-s/2)^k / (k! prod_{i=1..k} (2a+2i+1))`.
fn jhat_series(a: u32, s: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let a2 = 2.0 * a as f64;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= -0.5 * s / (kf * (a2 + 2.0 * kf + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum / odd_double_factorial(a + 1)
}

/// Upward recurrence for `(j_{a-1}(z), j_a(z))`, `z > 0`.
fn j_pair_recurrence(a: u32, z: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (z.cos(), z.sin());
    for k in 0..a {
        let next = (2 * k + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// `(jhat_{a-1}, jhat_a)` at `s`; `jhat_{-1} = cos(sqrt s)`.
fn jhat_pair(a: u32, s: f64) -> (f64, f64) {
    if s > 0.0 {
        let z = s.sqrt();
        if z >= z_switch(a) {
            let (jm, j) = j_pair_recurrence(a, z);
            return (jm / z.powi(a as i32), j / z.powi(a as i32 + 1));
        }
    }
    let jm = if a == 0 {
        cos_sinc(s).0
    } else {
        jhat_series(a - 1, s)
    };
    (jm, jhat_series(a, s))
}

/// `(r_{a-1}, r_a)` at `s` by the upward recurrence
/// `r_{k+1} = (2k+1) r_k - s r_{k-1}`, from `r_0 = cos`, `r_{-1} = -sinc`.
fn r_pair(a: u32, s: f64) -> (f64, f64) {
    let (c, sinc) = cos_sinc(s);
    let (mut prev, mut cur) = (-sinc, c);
    for k in 0..a {
        let next = (2 * k + 1) as f64 * cur - s * prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Regular rescaled quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    /// `Q_a / x^{a+1}`.
    pub jhat: f64,
    /// `Q_a' / x^a`.
    pub jhat_deriv: f64,
    /// `x^a P_a`.
    pub r: f64,
    /// `x^{a+1} P_a'`.
    pub r_deriv: f64,
}

fn scaled(a: u32, s: f64) -> Scaled {
    let (jm, j) = jhat_pair(a, s);
    let (rm, r) = r_pair(a, s);
    let af = a as f64;
    Scaled {
        jhat: j,
        jhat_deriv: jm - af * j,
        r,
        r_deriv: s * rm - af * r,
    }
}

fn even_sign(a: u32, odd: bool) -> f64 {
    if odd && a % 2 == 0 || !odd && a % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `j_a(z)`.
pub fn j(a: u32, z: f64) -> Result<f64> {
    check_order(a, "j")?;
    // j_a(-z) = (-1)^{a+1} j_a(z)
    let sign = if z < 0.0 { even_sign(a, true) } else { 1.0 };
    let z = z.abs();
    Ok(sign * z.powi(a as i32 + 1) * jhat_pair(a, z * z).1)
}

/// `eta_a(z)`, `z != 0`.
pub fn eta(a: u32, z: f64) -> Result<f64> {
    check_order(a, "eta")?;
    if z == 0.0 {
        if a == 0 {
            return Ok(1.0);
        }
        return Err(Error::SingularArgument(format!("eta_{a} at z = 0")));
    }
    let sign = if z < 0.0 { even_sign(a, false) } else { 1.0 };
    let z = z.abs();
    Ok(sign * r_pair(a, z * z).1 / z.powi(a as i32))
}

/// `j_a'(z) = j_{a-1}(z) - (a/z) j_a(z)`.
pub fn j_prime(a: u32, z: f64) -> Result<f64> {
    check_order(a, "j_prime")?;
    // derivative of an odd/even function flips parity
    let sign = if z < 0.0 { even_sign(a, false) } else { 1.0 };
    let z = z.abs();
    Ok(sign * z.powi(a as i32) * scaled(a, z * z).jhat_deriv)
}

/// `eta_a'(z) = eta_{a-1}(z) - (a/z) eta_a(z)`, `z != 0` for `a >= 1`.
pub fn eta_prime(a: u32, z: f64) -> Result<f64> {
    check_order(a, "eta_prime")?;
    if z == 0.0 {
        if a == 0 {
            return Ok(0.0);
        }
        return Err(Error::SingularArgument(format!("eta_{a}' at z = 0")));
    }
    let sign = if z < 0.0 { even_sign(a, true) } else { 1.0 };
    let z = z.abs();
    Ok(sign * scaled(a, z * z).r_deriv / z.powi(a as i32 + 1))
}

/// `Phi_a(z) = j_a(z)^2`.
pub fn phi_cap(a: u32, z: f64) -> Result<f64> {
    Ok(j(a, z)?.powi(2))
}

/// `Psi_a(z) = j_a(z) eta_a(z)`, continuous at `z = 0` with value 0.
pub fn psi_cap(a: u32, z: f64) -> Result<f64> {
    check_order(a, "psi_cap")?;
    let sc = scaled(a, z * z);
    Ok(z * sc.jhat * sc.r)
}

/// `Phi_a'(z) = 2 j_a j_a'`.
pub fn phi_cap_prime(a: u32, z: f64) -> Result<f64> {
    Ok(2.0 * j(a, z)? * j_prime(a, z)?)
}

/// `Psi_a'(z) = j_a' eta_a + j_a eta_a'`, continuous at `z = 0`.
pub fn psi_cap_prime(a: u32, z: f64) -> Result<f64> {
    check_order(a, "psi_cap_prime")?;
    let sc = scaled(a, z * z);
    Ok(sc.jhat_deriv * sc.r + sc.jhat * sc.r_deriv)
}

/// Values of the fundamental system at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalValues {
    pub u: f64,
    pub u_prime: f64,
    /// `+inf` or `-inf` at `x = 0` when `a >= 1`.
    pub v: f64,
    pub v_prime: f64,
    /// `u / x^{a+1}`.
    pub u_scaled: f64,
    /// `x^a v`.
    pub v_scaled: f64,
}

/// The pair `u = (2a+1)!! Q_a`, `v = -P_a / (2a+1)!!` at a fixed real `lambda`.
///
/// `u ~ x^{a+1}` and `x^a v -> -1/(2a+1)` at the origin, and with the
/// convention `W(f, g) = f g' - f' g` one has `W(u, v) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalPair {
    order: BesselOrder,
    lambda: f64,
    dfact: f64,
}

impl FundamentalPair {
    pub fn new(a: u32, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda = {lambda}")));
        }
        Ok(Self {
            order: BesselOrder::new(a)?,
            lambda,
            dfact: odd_double_factorial(a + 1),
        })
    }

    pub fn order(&self) -> u32 {
        self.order.get()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `sqrt(lambda)` for `lambda >= 0`.
    pub fn omega(&self) -> Option<f64> {
        (self.lambda >= 0.0).then(|| self.lambda.sqrt())
    }

    /// Rescaled quantities `Q/x^{a+1}`, `Q'/x^a`, `x^a P`, `x^{a+1} P'`.
    pub fn scaled(&self, x: f64) -> Scaled {
        scaled(self.order(), self.lambda * x * x)
    }

    pub fn eval(&self, x: f64) -> FundamentalValues {
        let a = self.order() as i32;
        let sc = self.scaled(x);
        let xa = x.powi(a);
        let d = self.dfact;
        let (v, v_prime) = if x > 0.0 {
            (-sc.r / xa / d, -sc.r_deriv / (xa * x) / d)
        } else if a == 0 {
            (-sc.r, 0.0)
        } else {
            let inf = -sc.r.signum() * f64::INFINITY;
            (inf, -inf)
        };
        FundamentalValues {
            u: d * xa * x * sc.jhat,
            u_prime: d * xa * sc.jhat_deriv,
            v,
            v_prime,
            u_scaled: d * sc.jhat,
            v_scaled: -sc.r / d,
        }
    }

    pub fn u(&self, x: f64) -> f64 {
        self.eval(x).u
    }

    pub fn v(&self, x: f64) -> f64 {
        self.eval(x).v
    }

    pub fn u_prime(&self, x: f64) -> f64 {
        self.eval(x).u_prime
    }

    pub fn v_prime(&self, x: f64) -> f64 {
        self.eval(x).v_prime
    }

    /// `u v' - u' v`.
    pub fn wronskian_at(&self, x: f64) -> f64 {
        let e = self.eval(x);
        e.u * e.v_prime - e.u_prime * e.v
    }

    /// `G(x, t) = v(x) u(t) - u(x) v(t)`.
    ///
    /// Finite whenever both points are positive; at the origin only the
    /// trivial diagonal value (and every value for `a = 0`) is defined.
    pub fn green(&self, x: f64, t: f64) -> Result<f64> {
        if x == t {
            return Ok(0.0);
        }
        let a = self.order() as i32;
        if a > 0 && (x == 0.0 || t == 0.0) {
            return Err(Error::SingularArgument(format!(
                "green kernel at ({x}, {t}) for a = {a}"
            )));
        }
        // Q(x) P(t) - P(x) Q(t) with the scaled factors.
        let sx = self.scaled(x);
        let st = self.scaled(t);
        let qx = x.powi(a + 1) * sx.jhat;
        let qt = t.powi(a + 1) * st.jhat;
        let term1 = if qx == 0.0 {
            0.0
        } else {
            qx * st.r / t.powi(a)
        };
        let term2 = if qt == 0.0 {
            0.0
        } else {
            qt * sx.r / x.powi(a)
        };
        Ok(term1 - term2)
    }
}

/// `G(x, t)` for `lambda = omega^2`.
pub fn green_kernel(a: u32, omega: f64, x: f64, t: f64) -> Result<f64> {
    FundamentalPair::new(a, omega * omega)?.green(x, t)
}

/// `(int_0^1 j_a(omega t)^2 dt, int_0^1 j_a(omega t) eta_a(omega t) dt)` by
/// quadrature on `grid`.
pub fn bessel_integral_checks(a: u32, omega: f64, grid: &Grid) -> Result<(f64, f64)> {
    check_order(a, "bessel_integral_checks")?;
    let phi = grid.sample(|t| j(a, omega * t).unwrap_or(f64::NAN).powi(2));
    let psi = grid.sample(|t| psi_cap(a, omega * t).unwrap_or(f64::NAN));
    Ok((integrate(&phi), integrate(&psi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // (a, z, j_a(z), eta_a(z)) from 40-digit arithmetic.
    const REFERENCE: [(u32, f64, f64, f64); 11] = [
        (0, 0.7, 0.644_217_687_237_691, 0.764_842_187_284_488_5),
        (1, 0.3, 0.029_730_866_412_192_56, 3.479_975_170_413_36),
        (3, 2.5, 0.259_801_174_256_009_85, 1.991_507_808_133_123_6),
        (5, 0.9, 4.955_327_706_995_115e-5, 1674.523_884_164_741_7),
        (10, 4.0, 2.143_594_630_745_305_3e-4, 962.142_119_519_557_5),
        (10, 10.0, 0.646_051_544_925_642_6, 1.724_536_720_880_578_5),
        (10, 37.0, -0.730_355_756_795_113_6, -0.713_647_911_203_379_4),
        (20, 5.0, 2.713_863_380_396_604e-11, 4_633_975_701.528_772),
        (20, 20.0, 0.766_497_032_796_103_6, 1.868_022_645_018_288),
        (20, 55.0, 0.763_703_555_222_452, -0.703_067_137_395_380_8),
        (7, 120.0, 0.658_457_716_038_767_1, -0.753_912_040_791_090_3),
    ];

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn matches_high_precision_reference() {
        for (a, z, jr, er) in REFERENCE {
            assert!(rel(j(a, z).unwrap(), jr) < 1e-12, "j_{a}({z})");
            assert!(rel(eta(a, z).unwrap(), er) < 1e-12, "eta_{a}({z})");
        }
    }

    #[test]
    fn closed_forms() {
        assert!((j(0, PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((j(1, PI).unwrap() - 1.0).abs() < 1e-14);
        assert!(rel(j(1, 1e-4).unwrap(), 1e-8 / 3.0) < 1e-8);
        assert!((eta(0, PI).unwrap() + 1.0).abs() < 1e-15);
        assert!((eta(1, PI / 2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((eta(0, 2.0 * PI).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(j_prime(0, 0.0).unwrap(), 1.0);
        assert!((j_prime(1, PI).unwrap() + 1.0 / PI).abs() < 1e-14);
        assert!(matches!(eta(2, 0.0), Err(Error::SingularArgument(_))));
        assert!(matches!(j(21, 1.0), Err(Error::UnsupportedOrder { .. })));
    }

    #[test]
    fn products() {
        let z = PI / 4.0;
        assert!((phi_cap(0, z).unwrap() - 0.5).abs() < 1e-15);
        assert!((psi_cap(0, z).unwrap() - 0.5).abs() < 1e-15);
        assert!((phi_cap(1, PI).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(phi_cap(0, 0.0).unwrap(), 0.0);
        for a in 0..6 {
            assert_eq!(psi_cap(a, 0.0).unwrap(), 0.0);
            assert!((psi_cap_prime(a, 0.0).unwrap() - 1.0 / (2 * a + 1) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_arguments_have_parity() {
        for a in 0..5 {
            let z = 3.7;
            let sj = if a % 2 == 0 { -1.0 } else { 1.0 };
            assert!((j(a, -z).unwrap() - sj * j(a, z).unwrap()).abs() < 1e-14);
            assert!((eta(a, -z).unwrap() + sj * eta(a, z).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_centered_difference() {
        let h = 1e-5;
        for a in 0..=5 {
            for k in 0..200 {
                let z = 0.1 + k as f64 * 0.2495;
                let fd = (j(a, z + h).unwrap() - j(a, z - h).unwrap()) / (2.0 * h);
                assert!((j_prime(a, z).unwrap() - fd).abs() < 1e-7, "a={a} z={z}");
                let fd = (eta(a, z + h).unwrap() - eta(a, z - h).unwrap()) / (2.0 * h);
                let scale = 1.0 + eta(a, z).unwrap().abs() / z;
                assert!(
                    (eta_prime(a, z).unwrap() - fd).abs() < 1e-6 * scale,
                    "a={a} z={z}"
                );
            }
        }
    }

    #[test]
    fn green_kernel_a0_is_sine_difference() {
        let w = 3.3;
        for &(x, t) in &[(0.2, 0.7), (0.9, 0.1), (0.5, 0.5), (0.0, 0.4)] {
            let g = green_kernel(0, w, x, t).unwrap();
            assert!((g - (w * (x - t)).sin() / w).abs() < 1e-14);
        }
    }

    #[test]
    fn fundamental_pair_limits() {
        for a in 0..5u32 {
            let pair = FundamentalPair::new(a, 17.0).unwrap();
            let x = 1e-3;
            let e = pair.eval(x);
            assert!((e.u / x.powi(a as i32 + 1) - 1.0).abs() < 1e-5);
            assert!((e.v_scaled + 1.0 / (2 * a + 1) as f64).abs() < 1e-5);
            let e0 = pair.eval(0.0);
            assert_eq!(e0.u, 0.0);
            assert!((e0.u_scaled - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_lambda_matches_hyperbolic_closed_form() {
        // a = 1, lambda = -mu^2: Q_1 = (Q_0 / x - Q_{-1}) / lambda with
        // Q_0 = sinh(mu x)/mu, Q_{-1} = cosh(mu x).
        let mu: f64 = 2.5;
        let pair = FundamentalPair::new(1, -mu * mu).unwrap();
        for &x in &[0.05, 0.3, 1.0] {
            let q0 = (mu * x).sinh() / mu;
            let qm = (mu * x).cosh();
            let q1 = (q0 / x - qm) / (-mu * mu);
            assert!(rel(pair.u(x), 3.0 * q1) < 1e-12, "x={x}");
            assert!((pair.wronskian_at(x) - 1.0).abs() < 1e-12);
        }
    }
}
