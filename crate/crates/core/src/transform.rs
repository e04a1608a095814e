//! Transformation operators `S_a`, `A_a`, the chains `T_a`, `B_a` and their
//! adjoints.
//!
//! Every operator here is the identity plus a finite sum of power-weighted
//! Volterra terms
//!
//! ```text
//! Lower(p, r) f = x^p ∫_0^x s^r f(s) ds
//! Upper(p, r) f = x^p ∫_x^1 s^r f(s) ds
//! Full(p, r)  f = x^p ∫_0^1 s^r f(s) ds
//! ```
//!
//! Compositions are carried out on this representation in closed form, so a
//! chain such as `T_a` is applied to `f` in a single pass over the grid. This
//! matters: `S_a f` carries an `x^{2a-1} log x` term whenever `f` has an
//! `x^{2a-1}` Taylor coefficient, and a second numerical application would
//! be limited by interpolating that term.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::bessel::{phi_cap, phi_cap_prime, psi_cap, psi_cap_prime};
use crate::error::{Error, Result};
use crate::numerics::{inner, integrate, Grid, GridFn};

/// Largest order for which the chains are offered. The kernel coefficients of
/// `T_a` grow factorially (about 3e7 at `a = 10`) and cancel in the sum.
pub const MAX_TRANSFORM_ORDER: u32 = 10;

/// Largest |omega| accepted by [`verify_bessel_transport`].
pub const MAX_TRANSPORT_OMEGA: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Span {
    Lower,
    Upper,
    Full,
}

/// `coeff * x^power ∫ s^weight f(s) ds` over the span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelTerm {
    pub span: Span,
    pub power: i32,
    pub weight: i32,
    pub coeff: f64,
}

impl KernelTerm {
    fn new(span: Span, power: i32, weight: i32, coeff: f64) -> Self {
        Self {
            span,
            power,
            weight,
            coeff,
        }
    }

    fn adjoint(&self) -> Self {
        let span = match self.span {
            Span::Lower => Span::Upper,
            Span::Upper => Span::Lower,
            Span::Full => Span::Full,
        };
        Self::new(span, self.weight, self.power, self.coeff)
    }

    /// `self ∘ other` as a sum of terms.
    fn compose(&self, other: &KernelTerm) -> Result<Vec<KernelTerm>> {
        use Span::*;
        let (p1, r1, p2, r2) = (self.power, self.weight, other.power, other.weight);
        let e = r1 + p2 + 1;
        let c = self.coeff * other.coeff;
        let log = || {
            Error::LogKernel(format!(
                "{:?}({p1},{r1}) after {:?}({p2},{r2})",
                self.span, other.span
            ))
        };
        let need = |ok: bool| if ok { Ok(()) } else { Err(log()) };
        let ef = e as f64;
        let t = KernelTerm::new;
        Ok(match (self.span, other.span) {
            (Upper, Upper) => {
                need(e != 0)?;
                vec![t(Upper, p1, r2 + e, c / ef), t(Upper, p1 + e, r2, -c / ef)]
            }
            (Lower, Lower) => {
                need(e != 0)?;
                vec![t(Lower, p1 + e, r2, c / ef), t(Lower, p1, r2 + e, -c / ef)]
            }
            (Upper, Lower) => {
                need(e != 0)?;
                vec![
                    t(Full, p1, r2, c / ef),
                    t(Lower, p1 + e, r2, -c / ef),
                    t(Upper, p1, r2 + e, -c / ef),
                ]
            }
            (Lower, Upper) => {
                need(e > 0)?;
                vec![t(Lower, p1, r2 + e, c / ef), t(Upper, p1 + e, r2, c / ef)]
            }
            (Full, Upper) => {
                need(e > 0)?;
                vec![t(Full, p1, r2 + e, c / ef)]
            }
            (Full, Lower) => {
                need(e != 0)?;
                vec![t(Full, p1, r2, c / ef), t(Full, p1, r2 + e, -c / ef)]
            }
            (Full, Full) => {
                need(e > 0)?;
                vec![t(Full, p1, r2, c / ef)]
            }
            // K ∘ Full(p2, r2) = K[x^{p2}] ∫ s^{r2} f.
            (Upper, Full) => {
                need(e != 0)?;
                vec![t(Full, p1, r2, c / ef), t(Full, p1 + e, r2, -c / ef)]
            }
            (Lower, Full) => {
                need(e > 0)?;
                vec![t(Full, p1 + e, r2, c / ef)]
            }
        })
    }

    fn apply(&self, grid: &Grid, f: &[f64], out: &mut [f64]) -> Result<()> {
        let (p, r) = (self.power, self.weight);
        let x = grid.x();
        let n = x.len();
        let divergent = || {
            Error::SingularArgument(format!(
                "{:?}({p},{r}) kernel is not bounded at the origin",
                self.span
            ))
        };
        let rule = grid.panel_rule(r);
        match self.span {
            Span::Upper => {
                if r == -1 {
                    return Err(Error::LogKernel(format!("Upper({p},-1)")));
                }
                let s = rule.suffix(f);
                for i in 1..n {
                    out[i] += self.coeff * x[i].powi(p) * s[i];
                }
                let d = p + r + 1;
                let origin = if r >= 0 {
                    match p {
                        0 => s[0],
                        _ if p > 0 => 0.0,
                        _ => return Err(divergent()),
                    }
                } else if d > 0 {
                    0.0
                } else if d == 0 {
                    f[0] / (-r - 1) as f64
                } else {
                    return Err(divergent());
                };
                out[0] += self.coeff * origin;
            }
            Span::Lower => {
                if r < 0 {
                    return Err(divergent());
                }
                let s = rule.prefix(f);
                for i in 1..n {
                    out[i] += self.coeff * x[i].powi(p) * s[i];
                }
                let d = p + r + 1;
                let origin = match d {
                    0 => f[0] / (r + 1) as f64,
                    _ if d > 0 => 0.0,
                    _ => return Err(divergent()),
                };
                out[0] += self.coeff * origin;
            }
            Span::Full => {
                if r < 0 {
                    return Err(divergent());
                }
                let total = rule.prefix(f)[n - 1];
                for i in 1..n {
                    out[i] += self.coeff * x[i].powi(p) * total;
                }
                let origin = match p {
                    0 => total,
                    _ if p > 0 => 0.0,
                    _ => return Err(divergent()),
                };
                out[0] += self.coeff * origin;
            }
        }
        Ok(())
    }
}

/// `identity * I + Σ terms`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelOperator {
    identity: f64,
    terms: Vec<KernelTerm>,
}

impl KernelOperator {
    pub fn identity() -> Self {
        Self {
            identity: 1.0,
            terms: Vec::new(),
        }
    }

    fn from_parts(identity: f64, terms: impl IntoIterator<Item = KernelTerm>) -> Self {
        // Merge like terms so that cancellations are exact where possible.
        let mut merged: BTreeMap<(Span, i32, i32), f64> = BTreeMap::new();
        for t in terms {
            *merged.entry((t.span, t.power, t.weight)).or_insert(0.0) += t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|((span, power, weight), coeff)| KernelTerm::new(span, power, weight, coeff))
            .collect();
        Self { identity, terms }
    }

    pub fn identity_coeff(&self) -> f64 {
        self.identity
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_parts(
            c * self.identity,
            self.terms.iter().map(|t| KernelTerm {
                coeff: c * t.coeff,
                ..*t
            }),
        )
    }

    /// `self - other`.
    pub fn sub(&self, other: &KernelOperator) -> Self {
        Self::from_parts(
            self.identity - other.identity,
            self.terms
                .iter()
                .copied()
                .chain(other.terms.iter().map(|t| KernelTerm {
                    coeff: -t.coeff,
                    ..*t
                })),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &KernelOperator) -> Result<Self> {
        let mut terms: Vec<KernelTerm> = Vec::new();
        for t in &other.terms {
            terms.push(KernelTerm {
                coeff: self.identity * t.coeff,
                ..*t
            });
        }
        for t in &self.terms {
            terms.push(KernelTerm {
                coeff: other.identity * t.coeff,
                ..*t
            });
            for u in &other.terms {
                terms.extend(t.compose(u)?);
            }
        }
        Ok(Self::from_parts(self.identity * other.identity, terms))
    }

    /// The `L^2(0,1)` adjoint.
    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.identity, self.terms.iter().map(KernelTerm::adjoint))
    }

    /// Largest absolute coefficient, identity part included.
    pub fn max_coeff(&self) -> f64 {
        self.terms
            .iter()
            .fold(self.identity.abs(), |m, t| m.max(t.coeff.abs()))
    }

    pub fn apply(&self, f: &GridFn) -> Result<GridFn> {
        let grid = f.grid();
        let v = f.values();
        let mut out: Vec<f64> = v.iter().map(|x| self.identity * x).collect();
        for t in &self.terms {
            t.apply(grid, v, &mut out)?;
        }
        GridFn::new(grid, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorKind {
    S,
    SAdj,
    A,
    AAdj,
    T,
    TAdj,
    B,
    BAdj,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 8] = [
        OperatorKind::S,
        OperatorKind::SAdj,
        OperatorKind::A,
        OperatorKind::AAdj,
        OperatorKind::T,
        OperatorKind::TAdj,
        OperatorKind::B,
        OperatorKind::BAdj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::S => "S",
            OperatorKind::SAdj => "S_adj",
            OperatorKind::A => "A",
            OperatorKind::AAdj => "A_adj",
            OperatorKind::T => "T",
            OperatorKind::TAdj => "T_adj",
            OperatorKind::B => "B",
            OperatorKind::BAdj => "B_adj",
        }
    }

    fn is_chain(self) -> bool {
        matches!(
            self,
            OperatorKind::T | OperatorKind::TAdj | OperatorKind::B | OperatorKind::BAdj
        )
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown operator '{s}' (expected one of S, S_adj, A, A_adj, T, T_adj, B, B_adj)"
                ))
            })
    }
}

/// An operator kind together with its order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OperatorTag {
    pub kind: OperatorKind,
    pub order: u32,
}

impl OperatorTag {
    /// The elementary operators need `a >= 1`; the chains accept `a = 0` as
    /// the identity.
    pub fn new(kind: OperatorKind, order: u32) -> Result<Self> {
        if order > MAX_TRANSFORM_ORDER || (order == 0 && !kind.is_chain()) {
            return Err(Error::UnsupportedOrder {
                order,
                what: "transformation operator",
                supported: if kind.is_chain() { "0..=10" } else { "1..=10" },
            });
        }
        Ok(Self { kind, order })
    }

    pub fn kernel(&self) -> Result<Arc<KernelOperator>> {
        kernel(self.kind, self.order)
    }

    pub fn apply(&self, f: &GridFn) -> Result<GridFn> {
        self.kernel()?.apply(f)
    }
}

fn elementary_s(a: u32) -> KernelOperator {
    let a = a as i32;
    KernelOperator::from_parts(
        1.0,
        [KernelTerm::new(
            Span::Upper,
            2 * a - 1,
            -2 * a,
            -4.0 * a as f64,
        )],
    )
}

fn elementary_a(a: u32) -> KernelOperator {
    let a = a as i32;
    KernelOperator::from_parts(
        1.0,
        [KernelTerm::new(
            Span::Lower,
            -2 * a - 1,
            2 * a,
            -4.0 * a as f64,
        )],
    )
}

/// `(-1)^{a+1} E_a E_{a-1} ... E_1`.
fn chain(a: u32, elementary: fn(u32) -> KernelOperator) -> Result<KernelOperator> {
    if a == 0 {
        return Ok(KernelOperator::identity());
    }
    let mut op = elementary(a);
    for k in (1..a).rev() {
        op = op.compose(&elementary(k))?;
    }
    Ok(if a % 2 == 0 { op.scale(-1.0) } else { op })
}

fn build(kind: OperatorKind, a: u32) -> Result<KernelOperator> {
    Ok(match kind {
        OperatorKind::S => elementary_s(a),
        OperatorKind::SAdj => elementary_s(a).adjoint(),
        OperatorKind::A => elementary_a(a),
        OperatorKind::AAdj => elementary_a(a).adjoint(),
        OperatorKind::T => chain(a, elementary_s)?,
        OperatorKind::TAdj => chain(a, elementary_s)?.adjoint(),
        OperatorKind::B => chain(a, elementary_a)?,
        OperatorKind::BAdj => chain(a, elementary_a)?.adjoint(),
    })
}

type KernelCache = Mutex<HashMap<(OperatorKind, u32), Arc<KernelOperator>>>;

/// Kernel representation of an operator, built once per `(kind, a)`.
pub fn kernel(kind: OperatorKind, a: u32) -> Result<Arc<KernelOperator>> {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    OperatorTag::new(kind, a)?;
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(k) = cache.lock().expect("kernel cache").get(&(kind, a)) {
        return Ok(Arc::clone(k));
    }
    let k = Arc::new(build(kind, a)?);
    cache
        .lock()
        .expect("kernel cache")
        .insert((kind, a), Arc::clone(&k));
    Ok(k)
}

/// `S_a f = f - 4a x^{2a-1} ∫_x^1 f(t) t^{-2a} dt`.
pub fn apply_s(a: u32, f: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::S, a)?.apply(f)
}

/// `S_a^* g = g - 4a x^{-2a} ∫_0^x t^{2a-1} g(t) dt`.
pub fn apply_s_adj(a: u32, g: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::SAdj, a)?.apply(g)
}

/// `A_a g = g - 4a x^{-2a-1} ∫_0^x t^{2a} g(t) dt`, the inverse of `S_a`.
pub fn apply_a(a: u32, g: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::A, a)?.apply(g)
}

pub fn apply_a_adj(a: u32, g: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::AAdj, a)?.apply(g)
}

/// `T_a = (-1)^{a+1} S_a ... S_1`, identity for `a = 0`.
pub fn apply_t(a: u32, f: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::T, a)?.apply(f)
}

pub fn apply_t_adj(a: u32, f: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::TAdj, a)?.apply(f)
}

/// `B_a = (-1)^{a+1} A_a ... A_1`, identity for `a = 0`.
pub fn apply_b(a: u32, f: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::B, a)?.apply(f)
}

pub fn apply_b_adj(a: u32, f: &GridFn) -> Result<GridFn> {
    kernel(OperatorKind::BAdj, a)?.apply(f)
}

/// `x^2, x^4, ..., x^{2a}`, which span the kernel of `T_a^*`.
pub fn kernel_basis(grid: &Grid, a: u32) -> Result<Vec<GridFn>> {
    OperatorTag::new(OperatorKind::TAdj, a)?;
    if a == 0 {
        return Err(Error::UnsupportedOrder {
            order: 0,
            what: "kernel_basis",
            supported: "1..=10",
        });
    }
    Ok((1..=a as i32)
        .map(|j| grid.sample(|x| x.powi(2 * j)))
        .collect())
}

/// `||S_a S_b f - S_b S_a f||_inf`, both products composed in kernel form.
pub fn commute_check(a: u32, b: u32, f: &GridFn) -> Result<f64> {
    if a == b {
        OperatorTag::new(OperatorKind::S, a)?;
        return Ok(0.0);
    }
    let sa = kernel(OperatorKind::S, a)?;
    let sb = kernel(OperatorKind::S, b)?;
    let ab = sa.compose(&sb)?.apply(f)?;
    let ba = sb.compose(&sa)?.apply(f)?;
    Ok((&ab - &ba).sup_norm())
}

/// Coefficients of the least-squares fit of `f` by `x^{p}` for each power.
///
/// Gram–Schmidt on the sampled monomials with the grid inner product.
pub fn project_on_monomials(f: &GridFn, powers: &[i32]) -> Result<Vec<f64>> {
    let grid = f.grid();
    let basis: Vec<GridFn> = powers.iter().map(|&p| grid.sample(|x| x.powi(p))).collect();
    let k = basis.len();
    // q_j = Σ_i r[i][j]^{-1}-style bookkeeping via the coefficient matrix c,
    // with q_j = Σ_i c[j][i] basis_i orthonormal.
    let mut c = vec![vec![0.0; k]; k];
    let mut q: Vec<GridFn> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = basis[j].clone();
        let mut cj = vec![0.0; k];
        cj[j] = 1.0;
        for (i, qi) in q.iter().enumerate() {
            let d = inner(qi, &v)?;
            v = v.axpy(-d, qi)?;
            for m in 0..k {
                cj[m] -= d * c[i][m];
            }
        }
        let norm = inner(&v, &v)?.sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("dependent monomials".into()));
        }
        for m in 0..k {
            cj[m] /= norm;
        }
        c[j] = cj;
        q.push(v.scale(1.0 / norm));
    }
    let mut out = vec![0.0; k];
    for j in 0..k {
        let d = inner(&q[j], f)?;
        for m in 0..k {
            out[m] += d * c[j][m];
        }
    }
    Ok(out)
}

/// Projection of `B_a^*[1]` on `1, x^2, ..., x^{2a}`. The constant is `-1`
/// and the `x^2` coefficient is `a(a+1)`.
pub fn b_adj_unit_coefficients(grid: &Grid, a: u32) -> Result<Vec<f64>> {
    let image = apply_b_adj(a, &grid.constant(1.0))?;
    let powers: Vec<i32> = (0..=a as i32).map(|m| 2 * m).collect();
    project_on_monomials(&image, &powers)
}

/// One line of the transport report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportResidual {
    pub identity: &'static str,
    pub sup: f64,
    pub l2: f64,
}

fn residual(identity: &'static str, lhs: &GridFn, rhs: &GridFn) -> TransportResidual {
    let d = lhs - rhs;
    TransportResidual {
        identity,
        sup: d.sup_norm(),
        l2: d.l2_norm(),
    }
}

fn scalar_residual(identity: &'static str, d: f64) -> TransportResidual {
    TransportResidual {
        identity,
        sup: d.abs(),
        l2: d.abs(),
    }
}

/// Residuals of the identities linking Bessel products to trigonometric
/// functions through `S_a^*`, `A_a`, `T_a`, `T_a^*` and `B_a`, sampled as
/// `x -> F(omega x)`. The two integrated identities use the even test
/// function `q(t) = cosh(t) cos(3t)`, for which `T_a q` has no logarithmic
/// terms and the grid quadrature of the pairing stays accurate.
pub fn verify_bessel_transport(grid: &Grid, a: u32, omega: f64) -> Result<Vec<TransportResidual>> {
    if a == 0 {
        return Err(Error::UnsupportedOrder {
            order: 0,
            what: "verify_bessel_transport",
            supported: "1..=10",
        });
    }
    if !omega.is_finite() || omega.abs() > MAX_TRANSPORT_OMEGA {
        return Err(Error::InvalidArgument(format!(
            "omega = {omega} outside [-{MAX_TRANSPORT_OMEGA}, {MAX_TRANSPORT_OMEGA}]"
        )));
    }
    let w = omega;
    let sample = |f: fn(u32, f64) -> Result<f64>, k: u32| -> Result<GridFn> {
        let vals = grid
            .x()
            .iter()
            .map(|&x| f(k, w * x))
            .collect::<Result<Vec<f64>>>()?;
        GridFn::new(grid, vals)
    };
    let phi = sample(phi_cap, a)?;
    let psi = sample(psi_cap, a)?;
    let dphi = sample(phi_cap_prime, a)?;
    let dpsi = sample(psi_cap_prime, a)?;
    let cos2 = grid.sample(|x| (2.0 * w * x).cos());
    let sin2 = grid.sample(|x| (2.0 * w * x).sin());

    let mut out = Vec::new();
    out.push(residual(
        "phi_reduction",
        &phi,
        &-&apply_s_adj(a, &sample(phi_cap, a - 1)?)?,
    ));
    out.push(residual(
        "psi_reduction",
        &psi,
        &-&apply_s_adj(a, &sample(psi_cap, a - 1)?)?,
    ));
    out.push(residual(
        "phi_prime_reduction",
        &dphi,
        &-&apply_a(a, &sample(phi_cap_prime, a - 1)?)?,
    ));
    out.push(residual(
        "psi_prime_reduction",
        &dpsi,
        &-&apply_a(a, &sample(psi_cap_prime, a - 1)?)?,
    ));

    let q = grid.sample(|t| t.cosh() * (3.0 * t).cos());
    let tq = apply_t(a, &q)?;
    let two_phi_minus_one = phi.scale(2.0).map(|v| v - 1.0);
    out.push(scalar_residual(
        "phi_pairing",
        inner(&two_phi_minus_one, &q)? - inner(&cos2, &tq)?,
    ));
    out.push(scalar_residual(
        "psi_pairing",
        inner(&psi, &q)? + 0.5 * inner(&sin2, &tq)?,
    ));
    out.push(residual(
        "phi_adjoint",
        &two_phi_minus_one,
        &apply_t_adj(a, &cos2)?,
    ));
    out.push(residual(
        "psi_adjoint",
        &psi,
        &apply_t_adj(a, &sin2.scale(-0.5))?,
    ));
    out.push(residual(
        "phi_prime_chain",
        &dphi,
        &apply_b(a, &sin2.scale(-1.0))?,
    ));
    out.push(residual(
        "psi_prime_chain",
        &dpsi,
        &apply_b(a, &cos2.scale(-1.0))?,
    ));
    Ok(out)
}

/// `max ||op f|| / ||f||` over the given functions, in `L^2`.
pub fn norm_ratio_probe(kind: OperatorKind, a: u32, samples: &[GridFn]) -> Result<f64> {
    let k = kernel(kind, a)?;
    let mut worst: f64 = 0.0;
    for f in samples {
        let nf = f.l2_norm();
        if nf > 0.0 {
            worst = worst.max(k.apply(f)?.l2_norm() / nf);
        }
    }
    Ok(worst)
}

/// `∫ T_a[v]`, equal to `-∫ v` because `T_a^*[1] = -1`. Accurate on the
/// grid when `v` is even in `x`.
pub fn integrated_t(a: u32, v: &GridFn) -> Result<f64> {
    Ok(integrate(&apply_t(a, v)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_closed_forms() {
        let grid = Grid::new(257).unwrap();
        let one = grid.constant(1.0);
        let s1 = apply_s(1, &one).unwrap();
        for (i, &x) in grid.x().iter().enumerate() {
            assert!(
                (s1[i] - (4.0 * x - 3.0)).abs() < 1e-12,
                "x={x} {:e}",
                s1[i] - (4.0 * x - 3.0)
            );
        }
        let sa = apply_s_adj(1, &one).unwrap();
        assert!(sa.values().iter().all(|v| (v + 1.0).abs() < 1e-12));
    }

    #[test]
    fn adjoint_swaps_spans() {
        let s = elementary_s(2);
        let t = s.adjoint().terms()[0];
        assert_eq!((t.span, t.power, t.weight), (Span::Lower, -4, 3));
        assert_eq!(s.adjoint().adjoint(), s);
    }

    #[test]
    fn inverse_composes_to_identity_exactly() {
        for a in 1..=6 {
            let k = elementary_a(a).compose(&elementary_s(a)).unwrap();
            assert_eq!(k.identity_coeff(), 1.0);
            assert!(
                k.terms().iter().all(|t| t.coeff.abs() < 1e-12),
                "a={a}: {k:?}"
            );
        }
    }

    #[test]
    fn repeated_factor_needs_a_log_kernel() {
        let s = elementary_s(2);
        assert!(matches!(s.compose(&s), Err(Error::LogKernel(_))));
    }

    #[test]
    fn order_limits() {
        assert!(OperatorTag::new(OperatorKind::S, 0).is_err());
        assert!(OperatorTag::new(OperatorKind::T, 0).is_ok());
        assert!(OperatorTag::new(OperatorKind::B, 11).is_err());
        assert_eq!("t_adj".parse::<OperatorKind>().unwrap(), OperatorKind::TAdj);
    }
}
