use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use super::cumulative::PanelRule;
use crate::error::{Error, Result};

/// Default number of nodes used throughout the crate.
pub const DEFAULT_POINTS: usize = 2049;
/// Smallest accepted grid.
pub const MIN_POINTS: usize = 129;

#[derive(Debug)]
struct GridInner {
    x: Vec<f64>,
    weights: Vec<f64>,
    h: f64,
    rules: Mutex<HashMap<i32, Arc<PanelRule>>>,
}

/// Uniform sampling of `[0, 1]` with composite-Simpson weights.
///
/// Cloning is cheap: the node and weight arrays are shared.
#[derive(Debug, Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

impl Grid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "n_points = {n_points} is below the minimum {MIN_POINTS}"
            )));
        }
        if n_points % 2 == 0 {
            return Err(Error::InvalidGrid(format!(
                "n_points = {n_points} must be odd for composite Simpson"
            )));
        }
        let panels = n_points - 1;
        let h = 1.0 / panels as f64;
        let x: Vec<f64> = (0..n_points).map(|i| i as f64 / panels as f64).collect();
        let mut weights: Vec<f64> = (0..n_points)
            .map(|i| {
                if i == 0 || i == panels {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                }
            })
            .map(|w| w * h / 3.0)
            .collect();
        // Renormalise so that the rule integrates constants to exactly one.
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self {
            inner: Arc::new(GridInner {
                x,
                weights,
                h,
                rules: Mutex::new(HashMap::new()),
            }),
        })
    }

    pub fn default_grid() -> Self {
        Self::new(DEFAULT_POINTS).expect("default grid is valid")
    }

    pub fn n_points(&self) -> usize {
        self.inner.x.len()
    }

    pub fn h(&self) -> f64 {
        self.inner.h
    }

    pub fn x(&self) -> &[f64] {
        &self.inner.x
    }

    pub fn weights(&self) -> &[f64] {
        &self.inner.weights
    }

    /// Cumulative quadrature rule for the weight `t^power`, built once per grid.
    pub fn panel_rule(&self, power: i32) -> Arc<PanelRule> {
        if let Some(rule) = self.inner.rules.lock().expect("rule cache").get(&power) {
            return rule.clone();
        }
        let rule = Arc::new(PanelRule::power(self, power));
        self.inner
            .rules
            .lock()
            .expect("rule cache")
            .entry(power)
            .or_insert(rule)
            .clone()
    }

    /// Grid with twice as many panels.
    pub fn refined(&self) -> Result<Self> {
        Self::new(2 * self.n_points() - 1)
    }

    /// Samples a closed-form function on the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn {
            grid: self.clone(),
            values: self.x().iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn constant(&self, c: f64) -> GridFn {
        GridFn {
            grid: self.clone(),
            values: vec![c; self.n_points()],
        }
    }

    pub fn zeros(&self) -> GridFn {
        self.constant(0.0)
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.n_points() == other.n_points()
    }

    pub fn check(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: self.n_points(),
                actual: other.n_points(),
            })
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// A real function sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::Shape {
                expected: grid.n_points(),
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    /// Builds without the finiteness check; callers guarantee the values.
    pub(crate) fn from_vec(grid: &Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn::from_vec(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &GridFn, f: impl Fn(f64, f64) -> f64) -> Result<GridFn> {
        self.grid.check(&other.grid)?;
        Ok(GridFn::from_vec(
            &self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: f64) -> GridFn {
        self.map(|v| c * v)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &GridFn) -> Result<GridFn> {
        self.zip_with(other, |a, b| a + c * b)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        integrate_values(
            &self.grid,
            &self.values.iter().map(|v| v * v).collect::<Vec<_>>(),
        )
        .max(0.0)
        .sqrt()
    }

    /// CSV with header `x,value`, 17 significant digits per number.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 48);
        out.push_str("x,value\n");
        for (x, v) in self.grid.x().iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", fmt17(*x), fmt17(*v));
        }
        out
    }
}

impl Index<usize> for GridFn {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl Add for &GridFn {
    type Output = GridFn;

    fn add(self, rhs: &GridFn) -> GridFn {
        self.zip_with(rhs, |a, b| a + b)
            .expect("grid mismatch in +")
    }
}

impl Sub for &GridFn {
    type Output = GridFn;

    fn sub(self, rhs: &GridFn) -> GridFn {
        self.zip_with(rhs, |a, b| a - b)
            .expect("grid mismatch in -")
    }
}

impl Mul for &GridFn {
    type Output = GridFn;

    fn mul(self, rhs: &GridFn) -> GridFn {
        self.zip_with(rhs, |a, b| a * b)
            .expect("grid mismatch in *")
    }
}

impl Neg for &GridFn {
    type Output = GridFn;

    fn neg(self) -> GridFn {
        self.map(|v| -v)
    }
}

/// Formats with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn integrate_values(grid: &Grid, values: &[f64]) -> f64 {
    grid.weights().iter().zip(values).map(|(w, v)| w * v).sum()
}

/// Composite-Simpson value of the integral over `[0, 1]`.
pub fn integrate(f: &GridFn) -> f64 {
    integrate_values(&f.grid, &f.values)
}

/// L² pairing `integrate(f * g)`.
pub fn inner(f: &GridFn, g: &GridFn) -> Result<f64> {
    f.grid.check(&g.grid)?;
    Ok(f.grid
        .weights()
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(w, (a, b))| w * a * b)
        .sum())
}

/// Fourth-order finite-difference derivative.
///
/// Central five-point stencil in the interior, one-sided fourth-order
/// stencils on the two nodes closest to each end.
pub fn derivative(f: &GridFn) -> GridFn {
    let v = &f.values;
    let n = v.len();
    let c = 1.0 / (12.0 * f.grid.h());
    let mut d = vec![0.0; n];
    d[0] = c * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]);
    d[1] = c * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]);
    for i in 2..n - 2 {
        d[i] = c * (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]);
    }
    d[n - 2] =
        -c * (-3.0 * v[n - 1] - 10.0 * v[n - 2] + 18.0 * v[n - 3] - 6.0 * v[n - 4] + v[n - 5]);
    d[n - 1] = -c
        * (-25.0 * v[n - 1] + 48.0 * v[n - 2] - 36.0 * v[n - 3] + 16.0 * v[n - 4] - 3.0 * v[n - 5]);
    GridFn::from_vec(&f.grid, d)
}

/// Parses the `x,value` CSV format. Rows must match the grid nodes exactly.
pub fn parse_csv_on_grid(grid: &Grid, text: &str) -> Result<GridFn> {
    let (xs, vs) = parse_xy_csv(text)?;
    if xs.len() != grid.n_points() {
        return Err(Error::Shape {
            expected: grid.n_points(),
            actual: xs.len(),
        });
    }
    for (i, (x, node)) in xs.iter().zip(grid.x()).enumerate() {
        if (x - node).abs() > 1e-9 {
            return Err(Error::Parse(format!(
                "row {i}: x = {x} does not match grid node {node}"
            )));
        }
    }
    GridFn::new(grid, vs)
}

/// Reads `x,value` rows (header optional) into two columns.
pub fn parse_xy_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
            return Err(Error::Parse(format!(
                "line {}: expected two columns",
                lineno + 1
            )));
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(v)) => {
                xs.push(x);
                vs.push(v);
            }
            _ if lineno == 0 => continue,
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: cannot parse `{line}` as numbers",
                    lineno + 1
                )))
            }
        }
    }
    Ok((xs, vs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_invariants() {
        let g = Grid::new(129).unwrap();
        let sum: f64 = g.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-14);
        assert_eq!(g.x()[0], 0.0);
        assert_eq!(*g.x().last().unwrap(), 1.0);
        assert!(g.x().windows(2).all(|w| w[1] > w[0]));
        assert!(Grid::new(128).is_err());
        assert!(Grid::new(127).is_err());
    }

    #[test]
    fn integrate_examples() {
        let g = Grid::new(513).unwrap();
        assert!((integrate(&g.constant(1.0)) - 1.0).abs() < 1e-15);
        assert!((integrate(&g.sample(|x| x.powi(3))) - 0.25).abs() < 1e-13);
        assert!(integrate(&g.sample(|x| (2.0 * PI * x).sin())).abs() < 1e-10);
    }

    #[test]
    fn inner_examples() {
        let g = Grid::new(513).unwrap();
        let one = g.constant(1.0);
        assert!((inner(&one, &one).unwrap() - 1.0).abs() < 1e-15);
        let s = g.sample(|x| (2.0 * PI * x).sin());
        let c = g.sample(|x| (2.0 * PI * x).cos());
        assert!(inner(&s, &c).unwrap().abs() < 1e-10);
        let e = g.sample(|x| 2f64.sqrt() * (PI * x).sin());
        assert!((inner(&e, &e).unwrap() - 1.0).abs() < 1e-10);
        let other = Grid::new(129).unwrap().constant(1.0);
        assert!(matches!(inner(&one, &other), Err(Error::Shape { .. })));
    }

    #[test]
    fn derivative_examples() {
        let g = Grid::new(513).unwrap();
        let d = derivative(&g.sample(|x| x));
        assert!(d.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let d = derivative(&g.sample(|x| x.powi(4)));
        for (x, v) in g.x().iter().zip(d.values()) {
            assert!((v - 4.0 * x.powi(3)).abs() < 1e-8);
        }
        let d = derivative(&g.sample(|x| (2.0 * PI * x).sin()));
        for (x, v) in g.x().iter().zip(d.values()) {
            assert!((v - 2.0 * PI * (2.0 * PI * x).cos()).abs() < 1e-6);
        }
    }

    #[test]
    fn derivative_then_integrate_recovers_endpoints() {
        let g = Grid::new(513).unwrap();
        let f = g.sample(|x| (3.0 * x).exp() * (5.0 * x).cos());
        let lhs = integrate(&derivative(&f));
        assert!((lhs - (f.last() - f.first())).abs() < 1e-6);
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let g = Grid::new(129).unwrap();
        let f = g.sample(|x| (x * 7.3).sin() / 3.0);
        let back = parse_csv_on_grid(&g, &f.to_csv()).unwrap();
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn non_finite_rejected() {
        let g = Grid::new(129).unwrap();
        let mut v = vec![0.0; 129];
        v[7] = f64::NAN;
        assert_eq!(GridFn::new(&g, v), Err(Error::NonFinite { index: 7 }));
    }
}
