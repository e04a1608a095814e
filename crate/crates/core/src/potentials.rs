//! Named closed-form potentials and CSV potentials resampled onto a grid.
//!
//! Accepted strings: `zero`, `const(c)`, `cos(k,amp)` for `amp cos(k pi x)`,
//! `bump(center,width,amp)` for `amp exp(-((x - center)/width)^2)` and
//! `poly(c0,c1,...)` for `c0 + c1 x + ...`. Anything else is read as a path to
//! an `x,value` CSV file.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{parse_xy_csv, Grid, GridFn};
use crate::solutions::Potential;

#[derive(Debug, Clone, PartialEq)]
pub enum NamedPotential {
    Zero,
    Const(f64),
    Cos { k: f64, amp: f64 },
    Bump { center: f64, width: f64, amp: f64 },
    Poly(Vec<f64>),
}

impl NamedPotential {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Const(c) => *c,
            Self::Cos { k, amp } => amp * (k * PI * x).cos(),
            Self::Bump { center, width, amp } => {
                let s = (x - center) / width;
                amp * (-s * s).exp()
            }
            // Horner, highest coefficient first.
            Self::Poly(c) => c.iter().rev().fold(0.0, |acc, c| acc * x + c),
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<Potential> {
        Potential::from_fn(grid, |x| self.eval(x))
    }
}

impl fmt::Display for NamedPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "zero"),
            Self::Const(c) => write!(f, "const({c})"),
            Self::Cos { k, amp } => write!(f, "cos({k},{amp})"),
            Self::Bump { center, width, amp } => write!(f, "bump({center},{width},{amp})"),
            Self::Poly(c) => {
                let parts: Vec<String> = c.iter().map(f64::to_string).collect();
                write!(f, "poly({})", parts.join(","))
            }
        }
    }
}

impl FromStr for NamedPotential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let Some(inner) = s[open + 1..].strip_suffix(')') else {
                    return Err(Error::Parse(format!("`{s}`: missing closing parenthesis")));
                };
                let args = inner
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<f64>().map_err(|_| {
                            Error::Parse(format!("`{s}`: `{}` is not a number", p.trim()))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                (&s[..open], args)
            }
            None => (s, Vec::new()),
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "`{name}` takes {n} argument(s), got {}",
                    args.len()
                )))
            }
        };
        if let Some(i) = args.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        match name.trim().to_ascii_lowercase().as_str() {
            "zero" => arity(0).map(|_| Self::Zero),
            "const" => arity(1).map(|_| Self::Const(args[0])),
            "cos" => arity(2).map(|_| Self::Cos {
                k: args[0],
                amp: args[1],
            }),
            "bump" => {
                arity(3)?;
                if args[1] <= 0.0 {
                    return Err(Error::Parse("bump width must be positive".into()));
                }
                Ok(Self::Bump {
                    center: args[0],
                    width: args[1],
                    amp: args[2],
                })
            }
            "poly" if !args.is_empty() => Ok(Self::Poly(args)),
            "poly" => Err(Error::Parse("poly needs at least one coefficient".into())),
            other => Err(Error::Parse(format!(
                "unknown potential `{other}` (expected zero, const, cos, bump or poly)"
            ))),
        }
    }
}

/// Where a potential comes from: a registry entry or a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSource {
    Named(NamedPotential),
    Csv(std::path::PathBuf),
}

impl PotentialSource {
    /// Registry syntax first; a string that is not a registry entry but names
    /// an existing file is taken as CSV.
    pub fn parse(s: &str) -> Result<Self> {
        match s.parse::<NamedPotential>() {
            Ok(named) => Ok(Self::Named(named)),
            Err(_) if Path::new(s).is_file() => Ok(Self::Csv(s.into())),
            Err(e) => Err(e),
        }
    }

    pub fn load(&self, grid: &Grid) -> Result<Potential> {
        match self {
            Self::Named(p) => p.sample(grid),
            Self::Csv(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let (xs, vs) = parse_xy_csv(&text)?;
                Ok(Potential::new(resample(grid, &xs, &vs)?))
            }
        }
    }
}

impl fmt::Display for PotentialSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Named(p) => p.fmt(f),
            Self::Csv(path) => write!(f, "{}", path.display()),
        }
    }
}

/// Piecewise-cubic (four-point Lagrange) interpolation of scattered samples
/// onto the grid. The samples must be strictly increasing and cover [0, 1].
pub fn resample(grid: &Grid, xs: &[f64], vs: &[f64]) -> Result<GridFn> {
    if xs.len() != vs.len() {
        return Err(Error::Shape {
            expected: xs.len(),
            actual: vs.len(),
        });
    }
    if xs.len() < 4 {
        return Err(Error::Parse(format!(
            "need at least 4 samples for cubic interpolation, got {}",
            xs.len()
        )));
    }
    if let Some(i) = xs.iter().chain(vs).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            index: i % xs.len(),
        });
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parse("x column must be strictly increasing".into()));
    }
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    if lo > 1e-12 || hi < 1.0 - 1e-12 {
        return Err(Error::Parse(format!(
            "samples cover [{lo}, {hi}], need all of [0, 1]"
        )));
    }
    let values = grid
        .x()
        .iter()
        .map(|&x| {
            let k = xs.partition_point(|&t| t <= x).clamp(2, xs.len() - 2);
            let idx = k - 2..k + 2;
            let (px, pv) = (&xs[idx.clone()], &vs[idx]);
            (0..4)
                .map(|i| {
                    let w: f64 = (0..4)
                        .filter(|&j| j != i)
                        .map(|j| (x - px[j]) / (px[i] - px[j]))
                        .product();
                    w * pv[i]
                })
                .sum()
        })
        .collect();
    GridFn::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trips_through_display() {
        for s in [
            "zero",
            "const(2.5)",
            "cos(2,0.5)",
            "bump(0.5,0.1,3)",
            "poly(1,0,-2)",
        ] {
            let p: NamedPotential = s.parse().unwrap();
            assert_eq!(p.to_string().parse::<NamedPotential>().unwrap(), p);
        }
        assert!("cos(1)".parse::<NamedPotential>().is_err());
        assert!("wave(1,2)".parse::<NamedPotential>().is_err());
        assert!("bump(0.5,0,1)".parse::<NamedPotential>().is_err());
    }

    #[test]
    fn poly_uses_ascending_coefficients() {
        let p: NamedPotential = "poly(1,2,3)".parse().unwrap();
        assert_eq!(p.eval(2.0), 1.0 + 4.0 + 12.0);
    }

    #[test]
    fn resampling_is_exact_on_cubics() {
        let grid = Grid::new(129).unwrap();
        let xs: Vec<f64> = (0..=40).map(|i| (i as f64 / 40.0).powf(1.3)).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let g = resample(&grid, &xs, &vs).unwrap();
        for (x, v) in grid.x().iter().zip(g.values()) {
            assert!((v - f(*x)).abs() < 1e-12);
        }
    }
}
