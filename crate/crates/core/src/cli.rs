//! Command-line front end.
//!
//! Every subcommand writes its artifacts into the output directory and prints
//! the written paths, one per line. Exit codes: 0 success, 1 a verification
//! check failed, 2 usage or input error, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inverse::{linearize, recover, RecoveryOptions, SpectralTarget};
use crate::numerics::{fmt17, Grid, GridFn, RealSeq, DEFAULT_POINTS, MIN_POINTS};
use crate::potentials::{resample, PotentialSource};
use crate::solutions::Potential;
use crate::spectrum::{eigen_data, spectral_map};
use crate::transform::{OperatorKind, OperatorTag};
use crate::verify::{self, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable that sets the output directory when `--out` is absent.
pub const OUT_ENV: &str = "SINGULAR_SL_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "singular-sl",
    version,
    about = "Direct and inverse Dirichlet spectra of -y'' + a(a+1)/x^2 y + q y on [0, 1]"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Order of the inverse-square singularity (1 when absent; `verify`
    /// runs every default order when absent).
    #[arg(long, global = true)]
    pub a: Option<u32>,
    /// Number of modes N.
    #[arg(long = "modes", global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub modes: u64,
    /// Grid size (odd, at least 129).
    #[arg(long, global = true, default_value_t = DEFAULT_POINTS)]
    pub n_points: usize,
    /// Potential: zero, const(c), cos(k,amp), bump(center,width,amp),
    /// poly(c0,c1,...) or a path to an `x,value` CSV file.
    #[arg(long, global = true, default_value = "zero")]
    pub potential: String,
    /// Data residual at which recovery stops.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 30)]
    pub max_iter: usize,
    /// Starting potential for recovery, same syntax as --potential.
    #[arg(long, global = true, default_value = "zero")]
    pub q0: String,
    /// Seed for the randomized checks of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, env = OUT_ENV, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral data (mean, lambda~, n kappa) as JSON.
    Spectrum,
    /// Mode fields g, grad lambda, grad kappa, V, W of one eigenvalue as CSV.
    Eigen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Apply S, S_adj, A, A_adj, T, T_adj, B or B_adj of order --a to a
    /// function given as CSV or in the potential syntax.
    Transform {
        #[arg(long)]
        kind: OperatorKind,
        #[arg(long)]
        input: String,
    },
    /// Recover a potential from spectral data JSON.
    Recover {
        #[arg(long)]
        target: PathBuf,
        /// Reuse the linearisation at --q0 for every step.
        #[arg(long)]
        frozen: bool,
    },
    /// Tangent and normal fields of the isospectral set at --potential.
    Isoflow {
        /// Tangent coefficients xi_1..xi_N, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        xi: Vec<f64>,
        /// Normal coefficients eta_1..eta_N; zeros when absent.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        eta: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eta0: f64,
    },
    /// Run invariant suites and write a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < MIN_POINTS || self.n_points % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "--n-points must be odd and at least {MIN_POINTS}, got {}",
                self.n_points
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        if self.n_points == DEFAULT_POINTS {
            Ok(Grid::default_grid())
        } else {
            Grid::new(self.n_points)
        }
    }

    fn load(&self, source: &str, grid: &Grid) -> Result<Potential> {
        PotentialSource::parse(source)?.load(grid)
    }

    pub fn order(&self) -> u32 {
        self.a.unwrap_or(1)
    }

    fn n(&self) -> usize {
        self.modes as usize
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Shape { .. }
        | Error::InvalidGrid(_)
        | Error::UnsupportedOrder { .. }
        | Error::InvalidArgument(_)
        | Error::Parse(_)
        | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn to_json(v: &impl Serialize) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidArgument(format!("serialization: {e}")))
}

/// CSV with an `x` column followed by the named columns.
fn columns_csv(grid: &Grid, columns: &[(&str, &GridFn)]) -> String {
    let mut out = String::from("x");
    for (name, _) in columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, x) in grid.x().iter().enumerate() {
        out.push_str(&fmt17(*x));
        for (_, f) in columns {
            let _ = write!(out, ",{}", fmt17(f[i]));
        }
        out.push('\n');
    }
    out
}

/// Outcome of a subcommand: written files and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub code: i32,
    /// Printed on stderr when the status is not success.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(files: Vec<PathBuf>) -> Self {
        Self {
            files,
            code: EXIT_OK,
            message: None,
        }
    }
}

/// Spectral data plus the eigenvalues themselves; readable back as a
/// recovery target.
#[derive(Serialize)]
struct SpectrumOutput {
    #[serde(flatten)]
    data: crate::spectrum::SpectralData,
    eigenvalues: Vec<f64>,
}

pub fn cmd_spectrum(c: &RunConfig) -> Result<Outcome> {
    let grid = c.grid()?;
    let q = c.load(&c.potential, &grid)?;
    let data = spectral_map(c.order(), &q, c.n())?;
    let out = SpectrumOutput {
        eigenvalues: (1..=data.n_modes).map(|n| data.eigenvalue(n)).collect(),
        data,
    };
    let path = write_file(&c.out, "spectrum.json", &to_json(&out)?)?;
    Ok(Outcome::ok(vec![path]))
}

#[derive(Serialize)]
struct EigenSummary {
    a: u32,
    n: usize,
    lambda: f64,
    kappa: f64,
}

pub fn cmd_eigen(c: &RunConfig, n: usize) -> Result<Outcome> {
    let grid = c.grid()?;
    let q = c.load(&c.potential, &grid)?;
    let m = eigen_data(c.order(), &q, n)?;
    let csv = columns_csv(
        &grid,
        &[
            ("g", &m.g),
            ("grad_lambda", &m.grad_lambda),
            ("grad_kappa", &m.grad_kappa),
            ("V", &m.v_field),
            ("W", &m.w_field),
        ],
    );
    let summary = EigenSummary {
        a: c.order(),
        n,
        lambda: m.lambda,
        kappa: m.kappa,
    };
    Ok(Outcome::ok(vec![
        write_file(&c.out, &format!("eigen_{n}.csv"), &csv)?,
        write_file(&c.out, &format!("eigen_{n}.json"), &to_json(&summary)?)?,
    ]))
}

pub fn cmd_transform(c: &RunConfig, kind: OperatorKind, input: &str) -> Result<Outcome> {
    let grid = c.grid()?;
    let f = match PotentialSource::parse(input)? {
        PotentialSource::Csv(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let (xs, vs) = crate::numerics::parse_xy_csv(&text)?;
            resample(&grid, &xs, &vs)?
        }
        named => named.load(&grid)?.samples().clone(),
    };
    let out = OperatorTag::new(kind, c.order())?.apply(&f)?;
    let name = format!("transform_{}_{}.csv", kind.name(), c.order());
    Ok(Outcome::ok(vec![write_file(&c.out, &name, &out.to_csv())?]))
}

pub fn cmd_recover(c: &RunConfig, target: &Path, frozen: bool) -> Result<Outcome> {
    let text = std::fs::read_to_string(target)
        .map_err(|e| Error::Io(format!("{}: {e}", target.display())))?;
    let target: SpectralTarget =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("target JSON: {e}")))?;
    let grid = c.grid()?;
    let q0 = c.load(&c.q0, &grid)?;
    let options = RecoveryOptions {
        tol: c.tol,
        max_iter: c.max_iter,
        frozen,
    };
    let report = recover(c.order(), &target, &q0, options)?;
    let files = vec![
        write_file(
            &c.out,
            "recovered.csv",
            &report.final_potential.samples().to_csv(),
        )?,
        write_file(&c.out, "recovery_report.json", &to_json(&report)?)?,
    ];
    let converged = report.converged;
    Ok(Outcome {
        files,
        code: if converged { EXIT_OK } else { EXIT_NUMERICAL },
        message: (!converged).then(|| {
            format!(
                "recovery did not converge: residual {:e} after {} iterations",
                report.final_residual(),
                report.iterations
            )
        }),
    })
}

pub fn cmd_isoflow(c: &RunConfig, xi: &[f64], eta: &[f64], eta0: f64) -> Result<Outcome> {
    if xi.is_empty() {
        return Err(Error::InvalidArgument(
            "--xi needs at least one coefficient".into(),
        ));
    }
    let eta = if eta.is_empty() {
        vec![0.0; xi.len()]
    } else {
        eta.to_vec()
    };
    if eta.len() != xi.len() {
        return Err(Error::InvalidArgument(format!(
            "--xi has {} entries but --eta has {}",
            xi.len(),
            eta.len()
        )));
    }
    let grid = c.grid()?;
    let q = c.load(&c.potential, &grid)?;
    let lin = linearize(c.order(), &q, xi.len())?;
    let tangent = lin.tangent(&RealSeq::new(xi.to_vec())?)?;
    let normal = lin.normal(eta0, &RealSeq::new(eta)?)?;
    let csv = columns_csv(&grid, &[("tangent", &tangent), ("normal", &normal)]);
    Ok(Outcome::ok(vec![write_file(&c.out, "isoflow.csv", &csv)?]))
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    suite: &'a str,
    passed: bool,
    checks: &'a [verify::Check],
}

pub fn cmd_verify(c: &RunConfig, suite: Suite) -> Result<Outcome> {
    let config = VerifyConfig {
        grid: c.grid()?,
        a: c.a,
        seed: c.seed,
    };
    let checks = verify::run(suite, &config);
    let passed = checks.iter().all(verify::Check::passed);
    let report = VerifyReport {
        suite: suite.name(),
        passed,
        checks: &checks,
    };
    let path = write_file(&c.out, &format!("verify_{suite}.json"), &to_json(&report)?)?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|ch| !ch.passed())
        .map(|ch| ch.check_name.as_str())
        .collect();
    Ok(Outcome {
        files: vec![path],
        code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
        message: (!passed).then(|| format!("failed checks: {}", failed.join(", "))),
    })
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let c = &cli.config;
    c.validate()?;
    match &cli.command {
        Command::Spectrum => cmd_spectrum(c),
        Command::Eigen { n } => cmd_eigen(c, *n as usize),
        Command::Transform { kind, input } => cmd_transform(c, *kind, input),
        Command::Recover { target, frozen } => cmd_recover(c, target, *frozen),
        Command::Isoflow { xi, eta, eta0 } => cmd_isoflow(c, xi, eta, *eta0),
        Command::Verify { suite } => cmd_verify(c, *suite),
    }
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if let Some(m) = &outcome.message {
                eprintln!("singular-sl: {m}");
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("singular-sl: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code(&Error::NearDegenerate { value: 0.0 }),
            EXIT_NUMERICAL
        );
    }

    #[test]
    fn config_validation_names_the_field() {
        let cli = Cli::try_parse_from(["singular-sl", "--n-points", "100", "spectrum"]).unwrap();
        let err = cli.config.validate().unwrap_err().to_string();
        assert!(err.contains("--n-points"), "{err}");
        assert!(Cli::try_parse_from(["singular-sl", "--modes", "0", "spectrum"]).is_err());
    }
}
