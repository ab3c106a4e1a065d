//! Argument parsing for the `vekua` binary.

use std::io::Write as _;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{
    cmd_boundary, cmd_fields, cmd_fit, cmd_powers, cmd_trace, cmd_verify, Artifact, Domain,
    FitOptions, Format, RuleKind, RunConfig, SigmaModel,
};
use crate::conductivity_fit::Interp;
use crate::error::{Error, Result};
use crate::fields::Integrator;
use crate::formal_powers::Coeff;

#[derive(Debug, Parser)]
#[command(
    name = "vekua",
    version,
    about = "Formal powers, currents and potentials in exponentially layered media"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Formal powers Z^(m)(coeff, 0; ζ) over the grid (x1, x2, re, im)
    Powers(DegreeArgs),
    /// Current density over the grid (x1, x2, j1, j2)
    Fields(DegreeArgs),
    /// Streamlines seeded on a ring, as SVG plus a vertex CSV next to it
    Trace(TraceArgs),
    /// Potentials on the unit circle (theta, u, u_h)
    Boundary(BoundaryArgs),
    /// Fit a piecewise separable conductivity to samples x1, x2, sigma
    Fit(FitArgs),
    /// Run the property checks and print a pass/fail table
    Verify(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Disk,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    #[value(name = "1")]
    One,
    #[value(name = "i")]
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON run configuration; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma3: Option<f64>,
    /// Use a conductivity written by `vekua fit` instead of the exponential model
    #[arg(long, conflicts_with_all = ["sigma1", "sigma2", "sigma3"])]
    pub fitted: Option<PathBuf>,
    /// Points per axis of the [-1, 1]² grid
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum)]
    pub domain: Option<DomainArg>,
    /// Quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Residual tolerance used by `verify`
    #[arg(long)]
    pub residual_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Clone, Args)]
pub struct DegreeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Formal degree
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "1")]
    pub coeff: CoeffArg,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub degree: DegreeArgs,
    /// Number of seeds on the ring
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Radius of the seed ring
    #[arg(long)]
    pub ring: Option<f64>,
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    /// Step length of the fixed rule
    #[arg(long)]
    pub step: Option<f64>,
    /// Conductivity separating the two tiers of the two-tier rule
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum)]
    pub integrator: Option<IntegratorArg>,
    #[arg(long)]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Scaled,
    TwoTier,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Euler,
    Midpoint,
}

#[derive(Debug, Clone, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub degree: DegreeArgs,
    /// Number of equally spaced angles
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// CSV file with columns x1, x2, sigma
    pub samples: PathBuf,
    /// Offset K; 1 minus the lowest band edge when absent
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, value_enum, default_value = "pchip")]
    pub interp: InterpArg,
    /// Lower x2 edge of the fitted range
    #[arg(long, requires = "x2_max", allow_hyphen_values = true)]
    pub x2_min: Option<f64>,
    /// Upper x2 edge of the fitted range
    #[arg(long, requires = "x2_min", allow_hyphen_values = true)]
    pub x2_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpArg {
    Linear,
    Pchip,
}

impl Common {
    /// The configuration file (or defaults) with flags applied.
    pub fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(path) = &self.fitted {
            cfg.sigma_model = SigmaModel::Fitted { path: path.clone() };
        } else if self.sigma1.is_some() || self.sigma2.is_some() || self.sigma3.is_some() {
            let (mut s1, mut s2, mut s3) = match cfg.sigma_model {
                SigmaModel::Exponential {
                    sigma1,
                    sigma2,
                    sigma3,
                } => (sigma1, sigma2, sigma3),
                SigmaModel::Fitted { .. } => (3.0, 1.0, 0.0),
            };
            s1 = self.sigma1.unwrap_or(s1);
            s2 = self.sigma2.unwrap_or(s2);
            s3 = self.sigma3.unwrap_or(s3);
            cfg.sigma_model = SigmaModel::Exponential {
                sigma1: s1,
                sigma2: s2,
                sigma3: s3,
            };
        }
        if let Some(n) = self.grid {
            cfg.grid = n;
        }
        if let Some(d) = self.domain {
            cfg.domain = match d {
                DomainArg::Disk => Domain::UnitDisk,
                DomainArg::Box => Domain::Box,
            };
        }
        if let Some(t) = self.tol {
            cfg.tolerances.quadrature = t;
        }
        if let Some(t) = self.residual_tol {
            cfg.tolerances.residual = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn format(&self, default: Format) -> Format {
        match self.format {
            None => default,
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            Some(FormatArg::Svg) => Format::Svg,
        }
    }
}

impl DegreeArgs {
    fn coeff(&self) -> Coeff {
        match self.coeff {
            CoeffArg::One => Coeff::One,
            CoeffArg::I => Coeff::I,
        }
    }
}

fn emit(artifact: &Artifact, out: Option<&FsPath>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, &artifact.text)?;
            if let Some(companion) = &artifact.companion {
                std::fs::write(path.with_extension("csv"), companion)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(artifact.text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Powers(a) => {
            let cfg = a.common.config()?;
            let art = cmd_powers(&cfg, a.m, a.coeff(), a.common.format(Format::Csv))?;
            emit(&art, a.common.out.as_deref())?;
        }
        Command::Fields(a) => {
            let cfg = a.common.config()?;
            let art = cmd_fields(&cfg, a.m, a.coeff(), a.common.format(Format::Csv))?;
            emit(&art, a.common.out.as_deref())?;
        }
        Command::Trace(t) => {
            let a = &t.degree;
            let mut cfg = a.common.config()?;
            let s = &mut cfg.trace;
            s.seeds = t.seeds.unwrap_or(s.seeds);
            s.ring_radius = t.ring.unwrap_or(s.ring_radius);
            s.step = t.step.unwrap_or(s.step);
            s.threshold = t.threshold.or(s.threshold);
            s.max_steps = t.max_steps.unwrap_or(s.max_steps);
            if let Some(rule) = t.rule {
                s.rule = match rule {
                    RuleArg::Scaled => RuleKind::ConductivityScaled,
                    RuleArg::TwoTier => RuleKind::TwoTier,
                    RuleArg::Fixed => RuleKind::Fixed,
                };
            }
            if let Some(i) = t.integrator {
                s.integrator = match i {
                    IntegratorArg::Euler => Integrator::Euler,
                    IntegratorArg::Midpoint => Integrator::Midpoint,
                };
            }
            let art = cmd_trace(&cfg, a.m, a.coeff(), a.common.format(Format::Svg))?;
            emit(&art, a.common.out.as_deref())?;
        }
        Command::Boundary(b) => {
            let a = &b.degree;
            let mut cfg = a.common.config()?;
            cfg.boundary_samples = b.samples.unwrap_or(cfg.boundary_samples);
            let art = cmd_boundary(&cfg, a.m, a.coeff(), a.common.format(Format::Csv))?;
            emit(&art, a.common.out.as_deref())?;
        }
        Command::Fit(f) => {
            let opts = FitOptions {
                k: f.k,
                interp: match f.interp {
                    InterpArg::Linear => Interp::Linear,
                    InterpArg::Pchip => Interp::Pchip,
                },
                range: f.x2_min.zip(f.x2_max),
            };
            if let Some((lo, hi)) = opts.range {
                if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::invalid("--x2-min must be below --x2-max"));
                }
            }
            emit(&cmd_fit(&f.samples, &opts)?, f.out.as_deref())?;
        }
        Command::Verify(c) => {
            let cfg = c.config()?;
            let report = cmd_verify(&cfg, c.format(Format::Csv))?;
            emit(&report.artifact, c.out.as_deref())?;
            if !report.all_passed() {
                return Ok(3);
            }
        }
    }
    Ok(0)
}
