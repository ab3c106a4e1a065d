//! Batch commands behind the `vekua` binary.
//!
//! Every command returns its artifact as text; the caller decides where it
//! goes. Grid evaluation runs in parallel but rows are collected in grid
//! order, so output depends only on the configuration.

use std::fmt::Write;
use std::path::{Path as FsPath, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conductivity_fit::{
    fit_over, Interp, PiecewiseSeparableSigma, SampleGrid, ROW_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::fields::{
    boundary_trace, render_svg, ring_seeds, trace_both_ways, Integrator, Medium, StepRule,
    Streamline, SvgStyle, TraceConfig,
};
use crate::formal_powers::{Coeff, FormalPowerField, FormalPowerSpec};
use crate::grid::{disk_grid, linspace};
use crate::pseudoanalytic::Point;
use crate::quaternion_ohm::ExpSigmaModel;
use crate::verify::{self, CheckResult, VerifySettings};

pub mod cli;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SigmaModel {
    Exponential {
        sigma1: f64,
        sigma2: f64,
        sigma3: f64,
    },
    /// A conductivity previously written by `vekua fit`.
    Fitted { path: PathBuf },
}

impl Default for SigmaModel {
    fn default() -> Self {
        SigmaModel::Exponential {
            sigma1: 3.0,
            sigma2: 1.0,
            sigma3: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Grid points of `[−1, 1]²` with `|x| ≤ 1`.
    #[default]
    UnitDisk,
    /// Every point of the `[−1, 1]²` grid.
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub quadrature: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quadrature: 1e-9,
            residual: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    #[default]
    ConductivityScaled,
    TwoTier,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceSettings {
    pub seeds: usize,
    pub ring_radius: f64,
    pub rule: RuleKind,
    /// Step length for `fixed`.
    pub step: f64,
    /// Conductivity separating the two tiers of `two_tier`; the value at the
    /// origin when absent.
    pub threshold: Option<f64>,
    pub integrator: Integrator,
    pub max_steps: usize,
    pub arrow_every: usize,
}

impl Default for TraceSettings {
    fn default() -> Self {
        TraceSettings {
            seeds: 12,
            ring_radius: 0.5,
            rule: RuleKind::ConductivityScaled,
            step: 0.01,
            threshold: None,
            integrator: Integrator::Midpoint,
            max_steps: 20_000,
            arrow_every: 25,
        }
    }
}

/// Everything a command needs besides its degree and coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sigma_model: SigmaModel,
    pub domain: Domain,
    pub grid: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub trace: TraceSettings,
    pub boundary_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sigma_model: SigmaModel::default(),
            domain: Domain::UnitDisk,
            grid: 41,
            tolerances: Tolerances::default(),
            seed: 0,
            trace: TraceSettings::default(),
            boundary_samples: 360,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &FsPath) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.grid < 2 {
            return Err(Error::invalid("grid resolution must be at least 2"));
        }
        if !positive(self.tolerances.quadrature) || !positive(self.tolerances.residual) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if let SigmaModel::Exponential {
            sigma1,
            sigma2,
            sigma3,
        } = self.sigma_model
        {
            if ![sigma1, sigma2, sigma3].iter().all(|s| s.is_finite()) {
                return Err(Error::invalid("conductivity exponents must be finite"));
            }
        }
        let t = &self.trace;
        if t.seeds == 0 || !(t.ring_radius > 0.0 && t.ring_radius < 1.0) {
            return Err(Error::invalid(
                "trace needs at least one seed on a ring of radius in (0, 1)",
            ));
        }
        if !positive(t.step) || t.max_steps == 0 || t.arrow_every == 0 {
            return Err(Error::invalid(
                "trace step, max_steps and arrow_every must be positive",
            ));
        }
        if t.threshold.is_some_and(|x| !positive(x)) {
            return Err(Error::invalid("two-tier threshold must be positive"));
        }
        if self.boundary_samples < 3 {
            return Err(Error::invalid("boundary sampling needs at least 3 angles"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn grid_points(&self) -> Vec<Point> {
        match self.domain {
            Domain::UnitDisk => disk_grid(self.grid),
            Domain::Box => {
                let axis = linspace(-1.0, 1.0, self.grid);
                axis.iter()
                    .flat_map(|&a| axis.iter().map(move |&b| Point::new(a, b)))
                    .collect()
            }
        }
    }
}

/// The medium a command works in. A fitted conductivity is represented by
/// the band through the origin, so commands only visit points of that band.
pub struct LoadedModel {
    pub medium: Medium,
    pub exponential: Option<ExpSigmaModel>,
    band: Option<(f64, f64)>,
}

impl LoadedModel {
    pub fn load(model: &SigmaModel) -> Result<Self> {
        match model {
            SigmaModel::Exponential {
                sigma1,
                sigma2,
                sigma3,
            } => {
                let m = ExpSigmaModel::new(*sigma1, *sigma2, *sigma3);
                Ok(LoadedModel {
                    medium: Medium::Exponential(m),
                    exponential: Some(m),
                    band: None,
                })
            }
            SigmaModel::Fitted { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::invalid(format!("cannot read fit {}: {e}", path.display()))
                })?;
                let fitted = PiecewiseSeparableSigma::from_json(&text)?;
                let (band, medium) = fitted.central_medium()?;
                let b = &fitted.bands[band];
                Ok(LoadedModel {
                    medium,
                    exponential: None,
                    band: Some((b.lo, b.hi)),
                })
            }
        }
    }

    pub fn contains(&self, at: Point) -> bool {
        match self.band {
            None => true,
            Some((lo, hi)) => at.x2 >= lo && at.x2 <= hi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::invalid(format!("unknown format `{other}`"))),
        }
    }
}

/// A finished artifact. `companion` holds the vertex CSV written next to a
/// streamline SVG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub text: String,
    pub companion: Option<String>,
}

impl Artifact {
    fn single(text: String) -> Self {
        Artifact {
            text,
            companion: None,
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn json_table(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .iter()
        .map(|row| {
            header
                .iter()
                .zip(row)
                .map(|(k, &v)| (k.to_string(), serde_json::Value::from(v)))
                .collect()
        })
        .collect();
    Ok(serde_json::to_string_pretty(&records)? + "\n")
}

fn table(format: Format, header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    match format {
        Format::Csv => Ok(csv_table(header, rows)),
        Format::Json => json_table(header, rows),
        Format::Svg => Err(Error::invalid("svg output is only available for `trace`")),
    }
}

fn grid_rows<F>(cfg: &RunConfig, model: &LoadedModel, row: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(Point) -> Result<Vec<f64>> + Sync,
{
    cfg.grid_points()
        .into_iter()
        .filter(|&p| model.contains(p))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&p| row(p))
        .collect()
}

/// `Z^(m)(coeff, 0; ζ)` over the grid: columns `x1, x2, re, im`.
pub fn cmd_powers(cfg: &RunConfig, m: usize, coeff: Coeff, format: Format) -> Result<Artifact> {
    cfg.validate()?;
    let model = LoadedModel::load(&cfg.sigma_model)?;
    let field = FormalPowerField::new(
        model.medium.sequence(),
        FormalPowerSpec::at_origin(m, coeff),
        cfg.tolerances.quadrature,
    );
    let rows = grid_rows(cfg, &model, |p| {
        let z = field.try_eval(p)?;
        Ok(vec![p.x1, p.x2, z.re, z.im])
    })?;
    Ok(Artifact::single(table(
        format,
        &["x1", "x2", "re", "im"],
        &rows,
    )?))
}

/// Current density over the grid: columns `x1, x2, j1, j2`.
pub fn cmd_fields(cfg: &RunConfig, m: usize, coeff: Coeff, format: Format) -> Result<Artifact> {
    cfg.validate()?;
    let model = LoadedModel::load(&cfg.sigma_model)?;
    let tol = cfg.tolerances.quadrature;
    let rows = grid_rows(cfg, &model, |p| {
        let j = model.medium.current(m, coeff, p, tol)?;
        Ok(vec![p.x1, p.x2, j.j1, j.j2])
    })?;
    Ok(Artifact::single(table(
        format,
        &["x1", "x2", "j1", "j2"],
        &rows,
    )?))
}

fn step_rule(t: &TraceSettings, medium: &Medium) -> StepRule {
    let sigma0 = medium.conductivity(Point::ORIGIN);
    match t.rule {
        RuleKind::ConductivityScaled => StepRule::conductivity_scaled(sigma0),
        RuleKind::TwoTier => StepRule::two_tier(t.threshold.unwrap_or(sigma0)),
        RuleKind::Fixed => StepRule::Fixed { step: t.step },
    }
}

fn vertex_csv(lines: &[Streamline]) -> String {
    let mut out = String::from("line,direction,vertex,x1,x2\n");
    for (k, line) in lines.iter().enumerate() {
        let direction = if k % 2 == 0 { "backward" } else { "forward" };
        for (v, p) in line.points.iter().enumerate() {
            let _ = writeln!(out, "{},{direction},{v},{},{}", k / 2, num(p.x1), num(p.x2));
        }
    }
    out
}

/// Streamlines through seeds on a ring, traced both ways. SVG output carries
/// the vertex CSV as its companion.
pub fn cmd_trace(cfg: &RunConfig, m: usize, coeff: Coeff, format: Format) -> Result<Artifact> {
    cfg.validate()?;
    let model = LoadedModel::load(&cfg.sigma_model)?;
    let t = &cfg.trace;
    let mut trace_cfg = TraceConfig::new(step_rule(t, &model.medium));
    trace_cfg.integrator = t.integrator;
    trace_cfg.max_steps = t.max_steps;
    let tol = cfg.tolerances.quadrature;
    let current = |p: Point| -> Result<[f64; 2]> {
        if !model.contains(p) {
            return Err(Error::OutsideDomain { x1: p.x1, x2: p.x2 });
        }
        let j = model.medium.current(m, coeff, p, tol)?;
        Ok([j.j1, j.j2])
    };
    let conductivity = |p: Point| model.medium.conductivity(p);
    let seeds = ring_seeds(t.ring_radius, t.seeds, 0.0);
    let traced: Vec<[Streamline; 2]> = seeds
        .par_iter()
        .map(|&s| trace_both_ways(&current, &conductivity, s, &trace_cfg))
        .collect::<Result<_>>()?;
    let lines: Vec<Streamline> = traced.into_iter().flatten().collect();
    let csv = vertex_csv(&lines);
    match format {
        Format::Csv => Ok(Artifact::single(csv)),
        Format::Svg => {
            let style = SvgStyle {
                arrow_every: t.arrow_every,
                ..SvgStyle::default()
            };
            Ok(Artifact {
                text: render_svg(&lines, &style),
                companion: Some(csv),
            })
        }
        Format::Json => Ok(Artifact::single(
            serde_json::to_string_pretty(&lines)? + "\n",
        )),
    }
}

/// Potentials on the unit circle: columns `theta, u, u_h`.
pub fn cmd_boundary(cfg: &RunConfig, m: usize, coeff: Coeff, format: Format) -> Result<Artifact> {
    cfg.validate()?;
    let model = match &cfg.sigma_model {
        SigmaModel::Exponential {
            sigma1,
            sigma2,
            sigma3,
        } => ExpSigmaModel::new(*sigma1, *sigma2, *sigma3),
        SigmaModel::Fitted { .. } => {
            return Err(Error::invalid(
                "boundary potentials are only defined for exponential conductivities",
            ))
        }
    };
    let trace = boundary_trace(m, coeff, &model, cfg.boundary_samples)?;
    match format {
        Format::Json => Ok(Artifact::single(
            serde_json::to_string_pretty(&trace)? + "\n",
        )),
        _ => {
            let rows: Vec<Vec<f64>> = trace
                .samples
                .iter()
                .map(|s| vec![s.theta, s.u, s.u_h])
                .collect();
            Ok(Artifact::single(table(
                format,
                &["theta", "u", "u_h"],
                &rows,
            )?))
        }
    }
}

/// Options of `vekua fit`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitOptions {
    pub k: Option<f64>,
    pub interp: Interp,
    /// Restricts the bands to `[lo, hi]` in `x2`; the sample range otherwise.
    pub range: Option<(f64, f64)>,
}

/// Fits a piecewise separable conductivity to CSV samples `x1, x2, sigma`.
pub fn cmd_fit(samples: &FsPath, opts: &FitOptions) -> Result<Artifact> {
    let file = std::fs::File::open(samples)
        .map_err(|e| Error::invalid(format!("cannot read samples {}: {e}", samples.display())))?;
    let grid = SampleGrid::from_csv(file, ROW_TOLERANCE)?;
    let (lo, hi) = opts.range.unwrap_or_else(|| grid.ordinate_range());
    let fitted = fit_over(&grid, opts.k, opts.interp, lo, hi)?;
    Ok(Artifact::single(fitted.to_json()? + "\n"))
}

/// Outcome of `vekua verify`.
pub struct VerifyReport {
    pub results: Vec<CheckResult>,
    pub artifact: Artifact,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

pub fn cmd_verify(cfg: &RunConfig, format: Format) -> Result<VerifyReport> {
    cfg.validate()?;
    let (sigma1, sigma2) = match cfg.sigma_model {
        SigmaModel::Exponential { sigma1, sigma2, .. } => (sigma1, sigma2),
        SigmaModel::Fitted { .. } => {
            return Err(Error::invalid("verify runs on exponential conductivities"))
        }
    };
    let settings = VerifySettings {
        sigma1,
        sigma2,
        grid: cfg.grid,
        quadrature_tol: cfg.tolerances.quadrature,
        residual_tol: cfg.tolerances.residual,
        seed: cfg.seed,
    };
    let results = verify::run_all(&settings);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&results)? + "\n",
        Format::Csv | Format::Svg => verify::render_table(&results),
    };
    Ok(VerifyReport {
        results,
        artifact: Artifact::single(text),
    })
}
