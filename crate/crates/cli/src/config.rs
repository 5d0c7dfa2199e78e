//! Run configuration: a flat TOML file with one value or a list per key.
//!
//! Keys that accept a list (`lambda`, `n_cells`, `cfl`, `order`) sweep over
//! every combination; all other keys take a single value.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sgn_core::{Boundary, Dissipation, PressureForm};

/// Scenario names understood by the driver.
pub const SCENARIOS: [&str; 8] = ["soliton", "gaussian", "hump", "lake-at-rest", "favre", "treske", "shelf", "dingemans"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    ExplicitHsgn,
    SiHsgn,
    ClassicalSgn,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::SiHsgn, SolverKind::ExplicitHsgn, SolverKind::ClassicalSgn];

    pub fn name(self) -> &'static str {
        match self {
            Self::ExplicitHsgn => "explicit-hsgn",
            Self::SiHsgn => "si-hsgn",
            Self::ClassicalSgn => "classical-sgn",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryName {
    Transmissive,
    Periodic,
    Reflective,
}

impl From<BoundaryName> for Boundary {
    fn from(b: BoundaryName) -> Self {
        match b {
            BoundaryName::Transmissive => Boundary::Transmissive,
            BoundaryName::Periodic => Boundary::Periodic,
            BoundaryName::Reflective => Boundary::Reflective,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DissipationName {
    Acoustic,
    Material,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PressureName {
    Balanced,
    Split,
}

/// A scalar or a sweep list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Self::One(v) => vec![v.clone()],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    #[serde(default = "default_solver")]
    pub solver: OneOrMany<SolverKind>,
    #[serde(default = "default_order")]
    pub order: OneOrMany<u32>,
    #[serde(default = "default_lambda")]
    pub lambda: OneOrMany<f64>,
    pub n_cells: OneOrMany<usize>,
    /// Defaults per solver: 2 (SI), 0.4 (explicit), 0.9 (classical).
    pub cfl: Option<OneOrMany<f64>>,
    pub mcfl_limit: Option<f64>,
    pub boundary: Option<BoundaryName>,
    /// Defaults per scenario.
    pub t_final: Option<f64>,
    /// Dimensionless final time for the bore scenarios, `t sqrt(g / h0)`.
    pub t_dimless: Option<f64>,
    #[serde(default)]
    pub gauges: Vec<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,

    pub g: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub amplitude: Option<f64>,
    pub h0: Option<f64>,
    pub x0: Option<f64>,
    /// Depth ratio `h1 / h0` of the bore scenarios.
    pub epsilon: Option<f64>,
    /// Still-water level of the lake-at-rest scenario.
    pub zeta0: Option<f64>,
    /// Bottom breakpoints `[[x, b], ...]` of the Dingemans bar.
    pub bar: Option<Vec<[f64; 2]>>,
    pub limiter: Option<bool>,
    pub dissipation: Option<DissipationName>,
    pub pressure: Option<PressureName>,

    /// Per-solver CFL numbers; they take precedence over `cfl`.
    pub cfl_si: Option<f64>,
    pub cfl_explicit: Option<f64>,
    pub cfl_sgn: Option<f64>,
    /// Timing repetitions; the median is reported.
    pub repeats: Option<usize>,
    /// Also write a classical-SGN reference on a grid three times finer.
    #[serde(default)]
    pub reference: bool,
    /// Also write the per-step trace.
    #[serde(default)]
    pub write_steps: bool,
}

fn default_solver() -> OneOrMany<SolverKind> {
    OneOrMany::One(SolverKind::SiHsgn)
}

fn default_order() -> OneOrMany<u32> {
    OneOrMany::One(2)
}

fn default_lambda() -> OneOrMany<f64> {
    OneOrMany::One(1000.0)
}

fn default_output_dir() -> PathBuf {
    PathBuf::from(".")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("invalid config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if !SCENARIOS.contains(&self.scenario.as_str()) {
            bail!("field `scenario`: unknown scenario `{}` (expected one of {})", self.scenario, SCENARIOS.join(", "));
        }
        let empty = |name: &str, len: usize| -> Result<()> {
            if len == 0 {
                bail!("field `{name}`: sweep list is empty");
            }
            Ok(())
        };
        empty("solver", self.solver.values().len())?;
        empty("order", self.order.values().len())?;
        empty("lambda", self.lambda.values().len())?;
        empty("n_cells", self.n_cells.values().len())?;
        if let Some(c) = &self.cfl {
            empty("cfl", c.values().len())?;
            if c.values().iter().any(|&v| !(v > 0.0)) {
                bail!("field `cfl`: values must be > 0");
            }
        }
        for (name, v) in [("cfl_si", self.cfl_si), ("cfl_explicit", self.cfl_explicit), ("cfl_sgn", self.cfl_sgn)] {
            if let Some(v) = v.filter(|&v| !(v > 0.0)) {
                bail!("field `{name}`: {v} must be > 0");
            }
        }
        if let Some(o) = self.order.values().iter().find(|&&o| o != 1 && o != 2) {
            bail!("field `order`: {o} not in {{1, 2}}");
        }
        if let Some(l) = self.lambda.values().iter().find(|&&l| !(l >= 0.0)) {
            bail!("field `lambda`: {l} must be >= 0");
        }
        if let Some(n) = self.n_cells.values().iter().find(|&&n| n < 4) {
            bail!("field `n_cells`: {n} must be >= 4");
        }
        if let Some(m) = self.mcfl_limit {
            if !(m > 0.0 && m <= 1.0) {
                bail!("field `mcfl_limit`: {m} must lie in (0, 1]");
            }
        }
        if self.t_final.is_some_and(|t| !(t >= 0.0)) {
            bail!("field `t_final`: must be >= 0");
        }
        if self.t_final.is_some() && self.t_dimless.is_some() {
            bail!("field `t_dimless`: give either `t_final` or `t_dimless`, not both");
        }
        if self.repeats == Some(0) {
            bail!("field `repeats`: must be >= 1");
        }
        Ok(())
    }

    pub fn dissipation(&self) -> Dissipation {
        match self.dissipation {
            Some(DissipationName::Material) => Dissipation::Material,
            _ => Dissipation::Acoustic,
        }
    }

    pub fn pressure(&self) -> PressureForm {
        match self.pressure {
            Some(PressureName::Split) => PressureForm::Split,
            _ => PressureForm::Balanced,
        }
    }
}

/// Default CFL number of a solver.
/// CFL numbers to sweep for `kind`: its own key, else `cfl`, else the default.
pub fn cfls_for(cfg: &RunConfig, kind: SolverKind) -> Vec<f64> {
    let own = match kind {
        SolverKind::SiHsgn => cfg.cfl_si,
        SolverKind::ExplicitHsgn => cfg.cfl_explicit,
        SolverKind::ClassicalSgn => cfg.cfl_sgn,
    };
    match (own, &cfg.cfl) {
        (Some(c), _) => vec![c],
        (None, Some(c)) => c.values(),
        (None, None) => vec![default_cfl(kind)],
    }
}

pub fn default_cfl(kind: SolverKind) -> f64 {
    match kind {
        SolverKind::SiHsgn => 2.0,
        SolverKind::ExplicitHsgn => 0.4,
        SolverKind::ClassicalSgn => 0.9,
    }
}
