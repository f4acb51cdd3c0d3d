use anyhow::{bail, Context, Result};
use invrod_core::scenario::{
    build_problem, cantilever_problem, find_scenario, CantileverOracle, Geometry, Problem, ScenarioSpec, Support,
};
use invrod_core::SolverConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const CONFIG_VERSION: u32 = 1;

/// Context marker for errors caused by the run configuration.
#[derive(Debug, Clone, Copy)]
pub struct Invalid;

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("invalid configuration")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Forward,
    Inverse,
    Roundtrip,
    Bench,
    Oracle,
}

/// Solver settings a run may override. Unset fields keep the scenario's.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOverrides {
    pub dt: Option<f64>,
    pub max_steps: Option<usize>,
    pub newton_tol: Option<f64>,
    pub max_newton_iters: Option<usize>,
    pub relaxation_tol: Option<f64>,
    pub ramp_fraction: Option<f64>,
    pub damping_steps: Option<f64>,
    pub fixed_steps: Option<bool>,
    pub existence_check: Option<bool>,
}

impl SolverOverrides {
    fn apply(&self, c: &mut SolverConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { c.$f = v; })*};
        }
        set!(dt, max_steps, max_newton_iters, ramp_fraction, damping_steps, fixed_steps, existence_check);
        if self.newton_tol.is_some() {
            c.newton_tol = self.newton_tol;
        }
        if self.relaxation_tol.is_some() {
            c.relaxation_tol = self.relaxation_tol;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CantileverSection {
    pub gamma: f64,
    pub nodes: usize,
}

impl Default for CantileverSection {
    fn default() -> Self {
        Self { gamma: 6.0, nodes: 100 }
    }
}

/// A net file with its material and loads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSection {
    pub net_file: PathBuf,
    pub char_length: f64,
    pub radius: f64,
    pub modulus: f64,
    pub density: f64,
    #[serde(default)]
    pub gravity: Option<[f64; 3]>,
    #[serde(default)]
    pub magnetization: Option<[f64; 3]>,
    #[serde(default)]
    pub field_mt: Option<[f64; 3]>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: u32,
    #[serde(default)]
    pub scenario: Option<String>,
    /// Curve sampling override.
    #[serde(default)]
    pub nodes: Option<usize>,
    #[serde(default)]
    pub cantilever: Option<CantileverSection>,
    #[serde(default)]
    pub custom: Option<CustomSection>,
    #[serde(default)]
    pub solver: SolverOverrides,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub export_every: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: ConfigFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if cfg.version != CONFIG_VERSION {
            bail!("unsupported config version {} (expected {CONFIG_VERSION})", cfg.version);
        }
        Ok(cfg)
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub scenario: Option<String>,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub steps: Option<usize>,
    pub dt: Option<f64>,
    pub export_every: Option<usize>,
}

/// What to run.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Catalog(ScenarioSpec),
    Cantilever(CantileverSection),
}

/// A fully resolved run: flags over file over defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    /// `None` lets `bench` pick its default cases.
    pub source: Option<Source>,
    pub nodes: Option<usize>,
    pub solver: SolverOverrides,
    pub out: PathBuf,
    pub export_every: usize,
}

impl RunConfig {
    pub fn resolve(mode: Mode, flags: Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => Some(ConfigFile::load(p)?),
            None => None,
        };
        let file_ref = file.as_ref();
        let mut solver = file_ref.map(|f| f.solver.clone()).unwrap_or_default();
        if flags.steps.is_some() {
            solver.max_steps = flags.steps;
        }
        if flags.dt.is_some() {
            solver.dt = flags.dt;
        }
        let export_every = flags.export_every.or(file_ref.and_then(|f| f.export_every)).unwrap_or(1);
        if export_every == 0 {
            bail!("export cadence must be at least 1");
        }
        let out = flags
            .out
            .or(file_ref.and_then(|f| f.out.clone()))
            .unwrap_or_else(|| PathBuf::from("out"));
        let name = flags.scenario.or(file_ref.and_then(|f| f.scenario.clone()));
        let cantilever = file_ref.and_then(|f| f.cantilever.clone());
        let source = match (name, file_ref.and_then(|f| f.custom.clone())) {
            (Some(n), _) if n.eq_ignore_ascii_case("cantilever") => Some(Source::Cantilever(cantilever.unwrap_or_default())),
            (Some(n), _) => Some(Source::Catalog(find_scenario(&n)?)),
            (None, Some(c)) => Some(Source::Catalog(custom_spec(c))),
            (None, None) if mode == Mode::Oracle || cantilever.is_some() => {
                Some(Source::Cantilever(cantilever.unwrap_or_default()))
            }
            (None, None) if mode == Mode::Bench => None,
            (None, None) => bail!("no scenario given: use --scenario or a config file"),
        };
        if mode == Mode::Oracle && !matches!(source, Some(Source::Cantilever(_))) {
            bail!("oracle mode runs the cantilever only");
        }
        Ok(Self {
            mode,
            source,
            nodes: file_ref.and_then(|f| f.nodes),
            solver,
            out,
            export_every,
        })
    }
}

fn custom_spec(c: CustomSection) -> ScenarioSpec {
    let name = c
        .net_file
        .file_stem()
        .map_or_else(|| "custom".to_string(), |s| s.to_string_lossy().into_owned());
    ScenarioSpec {
        label: name.clone(),
        name,
        char_length: c.char_length,
        radius: c.radius,
        modulus: c.modulus,
        density: c.density,
        gravity: c.gravity,
        magnetization: c.magnetization,
        field_mt: c.field_mt,
        geometry: Geometry::File(c.net_file.to_string_lossy().into_owned()),
        support: Support::Fixture,
        dt: 1e3,
        max_steps: 40,
    }
}

/// Build the problem for a source with the solver overrides applied. Step
/// budget and time step go into the scenario first so that clamp schedules
/// are built for the final ramp length.
pub fn problem_for(source: &Source, nodes: Option<usize>, solver: &SolverOverrides) -> Result<(Problem, Option<CantileverOracle>)> {
    let (mut problem, oracle) = match source {
        Source::Catalog(spec) => {
            let mut spec = spec.clone();
            if let Some(dt) = solver.dt {
                spec.dt = dt;
            }
            if let Some(n) = solver.max_steps {
                spec.max_steps = n;
            }
            (build_problem(&spec, nodes).context(Invalid)?, None)
        }
        Source::Cantilever(c) => {
            let (p, o) = cantilever_problem(c.gamma, c.nodes).context(Invalid)?;
            (p, Some(o))
        }
    };
    solver.apply(&mut problem.config);
    problem.config.validate().context(Invalid)?;
    Ok((problem, oracle))
}
