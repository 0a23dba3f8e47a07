//! Run configuration, read from TOML.
//!
//! ```toml
//! [grid]
//! n = [16, 16, 16]          # intervals per axis; 0 makes a trailing axis degenerate
//! extent = [1.0, 1.0, 1.0]  # default 1 per axis
//!
//! [gas]
//! gamma = 1.4               # 1 < gamma <= 5/3
//! r_gas = 1.0               # default 1
//! mu0 = 0.01
//! mu1 = 0.001               # default 0
//! kappa_r = 0.0             # default 0
//!
//! [solver]
//! t_end = 0.1
//! cfl = 0.5                 # default
//! variant = "r_star"        # or "r_sharp"
//! dt_min = 1e-12
//! max_rejects = 8
//! max_steps = 1000          # optional cap
//! entropy_tol = 1e-9        # relative slack of the entropy verdict
//! seed = 0                  # seed for the randomized checks
//!
//! [initial]
//! preset = "gaussian_density_pulse"
//! rho = 1.0
//! temperature = 1.0
//! amplitude = 0.5
//! sigma = 0.1
//! center = [0.5, 0.5, 0.5]  # default: box centre
//!
//! [output]
//! dir = "altns-out"
//! csv_every = 1             # steps between CSV rows
//! snapshot_every = 0        # steps between snapshots; 0 = first and last only
//!
//! [convergence]             # optional, used by `altns converge`
//! mode = "mms"              # or "richardson"
//! grids = [32, 64, 128, 256]
//! t_end = 0.5
//! ```
//!
//! Unknown keys are rejected. Errors carry the line of the offending key.

use std::path::PathBuf;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::flux::LambdaVariant;
use crate::geometry::Grid;
use crate::presets::{Preset, PresetKind};
use crate::thermo::GasParams;
use crate::timeint::SolverParams;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grid: RawGrid,
    gas: RawGas,
    solver: RawSolver,
    initial: RawInitial,
    #[serde(default)]
    output: RawOutput,
    convergence: Option<RawConvergence>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: Spanned<[usize; 3]>,
    extent: Option<Spanned<[f64; 3]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGas {
    gamma: Spanned<f64>,
    r_gas: Option<Spanned<f64>>,
    mu0: Spanned<f64>,
    mu1: Option<Spanned<f64>>,
    kappa_r: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    t_end: Spanned<f64>,
    cfl: Option<Spanned<f64>>,
    variant: Option<Spanned<String>>,
    dt_min: Option<Spanned<f64>>,
    max_rejects: Option<usize>,
    max_steps: Option<usize>,
    entropy_tol: Option<Spanned<f64>>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    preset: Spanned<String>,
    rho: Option<f64>,
    temperature: Option<f64>,
    amplitude: Option<f64>,
    sigma: Option<f64>,
    center: Option<[f64; 3]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    csv_every: Option<Spanned<usize>>,
    snapshot_every: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConvergence {
    mode: Spanned<String>,
    grids: Spanned<Vec<usize>>,
    t_end: Option<Spanned<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyMode {
    Mms,
    Richardson,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceConfig {
    pub mode: StudyMode,
    pub grids: Vec<usize>,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub csv_every: usize,
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub gas: GasParams,
    pub solver: SolverParams,
    pub t_end: f64,
    pub max_steps: Option<usize>,
    pub entropy_tol: f64,
    pub seed: u64,
    pub initial: Preset,
    pub output: OutputConfig,
    pub convergence: Option<ConvergenceConfig>,
    /// Non-fatal findings, already logged.
    pub warnings: Vec<String>,
}

/// 1-based line of byte `offset` in `text`.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

struct Checker<'a> {
    text: &'a str,
}

impl Checker<'_> {
    fn fail<T>(&self, at: &Spanned<T>, msg: String) -> Error {
        Error::Config(format!("line {}: {msg}", line_of(self.text, at.span().start)))
    }

    fn positive(&self, name: &str, v: &Spanned<f64>) -> Result<f64> {
        let x = *v.get_ref();
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(self.fail(v, format!("{name} must be positive, got {x}")))
        }
    }

    fn non_negative(&self, name: &str, v: &Spanned<f64>) -> Result<f64> {
        let x = *v.get_ref();
        if x >= 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(self.fail(v, format!("{name} must be non-negative, got {x}")))
        }
    }
}

pub fn parse_variant(s: &str) -> Option<LambdaVariant> {
    match s {
        "r_star" => Some(LambdaVariant::FirstOrderRStar),
        "r_sharp" => Some(LambdaVariant::SecondOrderRSharp),
        _ => None,
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let ck = Checker { text };
    let mut warnings = Vec::new();

    let extent = match &raw.grid.extent {
        Some(e) => {
            for (a, x) in e.get_ref().iter().enumerate() {
                if !(*x > 0.0 && x.is_finite()) {
                    return Err(ck.fail(e, format!("extent[{a}] must be positive, got {x}")));
                }
            }
            *e.get_ref()
        }
        None => [1.0; 3],
    };
    let grid = Grid::new(*raw.grid.n.get_ref(), extent).map_err(|e| ck.fail(&raw.grid.n, e.to_string()))?;

    let g = &raw.gas;
    let gamma = *g.gamma.get_ref();
    if !(gamma > 1.0 && gamma <= 5.0 / 3.0) {
        return Err(ck.fail(
            &g.gamma,
            format!("gamma = {gamma} outside the ideal-gas range (1, 5/3]"),
        ));
    }
    let r_gas = g
        .r_gas
        .as_ref()
        .map(|v| ck.positive("r_gas", v))
        .transpose()?
        .unwrap_or(1.0);
    let mu0 = ck.non_negative("mu0", &g.mu0)?;
    let mu1 = g
        .mu1
        .as_ref()
        .map(|v| ck.non_negative("mu1", v))
        .transpose()?
        .unwrap_or(0.0);
    let kappa_r = g
        .kappa_r
        .as_ref()
        .map(|v| ck.non_negative("kappa_r", v))
        .transpose()?
        .unwrap_or(0.0);
    if mu1 > mu0 {
        let at = g.mu1.as_ref().map_or(0, |v| v.span().start);
        let msg = format!(
            "line {}: mu1 = {mu1} exceeds mu0 = {mu0}; the model assumes mu0 >> mu1",
            line_of(text, at)
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let gas = GasParams::new(gamma, r_gas, mu0, mu1, kappa_r)?;

    let s = &raw.solver;
    let t_end = ck.positive("t_end", &s.t_end)?;
    let mut solver = SolverParams::default();
    if let Some(c) = &s.cfl {
        solver.cfl = ck.positive("cfl", c)?;
    }
    if let Some(v) = &s.variant {
        solver.variant = parse_variant(v.get_ref()).ok_or_else(|| {
            ck.fail(
                v,
                format!("variant must be \"r_star\" or \"r_sharp\", got {:?}", v.get_ref()),
            )
        })?;
    }
    if let Some(d) = &s.dt_min {
        solver.dt_min = ck.positive("dt_min", d)?;
    }
    if let Some(m) = s.max_rejects {
        solver.max_rejects = m;
    }
    let entropy_tol = s
        .entropy_tol
        .as_ref()
        .map(|v| ck.non_negative("entropy_tol", v))
        .transpose()?
        .unwrap_or(1e-9);

    let i = &raw.initial;
    let kind: PresetKind = i
        .preset
        .get_ref()
        .parse()
        .map_err(|e: Error| ck.fail(&i.preset, e.to_string()))?;
    let mut initial = Preset::new(kind);
    initial.rho = i.rho.unwrap_or(initial.rho);
    initial.temperature = i.temperature.unwrap_or(initial.temperature);
    initial.amplitude = i.amplitude.unwrap_or(initial.amplitude);
    initial.sigma = i.sigma.unwrap_or(initial.sigma);
    initial.center = i.center;

    let o = &raw.output;
    let csv_every = match &o.csv_every {
        Some(c) if *c.get_ref() == 0 => return Err(ck.fail(c, "csv_every must be at least 1".into())),
        Some(c) => *c.get_ref(),
        None => 1,
    };
    let output = OutputConfig {
        dir: o.dir.clone().unwrap_or_else(|| PathBuf::from("altns-out")),
        csv_every,
        snapshot_every: o.snapshot_every.unwrap_or(0),
    };

    let convergence = match &raw.convergence {
        None => None,
        Some(c) => {
            let mode = match c.mode.get_ref().as_str() {
                "mms" => StudyMode::Mms,
                "richardson" => StudyMode::Richardson,
                other => {
                    return Err(ck.fail(
                        &c.mode,
                        format!("mode must be \"mms\" or \"richardson\", got {other:?}"),
                    ))
                }
            };
            crate::diagnostics::convergence::check_grid_sequence(c.grids.get_ref())
                .map_err(|e| ck.fail(&c.grids, e.to_string()))?;
            let t = c
                .t_end
                .as_ref()
                .map(|v| ck.positive("t_end", v))
                .transpose()?
                .unwrap_or(t_end);
            Some(ConvergenceConfig {
                mode,
                grids: c.grids.get_ref().clone(),
                t_end: t,
            })
        }
    };

    Ok(RunConfig {
        grid,
        gas,
        solver,
        t_end,
        max_steps: s.max_steps,
        entropy_tol,
        seed: s.seed.unwrap_or(0),
        initial,
        output,
        convergence,
        warnings,
    })
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[grid]
n = [8, 0, 0]

[gas]
gamma = 1.4
mu0 = 0.01

[solver]
t_end = 0.1

[initial]
preset = "uniform_rest"
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.solver.cfl, 0.5);
        assert_eq!(c.solver.variant, LambdaVariant::FirstOrderRStar);
        assert_eq!(c.grid.n(), [8, 0, 0]);
        assert_eq!(c.gas.r_gas, 1.0);
        assert_eq!(c.gas.mu1, 0.0);
        assert_eq!(c.output.csv_every, 1);
        assert_eq!(c.entropy_tol, 1e-9);
        assert!(c.convergence.is_none());
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn gamma_out_of_range_cites_line() {
        let text = MINIMAL.replace("gamma = 1.4", "gamma = 1.8");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("line 6"), "{err}");
        assert!(err.contains("5/3"), "{err}");
    }

    #[test]
    fn mu1_above_mu0_only_warns() {
        let text = MINIMAL.replace("mu0 = 0.01", "mu0 = 0.01\nmu1 = 0.1");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.warnings.len(), 1);
        assert!(c.warnings[0].contains("line 8"), "{}", c.warnings[0]);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = MINIMAL.replace("t_end = 0.1", "t_end = 0.1\nthreads = 4");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("threads"), "{err}");
        assert!(err.contains("line 11"), "{err}");
        assert!(parse_config(&format!("{MINIMAL}\n[extra]\nx = 1\n")).is_err());
    }

    #[test]
    fn full_config() {
        let text = r#"
[grid]
n = [16, 8, 0]
extent = [2.0, 1.0, 1.0]
[gas]
gamma = 1.4
r_gas = 0.5
mu0 = 0.02
mu1 = 0.001
kappa_r = 0.01
[solver]
t_end = 0.5
cfl = 0.3
variant = "r_sharp"
max_steps = 10
seed = 7
[initial]
preset = "thermal_spot"
amplitude = 0.3
center = [1.0, 0.5, 0.0]
[output]
dir = "out"
csv_every = 5
snapshot_every = 20
[convergence]
mode = "richardson"
grids = [16, 32, 64]
"#;
        let c = parse_config(text).unwrap();
        assert_eq!(c.solver.variant, LambdaVariant::SecondOrderRSharp);
        assert_eq!(c.solver.cfl, 0.3);
        assert_eq!(c.max_steps, Some(10));
        assert_eq!(c.seed, 7);
        assert_eq!(c.initial.kind, PresetKind::ThermalSpot);
        assert_eq!(c.initial.center, Some([1.0, 0.5, 0.0]));
        assert_eq!(c.output.snapshot_every, 20);
        let conv = c.convergence.unwrap();
        assert_eq!(conv.mode, StudyMode::Richardson);
        assert_eq!(conv.t_end, 0.5);
    }

    #[test]
    fn bad_values_rejected() {
        for (from, to) in [
            ("mu0 = 0.01", "mu0 = -1.0"),
            ("t_end = 0.1", "t_end = 0.0"),
            ("t_end = 0.1", "t_end = 0.1\ncfl = -0.5"),
            ("t_end = 0.1", "t_end = 0.1\nvariant = \"r_flat\""),
            ("preset = \"uniform_rest\"", "preset = \"vortex\""),
            ("n = [8, 0, 0]", "n = [8, 0, 4]"),
        ] {
            let text = MINIMAL.replace(from, to);
            let err = parse_config(&text).unwrap_err();
            assert!(matches!(err, Error::Config(_)), "{to}: {err}");
            assert!(err.to_string().contains("line"), "{to}: {err}");
        }
        let text = format!("{MINIMAL}\n[convergence]\nmode = \"mms\"\ngrids = [32, 64, 96]\n");
        assert!(parse_config(&text).is_err());
    }
}
