//! The batch run loop.
//!
//! Writes `diagnostics.csv` every `csv_every` steps and `snap_NNNNNN.bin`
//! snapshots every `snapshot_every` steps (and always for the first and
//! last step) into the output directory. On a positivity abort the last
//! accepted field is written to `last_good.bin`. At the end the
//! time-integrated norms go to `norms.txt`.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::config::RunConfig;
use crate::diagnostics::report::{write_csv_header, write_csv_row, AprioriReport};
use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::field::ConservedField;
use crate::io::{save_snapshot, Snapshot};
use crate::mms::MmsWave;
use crate::presets::{initial_condition, PresetKind};
use crate::rhs::Scheme;
use crate::timeint::{stable_dt, StepController};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub t: f64,
    pub rejections: usize,
    /// `(M(t) - M(0)) / |M(0)|` for the total mass.
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub final_momentum: [f64; 3],
    /// Largest step-to-step rise of `Σ V U`, relative to `|Σ V U|`
    /// (negative when the entropy decreased on every step).
    pub max_entropy_rise: f64,
    pub entropy_tol: f64,
    pub min_rho: f64,
    pub min_t: f64,
    /// True when a source term is active, so the totals need not be conserved.
    pub forced: bool,
    pub snapshots: Vec<PathBuf>,
    pub norms: AprioriReport,
}

impl RunSummary {
    pub fn entropy_non_increasing(&self) -> bool {
        self.max_entropy_rise <= self.entropy_tol
    }
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.entropy_non_increasing() {
            "non-increasing"
        } else {
            "INCREASED"
        };
        write!(
            f,
            "t = {:.6} after {} steps ({} rejected): mass drift {:.3e}, energy drift {:.3e}, \
             entropy {verdict} (max rel. rise {:.3e}), min rho {:.4e}, min T {:.4e}{}",
            self.t,
            self.steps,
            self.rejections,
            self.mass_drift,
            self.energy_drift,
            self.max_entropy_rise,
            self.min_rho,
            self.min_t,
            if self.forced { " [forced]" } else { "" }
        )
    }
}

/// The scheme a configuration describes, with the manufactured forcing when
/// the initial state is the MMS wave.
pub fn scheme_for(cfg: &RunConfig) -> Scheme {
    let scheme = Scheme::new(cfg.grid.clone(), cfg.gas, cfg.solver.variant);
    if cfg.initial.kind == PresetKind::MmsWave {
        scheme.with_source(Arc::new(MmsWave::new(cfg.gas)))
    } else {
        scheme
    }
}

fn relative(now: f64, start: f64) -> f64 {
    if start != 0.0 {
        (now - start) / start.abs()
    } else {
        now - start
    }
}

fn snapshot(cfg: &RunConfig, field: &ConservedField, t: f64) -> Snapshot {
    Snapshot {
        n: cfg.grid.n(),
        t,
        gamma: cfg.gas.gamma,
        r_gas: cfg.gas.r_gas,
        field: field.clone(),
    }
}

fn save(
    dir: &Path,
    name: String,
    cfg: &RunConfig,
    field: &ConservedField,
    t: f64,
    out: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = dir.join(name);
    save_snapshot(&path, &snapshot(cfg, field, t))?;
    out.push(path);
    Ok(())
}

/// Runs `cfg` to `t_end` (or `max_steps`), writing artifacts as it goes.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let dir = &cfg.output.dir;
    std::fs::create_dir_all(dir)?;
    let scheme = scheme_for(cfg);
    let mut field = initial_condition(&cfg.initial, &cfg.grid, &cfg.gas)?;
    let mut csv = BufWriter::new(File::create(dir.join("diagnostics.csv"))?);
    write_csv_header(&mut csv)?;

    let first = diagnostics::record(&scheme, &field, 0.0, 0.0)?;
    write_csv_row(&mut csv, &first)?;
    let mut snapshots = Vec::new();
    save(dir, format!("snap_{:06}.bin", 0), cfg, &field, 0.0, &mut snapshots)?;

    let mut ctl = StepController::new(&cfg.solver, 0.0, cfg.t_end);
    let mut rhs = |u: &ConservedField, t: f64| scheme.rhs(u, t);
    let check = |u: &ConservedField| scheme.primitives(u).map(|_| ());
    let mut steps = 0;
    let mut last: DiagnosticsRecord = first;
    let mut max_rise = f64::NEG_INFINITY;
    let mut min_rho = first.min_rho;
    let mut min_t = first.min_t;
    let mut norms = AprioriReport::new();
    norms.push(&first);

    while !ctl.finished() && cfg.max_steps.is_none_or(|m| steps < m) {
        let prims = scheme.primitives(&field)?;
        let dt = stable_dt(&prims, &cfg.grid, &cfg.gas, cfg.solver.variant, cfg.solver.cfl);
        let report = match ctl.advance(&mut field, dt, &mut rhs, check) {
            Ok(r) => r,
            Err(e) => {
                if let Error::Abort { .. } = e {
                    let path = dir.join("last_good.bin");
                    save_snapshot(&path, &snapshot(cfg, &field, ctl.t_now))?;
                    log::error!("{e}; last accepted field written to {}", path.display());
                }
                csv.flush()?;
                return Err(e);
            }
        };
        steps += 1;

        let done = ctl.finished() || cfg.max_steps == Some(steps);
        let prims = scheme.primitives(&field)?;
        let mut rec = diagnostics::totals_from_primitives(&field, &prims, &cfg.grid, &cfg.gas);
        rec.t = report.t;
        rec.dt = report.dt;
        rec.entropy_dissipation = diagnostics::entropy::entropy_dissipation_from_primitives(&scheme, &prims);
        norms.push(&rec);
        let rise = (rec.total_entropy - last.total_entropy) / last.total_entropy.abs().max(f64::MIN_POSITIVE);
        if rise > cfg.entropy_tol {
            log::warn!(
                "entropy rose by {rise:.3e} (relative) over the step to t = {} with dt = {:e}",
                rec.t,
                rec.dt
            );
        }
        max_rise = max_rise.max(rise);
        min_rho = min_rho.min(rec.min_rho);
        min_t = min_t.min(rec.min_t);

        if steps % cfg.output.csv_every == 0 || done {
            write_csv_row(&mut csv, &rec)?;
        }
        if (cfg.output.snapshot_every > 0 && steps % cfg.output.snapshot_every == 0) || done {
            save(dir, format!("snap_{steps:06}.bin"), cfg, &field, rec.t, &mut snapshots)?;
        }
        log::debug!("step {steps}: t = {:.6e}, dt = {:.3e}", rec.t, rec.dt);
        last = rec;
    }
    csv.flush()?;
    std::fs::write(dir.join("norms.txt"), norms.to_string())?;

    Ok(RunSummary {
        steps,
        t: ctl.t_now,
        rejections: ctl.total_rejections,
        mass_drift: relative(last.total_mass, first.total_mass),
        energy_drift: relative(last.total_energy, first.total_energy),
        final_momentum: last.total_momentum,
        max_entropy_rise: if steps == 0 { 0.0 } else { max_rise },
        entropy_tol: cfg.entropy_tol,
        min_rho,
        min_t,
        forced: scheme.has_source(),
        snapshots,
        norms,
    })
}
