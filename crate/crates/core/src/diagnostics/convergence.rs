//! Grid- and time-convergence studies.
//!
//! Errors are measured in the discrete norms `Σ_c Σ_i V_i |e_c,i|` (L¹) and
//! `(Σ_c Σ_i V_i e_c,i²)^{1/2}` (L²) over all five conserved components.
//! Observed orders are `log₂(e_h / e_{h/2})`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ConservedField;
use crate::flux::LambdaVariant;
use crate::geometry::Grid;
use crate::mms::MmsWave;
use crate::rhs::Scheme;
use crate::thermo::GasParams;
use crate::timeint::{ssprk3_step, stable_dt_field};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub steps: usize,
    pub err_l1: f64,
    pub err_l2: f64,
    /// Order against the previous (coarser) row.
    pub order_l1: Option<f64>,
    pub order_l2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub label: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    fn from_errors(label: String, raw: Vec<(usize, f64, usize, f64, f64)>) -> Self {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(raw.len());
        for (n, h, steps, e1, e2) in raw {
            let prev = rows.last();
            rows.push(ConvergenceRow {
                n,
                h,
                steps,
                err_l1: e1,
                err_l2: e2,
                order_l1: prev.map(|p| (p.err_l1 / e1).log2()),
                order_l2: prev.map(|p| (p.err_l2 / e2).log2()),
            });
        }
        Self { label, rows }
    }

    /// L² order on the finest pair.
    pub fn finest_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order_l2)
    }

    pub fn finest_order_l1(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order_l1)
    }
}

/// At least three grids, each with twice the cells of the previous one.
pub fn check_grid_sequence(ns: &[usize]) -> Result<()> {
    if ns.len() < 3 {
        return Err(Error::Convergence(format!("need at least 3 grids, got {}", ns.len())));
    }
    for w in ns.windows(2) {
        if w[0] == 0 || w[1] != 2 * w[0] {
            return Err(Error::Convergence(format!(
                "grids {} and {} are not nested by a factor 2",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// `(L¹, L²)` norms of `a - b`.
pub fn error_norms(grid: &Grid, a: &ConservedField, b: &ConservedField) -> (f64, f64) {
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    for c in 0..5 {
        for (i, (x, y)) in a.component(c).iter().zip(b.component(c)).enumerate() {
            let e = x - y;
            l1 += grid.volume(i) * e.abs();
            l2 += grid.volume(i) * e * e;
        }
    }
    (l1, l2.sqrt())
}

/// `steps` SSP-RK3 steps of equal size from `t0` to `t_end`.
pub fn integrate(scheme: &Scheme, field: &ConservedField, t0: f64, t_end: f64, steps: usize) -> Result<ConservedField> {
    let dt = (t_end - t0) / steps as f64;
    let mut rhs = |u: &ConservedField, t: f64| scheme.rhs(u, t);
    let mut u = field.clone();
    for s in 0..steps {
        u = ssprk3_step(&u, t0 + s as f64 * dt, dt, &mut rhs)?;
    }
    Ok(u)
}

/// Number of equal steps to reach `t_end` without exceeding the stable step
/// of the initial field.
pub fn stable_steps(scheme: &Scheme, field: &ConservedField, t_end: f64, cfl: f64) -> Result<usize> {
    let dt = stable_dt_field(field, &scheme.grid, &scheme.gas, scheme.variant, cfl)?;
    Ok(((t_end / dt).ceil() as usize).max(1))
}

/// Shared settings of a grid study on `[0, length]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySetup {
    pub gas: GasParams,
    pub variant: LambdaVariant,
    pub grids: Vec<usize>,
    pub length: f64,
    pub t_end: f64,
    pub cfl: f64,
}

/// Manufactured-solution study on a sequence of 1D grids.
pub fn mms_study(setup: &StudySetup, wave: &MmsWave) -> Result<ConvergenceTable> {
    check_grid_sequence(&setup.grids)?;
    let src = Arc::new(*wave);
    let mut raw = Vec::new();
    for &n in &setup.grids {
        let grid = Grid::line(n, setup.length)?;
        let scheme = Scheme::new(grid.clone(), setup.gas, setup.variant).with_source(src.clone());
        let u0 = wave.field(&grid, 0.0);
        let steps = stable_steps(&scheme, &u0, setup.t_end, setup.cfl)?;
        let u = integrate(&scheme, &u0, 0.0, setup.t_end, steps)?;
        let exact = wave.field(&grid, setup.t_end);
        let (e1, e2) = error_norms(&grid, &u, &exact);
        log::info!("mms {} n = {n}: steps {steps}, L2 error {e2:e}", setup.variant.name());
        raw.push((n, grid.h_max(), steps, e1, e2));
    }
    Ok(ConvergenceTable::from_errors(
        format!("mms {}", setup.variant.name()),
        raw,
    ))
}

/// Samples a fine-grid field at the nodes of the grid with half the cells
/// per active axis.
pub fn restrict(fine_grid: &Grid, fine: &ConservedField, coarse_grid: &Grid) -> Result<ConservedField> {
    let nf = fine_grid.n();
    let nc = coarse_grid.n();
    if (0..3).any(|a| nf[a] != 2 * nc[a]) {
        return Err(Error::Convergence(format!(
            "grid {nf:?} is not a 2x refinement of {nc:?}"
        )));
    }
    let mut out = ConservedField::zeros(coarse_grid.len());
    for idx in 0..coarse_grid.len() {
        let [i, j, k] = coarse_grid.coords_of(idx);
        out.set(idx, fine.get(fine_grid.index(2 * i, 2 * j, 2 * k)));
    }
    Ok(out)
}

/// Self-convergence study without an exact solution. Each grid is
/// compared with the next finer one, so the table has one row fewer than
/// `setup.grids`; its last row holds the order of the finest triple.
/// `init(grid)` projects the initial state onto a grid.
pub fn richardson_study(
    setup: &StudySetup,
    init: &dyn Fn(&Grid) -> Result<ConservedField>,
) -> Result<ConvergenceTable> {
    check_grid_sequence(&setup.grids)?;
    let mut solutions = Vec::new();
    for &n in &setup.grids {
        let grid = Grid::line(n, setup.length)?;
        let scheme = Scheme::new(grid.clone(), setup.gas, setup.variant);
        let u0 = init(&grid)?;
        let steps = stable_steps(&scheme, &u0, setup.t_end, setup.cfl)?;
        let u = integrate(&scheme, &u0, 0.0, setup.t_end, steps)?;
        solutions.push((grid, u, steps));
    }
    let mut raw = Vec::new();
    for w in solutions.windows(2) {
        let (coarse_grid, coarse, steps) = &w[0];
        let (fine_grid, fine, _) = &w[1];
        let sampled = restrict(fine_grid, fine, coarse_grid)?;
        let (e1, e2) = error_norms(coarse_grid, coarse, &sampled);
        raw.push((coarse_grid.n()[0], coarse_grid.h_max(), *steps, e1, e2));
    }
    Ok(ConvergenceTable::from_errors(
        format!("richardson {}", setup.variant.name()),
        raw,
    ))
}

/// Errors of runs with `steps[i]` equal steps against a reference with
/// `reference_steps`, on a fixed grid.
pub fn temporal_study(
    scheme: &Scheme,
    field: &ConservedField,
    t_end: f64,
    steps: &[usize],
    reference_steps: usize,
) -> Result<Vec<(f64, f64)>> {
    let reference = integrate(scheme, field, 0.0, t_end, reference_steps)?;
    steps
        .iter()
        .map(|&s| {
            let u = integrate(scheme, field, 0.0, t_end, s)?;
            Ok((t_end / s as f64, error_norms(&scheme.grid, &u, &reference).1))
        })
        .collect()
}
