//! The randomized property suite and the reference runs behind the
//! acceptance checks. Shared by `altns verify` and the test suite.
//!
//! Random admissible states have ρ and T log-uniform in `[1e-3, 1e3]` and
//! velocity components uniform in `[-10, 10]`. Every tolerance is relative
//! to `max(1, |largest term being differenced|)` unless stated otherwise.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::balance::{kinetic_balance, wall_momentum_rate};
use crate::diagnostics::convergence::{mms_study, richardson_study, stable_steps, ConvergenceTable, StudySetup};
use crate::diagnostics::entropy::{shuffle_gap, shuffle_scale};
use crate::diagnostics::{totals_from_primitives, DiagnosticsRecord};
use crate::error::{PositivityFault, Result};
use crate::field::ConservedField;
use crate::flux::{convective_flux, euler_flux, lambda_a, lambda_c, r_sensor, LambdaVariant};
use crate::geometry::{Axis, Grid};
use crate::means::{geo_gap_ratio, log_mean_gap_ratio, split_average_residual, FacePair};
use crate::mms::MmsWave;
use crate::presets::{initial_condition, Preset, PresetKind};
use crate::rhs::{apply_boundary_state, Scheme};
use crate::thermo::{GasParams, PrimitiveState};
use crate::timeint::{ssprk3_step, stable_dt, SolverParams, StepController};

pub const VARIANTS: [LambdaVariant; 2] = [LambdaVariant::FirstOrderRStar, LambdaVariant::SecondOrderRSharp];

/// Gas of the reference runs.
pub fn reference_gas() -> GasParams {
    GasParams::new(1.4, 1.0, 0.01, 0.001, 0.001).expect("valid reference gas")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub fn random_state(rng: &mut impl Rng, gas: &GasParams) -> PrimitiveState {
    let rho = 10f64.powf(rng.gen_range(-3.0..=3.0));
    let t = 10f64.powf(rng.gen_range(-3.0..=3.0));
    let vel = std::array::from_fn(|_| rng.gen_range(-10.0..=10.0));
    PrimitiveState::from_rho_vel_t(rho, vel, t, gas)
}

/// Positive pair with `a` log-uniform in `[1e-3, 1e3]` and `b/a` in
/// `[1e-6, 1e6]`. Half the pairs draw a log ratio concentrated near zero
/// to exercise the near-equal branches.
pub fn random_positive_pair(rng: &mut impl Rng) -> (f64, f64) {
    let a = 10f64.powf(rng.gen_range(-3.0..=3.0));
    let mut e: f64 = rng.gen_range(-6.0..=6.0);
    if rng.gen::<bool>() {
        e *= rng.gen::<f64>().powi(8);
    }
    (a, a * 10f64.powf(e))
}

/// Worst `(violation, scale)` tracker: keeps the largest `-margin / scale`.
#[derive(Debug, Default, Clone, Copy)]
struct Worst {
    rel: f64,
    count: usize,
}

impl Worst {
    /// Records `value >= bound` with slack `tol * scale`.
    fn at_least(&mut self, value: f64, bound: f64, scale: f64, tol: f64) {
        let rel = (bound - value) / scale;
        if rel > tol || value.is_nan() {
            self.count += 1;
        }
        if rel > self.rel {
            self.rel = rel;
        }
    }
}

/// Shuffle condition on `pairs` random pairs per axis per variant.
pub fn shuffle_condition(pairs: usize, seed: u64) -> CheckOutcome {
    let gas = GasParams::inviscid(1.4).expect("valid gamma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Worst::default();
    for axis in Axis::ALL {
        for variant in VARIANTS {
            for _ in 0..pairs {
                let l = random_state(&mut rng, &gas);
                let r = random_state(&mut rng, &gas);
                let gap = shuffle_gap(axis, &l, &r, variant, &gas);
                worst.at_least(gap, 0.0, shuffle_scale(axis, &l, &r, variant, &gas), 1e-12);
            }
        }
    }
    CheckOutcome::new(
        "shuffle condition",
        worst.count == 0,
        format!(
            "{pairs} pairs x 3 axes x 2 variants, {} violations, worst deficit/scale {:.2e} (tol 1e-12)",
            worst.count, worst.rel
        ),
    )
}

/// Mean ordering, reciprocal ordering, split identity, the 1/2 bound,
/// dominance of R* and positivity of λᵃ and λᶜ, each on `pairs` samples.
pub fn mean_algebra(pairs: usize, seed: u64) -> Vec<CheckOutcome> {
    const TOL: f64 = 1e-15;
    let gas = GasParams::inviscid(1.4).expect("valid gamma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ordering = Worst::default();
    let mut reciprocal = Worst::default();
    let mut split = Worst::default();
    let mut half = Worst::default();
    let mut dominance = Worst::default();
    let mut lam = Worst::default();

    for _ in 0..pairs {
        let (a, b) = random_positive_pair(&mut rng);
        let p = FacePair::new(a, b);
        let (ar, lg, ge) = (p.arith(), p.log(), p.geo());
        ordering.at_least(lg, ge, ar, TOL);
        ordering.at_least(ar, lg, ar, TOL);
        reciprocal.at_least(1.0 / ge, 1.0 / lg, 1.0 / ge, TOL);
        reciprocal.at_least(1.0 / lg, 1.0 / ar, 1.0 / ge, TOL);

        let half_ratio = log_mean_gap_ratio(a, b).abs();
        half.at_least(0.5, half_ratio, 1.0, 1e-12);

        // dominance of R* over the ratios it must bound
        let r_star = r_sensor(a, b, LambdaVariant::FirstOrderRStar);
        let d = b - a;
        let terms = [
            0.5,
            (d / (12.0 * ar)).abs(),
            geo_gap_ratio(a, b).abs(),
            0.5 * ar * d.abs() / (a * a + a * b + b * b),
            d.abs() / lg,
        ];
        for t in terms {
            dominance.at_least(r_star, t, t.max(1.0), TOL);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..pairs {
        let x = FacePair::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let y = FacePair::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        // every product in the identity is bounded by this
        let scale = x.left.abs().max(x.right.abs()) * y.left.abs().max(y.right.abs());
        split.at_least(-split_average_residual(x, y), 0.0, scale, TOL);

        let l = random_state(&mut rng, &gas);
        let r = random_state(&mut rng, &gas);
        for variant in VARIANTS {
            let axis = Axis::ALL[rng.gen_range(0..3)];
            let la = lambda_a(axis, &l, &r, variant);
            let lc = lambda_c(axis, &l, &r, variant);
            let n = axis.index();
            let u_bar = 0.5 * (l.vel[n] + r.vel[n]);
            let scale = [la, u_bar * geo_gap_ratio(l.rho, r.rho), r.vel[n] - l.vel[n]]
                .iter()
                .fold(1.0f64, |m, v| m.max(v.abs()));
            lam.at_least(la, 0.0, scale, TOL);
            lam.at_least(lc, 0.0, scale, TOL);
        }
    }

    let line = |name: &str, w: Worst, tol: f64| {
        CheckOutcome::new(
            name,
            w.count == 0,
            format!(
                "{pairs} samples, {} violations, worst relative deficit {:.2e} (tol {tol:.0e})",
                w.count,
                w.rel.max(0.0)
            ),
        )
    };
    vec![
        line("mean ordering geo <= log <= arith", ordering, TOL),
        line("reciprocal ordering", reciprocal, TOL),
        line("split average identity", split, TOL),
        line("log-mean gap ratio <= 1/2", half, 1e-12),
        line("R* dominance", dominance, TOL),
        line("lambda^a, lambda^c >= 0 (both variants)", lam, TOL),
    ]
}

/// `convective_flux(q, q)` against the Euler flux of `q`.
pub fn flux_consistency(states: usize, seed: u64) -> CheckOutcome {
    let gas = GasParams::inviscid(1.4).expect("valid gamma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..states {
        let q = random_state(&mut rng, &gas);
        for axis in Axis::ALL {
            let two_point = convective_flux(axis, &q, &q, &gas);
            let exact = euler_flux(axis, &q, &gas);
            let scale = exact.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for c in 0..5 {
                worst = worst.max((two_point[c] - exact[c]).abs() / scale);
            }
        }
    }
    CheckOutcome::new(
        "flux consistency",
        worst <= 1e-13,
        format!("{states} states x 3 axes, max relative deviation {worst:.2e} (tol 1e-13)"),
    )
}

/// Field of independent random admissible states with the wall state imposed.
pub fn random_field(grid: &Grid, gas: &GasParams, rng: &mut impl Rng) -> ConservedField {
    let mut f = ConservedField::from_fn(grid, |_| random_state(rng, gas).to_conserved(gas));
    apply_boundary_state(grid, &mut f);
    f
}

/// Kinetic-energy identity on `fields` random 3D fields spread over `ns`.
pub fn ke_identity(fields: usize, ns: &[usize], seed: u64) -> CheckOutcome {
    let gas = reference_gas();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut faults = 0;
    for i in 0..fields {
        let n = ns[i % ns.len()];
        let grid = Grid::cube(n, 1.0).expect("valid grid");
        let scheme = Scheme::new(grid.clone(), gas, VARIANTS[(i / ns.len()) % 2]);
        let f = random_field(&grid, &gas, &mut rng);
        match kinetic_balance(&scheme, &f) {
            Ok(kb) => worst = worst.max(kb.relative_residual()),
            Err(_) => faults += 1,
        }
    }
    CheckOutcome::new(
        "kinetic-energy balance identity",
        worst <= 1e-11 && faults == 0,
        format!("{fields} fields, N in {ns:?}, max node residual/scale {worst:.2e} (tol 1e-11)"),
    )
}

/// Record of the conservation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationRun {
    pub steps: usize,
    pub t: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    /// Largest `|M(t) - M_law(t)|` over all steps, componentwise maximum.
    pub momentum_law_error: f64,
    /// `ρ_max |v|_max |Ω|` over the run.
    pub momentum_scale: f64,
    /// Largest step-to-step rise of `Σ V U` relative to `|Σ V U|`.
    pub max_entropy_rise: f64,
    pub min_rho: f64,
    pub min_t: f64,
    pub rejections: usize,
    pub elapsed: Duration,
    pub history: Vec<DiagnosticsRecord>,
}

/// SSP-RK3 run of the Gaussian density pulse on an `n³` unit box for
/// `steps` steps at the stable step. The momentum law integrates the wall
/// momentum flux of each stage with the SSP-RK3 weights 1/6, 1/6, 2/3.
pub fn conservation_run(n: usize, steps: usize) -> Result<ConservationRun> {
    let start = Instant::now();
    let gas = reference_gas();
    let grid = Grid::cube(n, 1.0)?;
    let params = SolverParams::default();
    let scheme = Scheme::new(grid.clone(), gas, params.variant);
    let mut field = initial_condition(&Preset::new(PresetKind::GaussianDensityPulse), &grid, &gas)?;

    let record = |f: &ConservedField| -> std::result::Result<DiagnosticsRecord, PositivityFault> {
        let prims = scheme.primitives(f)?;
        Ok(totals_from_primitives(f, &prims, &grid, &gas))
    };
    let first = record(&field)?;
    let mut history = vec![first];
    let mut law = first.total_momentum;
    let mut law_error: f64 = 0.0;
    let mut rho_max: f64 = field.component(0).iter().cloned().fold(0.0, f64::max);
    let mut v_max: f64 = 0.0;
    let mut max_rise = f64::NEG_INFINITY;
    let mut min_rho = first.min_rho;
    let mut min_t = first.min_t;

    let mut ctl = StepController::new(&params, 0.0, f64::INFINITY);
    let check = |u: &ConservedField| scheme.primitives(u).map(|_| ());
    for _ in 0..steps {
        let prims = scheme.primitives(&field)?;
        let dt = stable_dt(&prims, &grid, &gas, params.variant, params.cfl);
        let mut rates: Vec<[f64; 3]> = Vec::with_capacity(3);
        let mut rhs = |u: &ConservedField, t: f64| {
            let prims = scheme.primitives(u)?;
            rates.push(wall_momentum_rate(&scheme, &prims));
            scheme.rhs(u, t)
        };
        let rep = ctl.advance(&mut field, dt, &mut rhs, check)?;
        let accepted = &rates[rates.len() - 3..];
        for c in 0..3 {
            law[c] += rep.dt * (accepted[0][c] / 6.0 + accepted[1][c] / 6.0 + 2.0 * accepted[2][c] / 3.0);
        }

        let rec = record(&field)?;
        for c in 0..3 {
            law_error = law_error.max((rec.total_momentum[c] - law[c]).abs());
        }
        let prev = history.last().expect("history starts with the initial record");
        max_rise = max_rise.max((rec.total_entropy - prev.total_entropy) / prev.total_entropy.abs());
        rho_max = rho_max.max(field.component(0).iter().cloned().fold(0.0, f64::max));
        v_max = v_max.max(rec.max_speed);
        min_rho = min_rho.min(rec.min_rho);
        min_t = min_t.min(rec.min_t);
        history.push(DiagnosticsRecord {
            t: rep.t,
            dt: rep.dt,
            ..rec
        });
    }
    let last = history.last().expect("non-empty history");
    Ok(ConservationRun {
        steps,
        t: last.t,
        mass_drift: (last.total_mass - first.total_mass) / first.total_mass,
        energy_drift: (last.total_energy - first.total_energy) / first.total_energy,
        momentum_law_error: law_error,
        momentum_scale: rho_max * v_max * grid.box_volume(),
        max_entropy_rise: max_rise,
        min_rho,
        min_t,
        rejections: ctl.total_rejections,
        elapsed: start.elapsed(),
        history,
    })
}

pub fn conservation_outcomes(run: &ConservationRun) -> Vec<CheckOutcome> {
    let mass_ok = run.mass_drift.abs() <= 1e-12 && run.energy_drift.abs() <= 1e-12;
    let mom_ok = run.momentum_law_error <= 1e-12 * run.momentum_scale;
    vec![
        CheckOutcome::new(
            "conservation",
            mass_ok && mom_ok,
            format!(
                "{} steps to t = {:.4e} in {:.1?}: mass drift {:.2e}, energy drift {:.2e} (tol 1e-12); \
                 momentum vs wall law {:.2e} <= 1e-12 x {:.3e}",
                run.steps,
                run.t,
                run.elapsed,
                run.mass_drift,
                run.energy_drift,
                run.momentum_law_error,
                run.momentum_scale
            ),
        ),
        CheckOutcome::new(
            "entropy non-increasing",
            run.max_entropy_rise <= 1e-9,
            format!(
                "max relative step rise of total entropy {:.2e} (tol 1e-9)",
                run.max_entropy_rise
            ),
        ),
    ]
}

/// The manufactured-solution study of the reference gas on `grids`.
pub fn mms_setup(variant: LambdaVariant, grids: Vec<usize>) -> StudySetup {
    StudySetup {
        gas: reference_gas(),
        variant,
        grids,
        length: 1.0,
        t_end: 0.5,
        cfl: 0.5,
    }
}

pub fn mms_tables(grids: &[usize]) -> Result<Vec<ConvergenceTable>> {
    VARIANTS
        .iter()
        .map(|&v| mms_study(&mms_setup(v, grids.to_vec()), &MmsWave::new(reference_gas())))
        .collect()
}

/// Required finest-pair order for each variant.
pub fn required_order(variant: LambdaVariant) -> f64 {
    match variant {
        LambdaVariant::FirstOrderRStar => 0.8,
        LambdaVariant::SecondOrderRSharp => 1.8,
    }
}

pub fn convergence_outcomes(tables: &[ConvergenceTable]) -> Vec<CheckOutcome> {
    VARIANTS
        .iter()
        .zip(tables)
        .map(|(&v, t)| {
            let need = required_order(v);
            let (o1, o2) = (
                t.finest_order_l1().unwrap_or(f64::NAN),
                t.finest_order().unwrap_or(f64::NAN),
            );
            CheckOutcome::new(
                format!("grid convergence {}", v.name()),
                o1 >= need && o2 >= need,
                format!(
                    "grids {:?}: finest-pair order L1 {o1:.3}, L2 {o2:.3} (need >= {need})",
                    t.rows.iter().map(|r| r.n).collect::<Vec<_>>()
                ),
            )
        })
        .collect()
}

/// Gaussian pulse used for the self-convergence study: the density preset
/// with amplitude 2 in 1D.
pub fn richardson_pulse(grid: &Grid) -> Result<ConservedField> {
    let mut p = Preset::new(PresetKind::GaussianDensityPulse);
    p.amplitude = 2.0;
    initial_condition(&p, grid, &reference_gas())
}

pub fn richardson_table(variant: LambdaVariant, grids: Vec<usize>) -> Result<ConvergenceTable> {
    richardson_study(&mms_setup(variant, grids), &richardson_pulse)
}

/// Observed slopes of the MMS error against a fine-step reference on a
/// fixed grid. Returns `(dt, error)` rows.
pub fn temporal_sweep(n: usize, t_end: f64, base_factor: usize) -> Result<Vec<(f64, f64)>> {
    let gas = reference_gas();
    let wave = MmsWave::new(gas);
    let grid = Grid::line(n, 1.0)?;
    let scheme = Scheme::new(grid.clone(), gas, LambdaVariant::SecondOrderRSharp).with_source(Arc::new(wave));
    let u0 = wave.field(&grid, 0.0);
    let base = stable_steps(&scheme, &u0, t_end, 0.5)? * base_factor;
    let steps = [base, 2 * base, 4 * base, 8 * base];
    crate::diagnostics::convergence::temporal_study(&scheme, &u0, t_end, &steps, 64 * base)
}

pub fn temporal_outcome(rows: &[(f64, f64)]) -> CheckOutcome {
    let slopes: Vec<f64> = rows.windows(2).map(|w| (w[0].1 / w[1].1).log2()).collect();
    let last = *slopes.last().unwrap_or(&f64::NAN);
    CheckOutcome::new(
        "temporal order",
        (last - 3.0).abs() <= 0.2,
        format!(
            "dt {:?}: slopes {:?}, finest {last:.3} (need 3.0 +/- 0.2)",
            rows.iter().map(|r| format!("{:.2e}", r.0)).collect::<Vec<_>>(),
            slopes.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>()
        ),
    )
}

/// One fixed-step run of the manufactured solution, checking positivity
/// after every step.
pub fn mms_positivity(n: usize, variant: LambdaVariant) -> Result<(f64, f64)> {
    let gas = reference_gas();
    let wave = MmsWave::new(gas);
    let grid = Grid::line(n, 1.0)?;
    let scheme = Scheme::new(grid.clone(), gas, variant).with_source(Arc::new(wave));
    let mut u = wave.field(&grid, 0.0);
    let t_end = 0.5;
    let steps = stable_steps(&scheme, &u, t_end, 0.5)?;
    let dt = t_end / steps as f64;
    let mut rhs = |u: &ConservedField, t: f64| scheme.rhs(u, t);
    let (mut min_rho, mut min_t) = (f64::INFINITY, f64::INFINITY);
    for s in 0..steps {
        u = ssprk3_step(&u, s as f64 * dt, dt, &mut rhs)?;
        for q in scheme.primitives(&u)? {
            min_rho = min_rho.min(q.rho);
            min_t = min_t.min(q.t);
        }
    }
    Ok((min_rho, min_t))
}

/// Positivity over the conservation run and the finest MMS runs.
pub fn positivity_outcome(run: &ConservationRun, mms: &[(LambdaVariant, Result<(f64, f64)>)]) -> CheckOutcome {
    let mut ok = run.min_rho > 0.0 && run.min_t > 0.0 && run.rejections == 0;
    let mut detail = format!(
        "pulse run: min rho {:.4e}, min T {:.4e}, {} rejections",
        run.min_rho, run.min_t, run.rejections
    );
    for (v, r) in mms {
        match r {
            Ok((rho, t)) => {
                ok &= *rho > 0.0 && *t > 0.0;
                detail.push_str(&format!("; mms {}: min rho {rho:.4e}, min T {t:.4e}", v.name()));
            }
            Err(e) => {
                ok = false;
                detail.push_str(&format!("; mms {}: {e}", v.name()));
            }
        }
    }
    CheckOutcome::new("positivity", ok, detail)
}

/// Problem sizes of the suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSize {
    pub shuffle_pairs: usize,
    pub mean_pairs: usize,
    pub flux_states: usize,
    pub ke_fields: usize,
    pub run_n: usize,
    pub run_steps: usize,
    pub mms_grids: &'static [usize],
    pub temporal_n: usize,
}

impl SuiteSize {
    /// The acceptance sizes.
    pub const FULL: SuiteSize = SuiteSize {
        shuffle_pairs: 100_000,
        mean_pairs: 1_000_000,
        flux_states: 10_000,
        ke_fields: 100,
        run_n: 16,
        run_steps: 200,
        mms_grids: &[32, 64, 128, 256],
        temporal_n: 64,
    };

    pub const QUICK: SuiteSize = SuiteSize {
        shuffle_pairs: 10_000,
        mean_pairs: 100_000,
        flux_states: 1_000,
        ke_fields: 12,
        run_n: 8,
        run_steps: 40,
        mms_grids: &[16, 32, 64],
        temporal_n: 32,
    };
}

/// Runs every check, calling `report` as each outcome becomes available.
pub fn run_suite(size: SuiteSize, seed: u64, report: &mut dyn FnMut(&CheckOutcome)) -> Result<Vec<CheckOutcome>> {
    let mut all = Vec::new();
    let mut push = |o: CheckOutcome, all: &mut Vec<CheckOutcome>| {
        report(&o);
        all.push(o);
    };

    let run = conservation_run(size.run_n, size.run_steps)?;
    for o in conservation_outcomes(&run) {
        push(o, &mut all);
    }
    push(shuffle_condition(size.shuffle_pairs, seed), &mut all);
    for o in mean_algebra(size.mean_pairs, seed.wrapping_add(1)) {
        push(o, &mut all);
    }
    push(flux_consistency(size.flux_states, seed.wrapping_add(2)), &mut all);
    push(ke_identity(size.ke_fields, &[4, 8, 16], seed.wrapping_add(3)), &mut all);
    for o in convergence_outcomes(&mms_tables(size.mms_grids)?) {
        push(o, &mut all);
    }
    let finest = *size.mms_grids.last().expect("non-empty grid list");
    let mms: Vec<_> = VARIANTS.iter().map(|&v| (v, mms_positivity(finest, v))).collect();
    push(positivity_outcome(&run, &mms), &mut all);
    push(temporal_outcome(&temporal_sweep(size.temporal_n, 0.25, 1)?), &mut all);
    Ok(all)
}
