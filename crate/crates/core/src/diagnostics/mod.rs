//! Runtime monitors and structural checks of the scheme.

pub mod balance;
pub mod convergence;
pub mod entropy;
pub mod report;

use crate::error::PositivityFault;
use crate::field::ConservedField;
use crate::geometry::{gradient_norm_l2, Grid};
use crate::rhs::Scheme;
use crate::thermo::{entropy_quantities, GasParams, PrimitiveState};

/// Integral quantities and extrema of one field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub dt: f64,
    pub total_mass: f64,
    pub total_momentum: [f64; 3],
    pub total_energy: f64,
    /// `Σ V U` with `U = -ρ s / (γ-1)`.
    pub total_entropy: f64,
    pub total_kinetic: f64,
    pub min_rho: f64,
    pub min_t: f64,
    pub max_speed: f64,
    /// `Σ S (Δw)ᵀ f^ν` over all faces.
    pub entropy_dissipation: f64,
    pub norms: NormSet,
}

/// The discrete norms monitored alongside the totals.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormSet {
    /// `‖ρ‖₂`.
    pub rho_l2: f64,
    /// `‖D₊ ln ρ‖₂`.
    pub grad_log_rho: f64,
    /// `‖ρ̄ D₊v‖₂`.
    pub rho_grad_v: f64,
    /// `‖D₊ T^{3/2}‖₂`.
    pub grad_t32: f64,
}

/// Totals, extrema and norms; the entropy dissipation is left at zero.
pub fn totals(field: &ConservedField, grid: &Grid, gas: &GasParams) -> Result<DiagnosticsRecord, PositivityFault> {
    let prims = field.primitives(grid, gas)?;
    Ok(totals_from_primitives(field, &prims, grid, gas))
}

pub fn totals_from_primitives(
    field: &ConservedField,
    prims: &[PrimitiveState],
    grid: &Grid,
    gas: &GasParams,
) -> DiagnosticsRecord {
    let mut rec = DiagnosticsRecord {
        min_rho: f64::INFINITY,
        min_t: f64::INFINITY,
        ..Default::default()
    };
    for (idx, q) in prims.iter().enumerate() {
        let v = grid.volume(idx);
        let u = field.get(idx);
        rec.total_mass += v * u[0];
        for c in 0..3 {
            rec.total_momentum[c] += v * u[1 + c];
        }
        rec.total_energy += v * u[4];
        rec.total_entropy += v * entropy_quantities(q, gas).u;
        rec.total_kinetic += v * 0.5 * q.rho * q.speed_sq();
        rec.min_rho = rec.min_rho.min(q.rho);
        rec.min_t = rec.min_t.min(q.t);
        rec.max_speed = rec.max_speed.max(q.speed_sq().sqrt());
    }
    rec.norms = norms(prims, grid);
    rec
}

pub fn norms(prims: &[PrimitiveState], grid: &Grid) -> NormSet {
    let rho: Vec<f64> = prims.iter().map(|q| q.rho).collect();
    let log_rho: Vec<f64> = rho.iter().map(|r| r.ln()).collect();
    let t32: Vec<f64> = prims.iter().map(|q| q.t * q.t.sqrt()).collect();
    let mut rgv = 0.0;
    for axis in grid.active_axes() {
        let h = grid.spacing(axis);
        for (l, r) in grid.faces(axis) {
            let rho_bar = 0.5 * (rho[l] + rho[r]);
            let s: f64 = (0..3)
                .map(|c| {
                    let d = rho_bar * (prims[r].vel[c] - prims[l].vel[c]) / h;
                    d * d
                })
                .sum();
            rgv += grid.volume(l) * s;
        }
    }
    NormSet {
        rho_l2: crate::geometry::discrete_norm(grid, &rho, 2.0),
        grad_log_rho: gradient_norm_l2(grid, &log_rho),
        rho_grad_v: rgv.sqrt(),
        grad_t32: gradient_norm_l2(grid, &t32),
    }
}

/// Full record at time `t`, including the entropy dissipation.
pub fn record(scheme: &Scheme, field: &ConservedField, t: f64, dt: f64) -> Result<DiagnosticsRecord, PositivityFault> {
    let prims = scheme.primitives(field)?;
    let mut rec = totals_from_primitives(field, &prims, &scheme.grid, &scheme.gas);
    rec.t = t;
    rec.dt = dt;
    rec.entropy_dissipation = entropy::entropy_dissipation_from_primitives(scheme, &prims);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::PrimitiveState;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_rest_totals() {
        let grid = Grid::cube(4, 1.0).unwrap();
        let gas = GasParams::inviscid(1.4).unwrap();
        let f = ConservedField::from_fn(&grid, |_| [1.0, 0.0, 0.0, 0.0, 2.5]);
        let r = totals(&f, &grid, &gas).unwrap();
        assert!((r.total_mass - 1.0).abs() < 1e-15);
        assert!((r.total_energy - 2.5).abs() < 1e-15);
        assert_eq!(r.total_kinetic, 0.0);
        assert!(r.total_entropy.abs() < 1e-14);
        assert_eq!(r.norms.grad_log_rho, 0.0);
        assert_eq!(r.norms.rho_grad_v, 0.0);
        assert!((r.norms.rho_l2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn isentropic_state_has_zero_entropy() {
        let grid = Grid::cube(3, 2.0).unwrap();
        let gas = GasParams::inviscid(1.4).unwrap();
        let f = ConservedField::from_fn(&grid, |x| {
            let rho = 1.0 + 0.3 * x[0] + 0.1 * x[2];
            PrimitiveState::from_rho_vel_p(rho, [0.0; 3], rho.powf(1.4), &gas).to_conserved(&gas)
        });
        let r = totals(&f, &grid, &gas).unwrap();
        assert!(r.total_entropy.abs() < 1e-14);
    }

    #[test]
    fn momentum_total_matches_serial_sum() {
        let grid = Grid::new([5, 4, 3], [1.0, 0.5, 2.0]).unwrap();
        let gas = GasParams::inviscid(1.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let f = ConservedField::from_fn(&grid, |_| {
            PrimitiveState::from_rho_vel_t(
                rng.gen_range(0.5..2.0),
                std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
                1.0,
                &gas,
            )
            .to_conserved(&gas)
        });
        let r = totals(&f, &grid, &gas).unwrap();
        for c in 0..3 {
            let mut brute = 0.0;
            for i in 0..=5 {
                for j in 0..=4 {
                    for k in 0..=3 {
                        let idx = grid.index(i, j, k);
                        brute += grid.volume(idx) * f.component(1 + c)[idx];
                    }
                }
            }
            assert!((r.total_momentum[c] - brute).abs() <= 1e-14 * brute.abs().max(1e-300));
        }
    }
}
