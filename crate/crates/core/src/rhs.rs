//! Semi-discrete tendency `u_t = -Σ_axes (f_{i+1/2} - f_{i-1/2}) / Δx_i`.
//!
//! Wall closures: the wall-face fluxes of mass and energy vanish, both
//! convective and diffusive, and the momentum tendency at every boundary node
//! is forced to zero. The latter stands in for the mirrored momentum fluxes
//! at the walls, which amount to `(ρv)_t = 0` there. Fluxes tangential to a
//! wall are computed like any interior face.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::PositivityFault;
use crate::field::ConservedField;
use crate::flux::{FaceFlux5, FaceFluxes, LambdaVariant};
use crate::geometry::{Axis, Grid};
use crate::thermo::{primitives_from_conserved, GasParams, PrimitiveState};

/// Additive forcing evaluated after flux assembly.
pub trait SourceTerm: Send + Sync {
    /// Adds the source at time `t` to `out`, which holds the flux tendency.
    fn add_to(&self, grid: &Grid, field: &ConservedField, t: f64, out: &mut ConservedField);
}

/// Sets the momentum of every boundary node to zero. Density and energy are
/// left alone.
pub fn apply_boundary_state(grid: &Grid, field: &mut ConservedField) {
    for idx in 0..grid.len() {
        if grid.is_boundary(idx) {
            for c in 1..4 {
                field.component_mut(c)[idx] = 0.0;
            }
        }
    }
}

/// Primitive states at every node. Every node is converted; the reported
/// fault is the first in storage order so it does not depend on scheduling.
pub fn primitives(
    grid: &Grid,
    field: &ConservedField,
    gas: &GasParams,
) -> Result<Vec<PrimitiveState>, PositivityFault> {
    let all: Vec<Result<PrimitiveState, PositivityFault>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| primitives_from_conserved(&field.get(idx), gas, grid.coords_of(idx)))
        .collect();
    all.into_iter().collect()
}

/// The spatial operator: grid, gas, λ variant and an optional source.
#[derive(Clone)]
pub struct Scheme {
    pub grid: Grid,
    pub gas: GasParams,
    pub variant: LambdaVariant,
    source: Option<Arc<dyn SourceTerm>>,
}

impl std::fmt::Debug for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scheme")
            .field("grid", &self.grid.n())
            .field("gas", &self.gas)
            .field("variant", &self.variant)
            .field("source", &self.source.is_some())
            .finish()
    }
}

impl Scheme {
    pub fn new(grid: Grid, gas: GasParams, variant: LambdaVariant) -> Self {
        Self {
            grid,
            gas,
            variant,
            source: None,
        }
    }

    pub fn with_source(mut self, source: Arc<dyn SourceTerm>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn has_source(&self) -> bool {
        self.source.is_some()
    }

    pub fn primitives(&self, field: &ConservedField) -> Result<Vec<PrimitiveState>, PositivityFault> {
        primitives(&self.grid, field, &self.gas)
    }

    /// All flux pieces on the interior faces normal to `axis`, in
    /// [`Grid::faces`] order.
    pub fn face_fluxes(&self, prims: &[PrimitiveState], axis: Axis) -> Vec<FaceFluxes> {
        let grid = &self.grid;
        let h = grid.spacing(axis);
        let stride = grid.stride(axis);
        (0..grid.face_count(axis))
            .into_par_iter()
            .map(|f| {
                let l = grid.face_left(axis, f);
                FaceFluxes::compute(axis, &prims[l], &prims[l + stride], h, self.variant, &self.gas)
            })
            .collect()
    }

    /// Total fluxes `f^c - f^d` per axis; empty for degenerate axes.
    pub fn face_totals(&self, prims: &[PrimitiveState]) -> [Vec<FaceFlux5>; 3] {
        std::array::from_fn(|a| {
            let axis = Axis::ALL[a];
            if !self.grid.is_active(axis) {
                return Vec::new();
            }
            let grid = &self.grid;
            let h = grid.spacing(axis);
            let stride = grid.stride(axis);
            (0..grid.face_count(axis))
                .into_par_iter()
                .map(|f| {
                    let l = grid.face_left(axis, f);
                    FaceFluxes::compute(axis, &prims[l], &prims[l + stride], h, self.variant, &self.gas).total()
                })
                .collect()
        })
    }

    /// Flux tendency without source.
    pub fn flux_tendency(&self, prims: &[PrimitiveState]) -> ConservedField {
        tendency_from_totals(&self.grid, &self.face_totals(prims))
    }

    /// Full tendency at time `t`.
    pub fn rhs(&self, field: &ConservedField, t: f64) -> Result<ConservedField, PositivityFault> {
        let prims = self.primitives(field)?;
        let mut out = self.flux_tendency(&prims);
        if let Some(src) = &self.source {
            src.add_to(&self.grid, field, t, &mut out);
            apply_boundary_state(&self.grid, &mut out);
        }
        Ok(out)
    }
}

/// Divergence of the face totals with zero wall fluxes, and zero momentum
/// tendency at boundary nodes. Axes are summed in x, y, z order.
pub fn tendency_from_totals(grid: &Grid, totals: &[Vec<FaceFlux5>; 3]) -> ConservedField {
    let active: Vec<Axis> = grid.active_axes().collect();
    let per_node: Vec<[f64; 5]> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let c = grid.coords_of(idx);
            let mut acc = [0.0; 5];
            for &axis in &active {
                let a = axis.index();
                let n = grid.n_axis(axis);
                let lower = if c[a] == 0 {
                    None
                } else {
                    Some(&totals[a][grid.face_of_left(axis, idx - grid.stride(axis)).unwrap()])
                };
                let upper = if c[a] == n {
                    None
                } else {
                    Some(&totals[a][grid.face_of_left(axis, idx).unwrap()])
                };
                let w = grid.dual_width(idx, axis);
                for k in 0..5 {
                    let up = upper.map_or(0.0, |f| f[k]);
                    let lo = lower.map_or(0.0, |f| f[k]);
                    acc[k] += (up - lo) / w;
                }
            }
            let mut out = acc.map(|v| -v);
            if grid.is_boundary(idx) {
                out[1] = 0.0;
                out[2] = 0.0;
                out[3] = 0.0;
            }
            out
        })
        .collect();
    let mut field = ConservedField::zeros(grid.len());
    for (idx, v) in per_node.into_iter().enumerate() {
        field.set(idx, v);
    }
    field
}

/// Tendency of the unforced scheme.
pub fn assemble_rhs(
    field: &ConservedField,
    grid: &Grid,
    gas: &GasParams,
    variant: LambdaVariant,
) -> Result<ConservedField, PositivityFault> {
    let prims = primitives(grid, field, gas)?;
    let scheme = Scheme::new(grid.clone(), *gas, variant);
    Ok(scheme.flux_tendency(&prims))
}
