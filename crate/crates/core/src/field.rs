//! Conserved grid functions in structure-of-arrays layout.

use crate::error::PositivityFault;
use crate::geometry::Grid;
use crate::thermo::{primitives_from_conserved, Conserved, GasParams, PrimitiveState};
use crate::timeint::RkState;

/// Component indices into a [`ConservedField`].
pub const RHO: usize = 0;
pub const ENERGY: usize = 4;

/// `(ρ, m₁, m₂, m₃, E)` at every node, one contiguous array per component,
/// indexed like [`Grid::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedField {
    comps: [Vec<f64>; 5],
}

impl ConservedField {
    pub fn zeros(len: usize) -> Self {
        Self {
            comps: std::array::from_fn(|_| vec![0.0; len]),
        }
    }

    pub fn from_components(comps: [Vec<f64>; 5]) -> Self {
        let n = comps[0].len();
        assert!(comps.iter().all(|c| c.len() == n), "component lengths differ");
        Self { comps }
    }

    /// Evaluates `f` at every node position.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut([f64; 3]) -> Conserved) -> Self {
        let mut out = Self::zeros(grid.len());
        for idx in 0..grid.len() {
            out.set(idx, f(grid.position(idx)));
        }
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.comps[0].len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, idx: usize) -> Conserved {
        std::array::from_fn(|c| self.comps[c][idx])
    }

    #[inline]
    pub fn set(&mut self, idx: usize, u: Conserved) {
        for (c, v) in u.into_iter().enumerate() {
            self.comps[c][idx] = v;
        }
    }

    #[inline]
    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    #[inline]
    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<f64>; 5] {
        &self.comps
    }

    pub fn into_components(self) -> [Vec<f64>; 5] {
        self.comps
    }

    /// Primitive view of every node; fails at the first inadmissible node.
    pub fn primitives(&self, grid: &Grid, gas: &GasParams) -> Result<Vec<PrimitiveState>, PositivityFault> {
        (0..self.len())
            .map(|idx| primitives_from_conserved(&self.get(idx), gas, grid.coords_of(idx)))
            .collect()
    }

    /// Largest absolute entry of each component.
    pub fn max_abs(&self) -> [f64; 5] {
        std::array::from_fn(|c| self.comps[c].iter().fold(0.0, |m: f64, v| m.max(v.abs())))
    }
}

impl RkState for ConservedField {
    fn euler(&self, dt: f64, rate: &Self) -> Self {
        Self {
            comps: std::array::from_fn(|c| {
                self.comps[c]
                    .iter()
                    .zip(&rate.comps[c])
                    .map(|(u, r)| u + dt * r)
                    .collect()
            }),
        }
    }

    fn blend(&mut self, a: f64, base: &Self, b: f64) {
        for c in 0..5 {
            for (s, u) in self.comps[c].iter_mut().zip(&base.comps[c]) {
                *s = a * u + b * *s;
            }
        }
    }
}
