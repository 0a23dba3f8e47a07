//! Initial conditions, evaluated at the nodes (midpoint projection).
//!
//! With `g(x) = exp(-|x - c|² / (2σ²))` over the active axes:
//!
//! | preset                   | ρ                      | T                | v |
//! |--------------------------|------------------------|------------------|---|
//! | `uniform_rest`           | ρ₀                     | T₀               | 0 |
//! | `gaussian_density_pulse` | ρ₀ + a g               | T₀               | 0 |
//! | `acoustic_pulse`         | ρ₀ (1 + a g)^{1/γ}     | from p = p₀(1 + a g) | 0 |
//! | `thermal_spot`           | ρ₀ / (1 + a g)         | T₀ (1 + a g)     | 0 |
//! | `mms_wave`               | manufactured solution at t = 0, 1D on [0, 1] |
//!
//! `p₀ = ρ₀ R T₀`. The acoustic pulse is isentropic and the thermal spot
//! isobaric. Boundary momenta are zero in every preset.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::ConservedField;
use crate::geometry::Grid;
use crate::mms::MmsWave;
use crate::rhs::apply_boundary_state;
use crate::thermo::{GasParams, PrimitiveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    UniformRest,
    GaussianDensityPulse,
    AcousticPulse,
    ThermalSpot,
    MmsWave,
}

impl PresetKind {
    pub const ALL: [PresetKind; 5] = [
        PresetKind::UniformRest,
        PresetKind::GaussianDensityPulse,
        PresetKind::AcousticPulse,
        PresetKind::ThermalSpot,
        PresetKind::MmsWave,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetKind::UniformRest => "uniform_rest",
            PresetKind::GaussianDensityPulse => "gaussian_density_pulse",
            PresetKind::AcousticPulse => "acoustic_pulse",
            PresetKind::ThermalSpot => "thermal_spot",
            PresetKind::MmsWave => "mms_wave",
        }
    }
}

impl fmt::Display for PresetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub kind: PresetKind,
    /// Background density `ρ₀`, also the density floor of the pulse.
    pub rho: f64,
    /// Background temperature `T₀`.
    pub temperature: f64,
    pub amplitude: f64,
    pub sigma: f64,
    /// Pulse centre; the box centre when `None`.
    pub center: Option<[f64; 3]>,
}

impl Preset {
    pub fn new(kind: PresetKind) -> Self {
        Self {
            kind,
            rho: 1.0,
            temperature: 1.0,
            amplitude: 0.5,
            sigma: 0.1,
            center: None,
        }
    }

    fn profile(&self, grid: &Grid) -> impl Fn([f64; 3]) -> f64 {
        let ext = grid.extent();
        let center = self.center.unwrap_or([0.5 * ext[0], 0.5 * ext[1], 0.5 * ext[2]]);
        let active: Vec<usize> = grid.active_axes().map(|a| a.index()).collect();
        let two_s2 = 2.0 * self.sigma * self.sigma;
        move |x| {
            let r2: f64 = active.iter().map(|&a| (x[a] - center[a]).powi(2)).sum();
            (-r2 / two_s2).exp()
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::Config(format!(
                "preset {}: {what} must be positive, got {v}",
                self.kind
            )))
        };
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad("rho", self.rho);
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return bad("temperature", self.temperature);
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad("sigma", self.sigma);
        }
        if !self.amplitude.is_finite() {
            return Err(Error::Config(format!("preset {}: amplitude must be finite", self.kind)));
        }
        Ok(())
    }
}

/// Projects `preset` onto `grid`. Rejects parameters that give a
/// non-positive density or temperature at any node.
pub fn initial_condition(preset: &Preset, grid: &Grid, gas: &GasParams) -> Result<ConservedField> {
    preset.validate()?;
    let g = preset.profile(grid);
    let (rho0, t0, a) = (preset.rho, preset.temperature, preset.amplitude);
    let state = |rho: f64, t: f64| -> Result<[f64; 5]> {
        if !(rho > 0.0 && t > 0.0) {
            return Err(Error::Config(format!(
                "preset {} gives non-positive state (rho = {rho}, T = {t})",
                preset.kind
            )));
        }
        Ok(PrimitiveState::from_rho_vel_t(rho, [0.0; 3], t, gas).to_conserved(gas))
    };

    let mut field = match preset.kind {
        PresetKind::MmsWave => {
            if grid.dim() != 1 || grid.extent()[0] != 1.0 {
                return Err(Error::Config("preset mms_wave needs a 1D grid on [0, 1]".into()));
            }
            return Ok(MmsWave::new(*gas).field(grid, 0.0));
        }
        _ => {
            let mut nodes = Vec::with_capacity(grid.len());
            for idx in 0..grid.len() {
                let s = g(grid.position(idx));
                let (rho, t) = match preset.kind {
                    PresetKind::UniformRest => (rho0, t0),
                    PresetKind::GaussianDensityPulse => (rho0 + a * s, t0),
                    PresetKind::AcousticPulse => {
                        let q = 1.0 + a * s;
                        let rho = rho0 * q.powf(1.0 / gas.gamma);
                        (rho, rho0 * t0 * q / rho)
                    }
                    PresetKind::ThermalSpot => {
                        let q = 1.0 + a * s;
                        (rho0 / q, t0 * q)
                    }
                    PresetKind::MmsWave => unreachable!(),
                };
                nodes.push(state(rho, t)?);
            }
            let mut f = ConservedField::zeros(grid.len());
            for (idx, u) in nodes.into_iter().enumerate() {
                f.set(idx, u);
            }
            f
        }
    };
    apply_boundary_state(grid, &mut field);
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasParams {
        GasParams::new(1.4, 1.0, 0.01, 0.001, 0.0).unwrap()
    }

    #[test]
    fn names_roundtrip() {
        for k in PresetKind::ALL {
            assert_eq!(k.name().parse::<PresetKind>().unwrap(), k);
        }
        assert!("vortex".parse::<PresetKind>().is_err());
    }

    #[test]
    fn uniform_rest_is_exact() {
        let grid = Grid::cube(4, 1.0).unwrap();
        let f = initial_condition(&Preset::new(PresetKind::UniformRest), &grid, &gas()).unwrap();
        let u0 = f.get(0);
        assert_eq!(&u0[..4], &[1.0, 0.0, 0.0, 0.0]);
        assert!((u0[4] - 2.5).abs() < 1e-15);
        for i in 0..grid.len() {
            assert_eq!(f.get(i), u0);
        }
    }

    #[test]
    fn gaussian_pulse_extremes() {
        let grid = Grid::cube(16, 1.0).unwrap();
        let f = initial_condition(&Preset::new(PresetKind::GaussianDensityPulse), &grid, &gas()).unwrap();
        let rho = f.component(0);
        let max = rho.iter().cloned().fold(f64::MIN, f64::max);
        let min = rho.iter().cloned().fold(f64::MAX, f64::min);
        assert_eq!(max, 1.5);
        assert_eq!(rho[grid.index(8, 8, 8)], 1.5);
        // the corners sit 0.866 from the centre: exp(-0.75/0.02) ≈ 5e-17
        assert!(min >= 1.0 && min - 1.0 < 1e-15);
    }

    #[test]
    fn acoustic_pulse_is_isentropic_and_thermal_spot_isobaric() {
        let g = gas();
        let grid = Grid::new([8, 8, 0], [1.0, 1.0, 1.0]).unwrap();
        let mut p = Preset::new(PresetKind::AcousticPulse);
        p.amplitude = 0.2;
        let f = initial_condition(&p, &grid, &g).unwrap();
        for q in f.primitives(&grid, &g).unwrap() {
            assert!((q.p / q.rho.powf(g.gamma) - 1.0).abs() < 1e-14);
        }
        p.kind = PresetKind::ThermalSpot;
        let f = initial_condition(&p, &grid, &g).unwrap();
        for q in f.primitives(&grid, &g).unwrap() {
            assert!((q.p - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn mms_preset_matches_wave() {
        let g = gas();
        let grid = Grid::line(32, 1.0).unwrap();
        let f = initial_condition(&Preset::new(PresetKind::MmsWave), &grid, &g).unwrap();
        assert_eq!(f, MmsWave::new(g).field(&grid, 0.0));
        assert!(initial_condition(&Preset::new(PresetKind::MmsWave), &Grid::cube(4, 1.0).unwrap(), &g).is_err());
    }

    #[test]
    fn rejects_nonpositive_states() {
        let grid = Grid::line(8, 1.0).unwrap();
        let mut p = Preset::new(PresetKind::GaussianDensityPulse);
        p.amplitude = -2.0;
        assert!(initial_condition(&p, &grid, &gas()).is_err());
        let mut p = Preset::new(PresetKind::UniformRest);
        p.temperature = 0.0;
        assert!(initial_condition(&p, &grid, &gas()).is_err());
    }

    #[test]
    fn boundary_momentum_is_zero() {
        let g = gas();
        let grid = Grid::line(16, 1.0).unwrap();
        let f = initial_condition(&Preset::new(PresetKind::MmsWave), &grid, &g).unwrap();
        assert_eq!(f.get(0)[1], 0.0);
        assert_eq!(f.get(16)[1], 0.0);
    }
}
