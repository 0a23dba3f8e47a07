//! Explicit time stepping: SSP-RK3, the CFL bound and step rejection on
//! loss of positivity.

use crate::error::{Error, PositivityFault, Result};
use crate::field::ConservedField;
use crate::flux::{diffusion_coeffs, LambdaVariant};
use crate::geometry::Grid;
use crate::thermo::{GasParams, PrimitiveState};

/// A state the Runge-Kutta stages can be formed from.
pub trait RkState: Clone {
    /// `self + dt * rate`.
    fn euler(&self, dt: f64, rate: &Self) -> Self;
    /// `self <- a * base + b * self`.
    fn blend(&mut self, a: f64, base: &Self, b: f64);
}

impl RkState for f64 {
    fn euler(&self, dt: f64, rate: &Self) -> Self {
        self + dt * rate
    }

    fn blend(&mut self, a: f64, base: &Self, b: f64) {
        *self = a * base + b * *self;
    }
}

impl<const N: usize> RkState for [f64; N] {
    fn euler(&self, dt: f64, rate: &Self) -> Self {
        std::array::from_fn(|i| self[i] + dt * rate[i])
    }

    fn blend(&mut self, a: f64, base: &Self, b: f64) {
        for i in 0..N {
            self[i] = a * base[i] + b * self[i];
        }
    }
}

/// One Shu-Osher SSP-RK3 step. `rhs(u, t)` evaluates the tendency; stage
/// times are `t`, `t + dt` and `t + dt/2`.
pub fn ssprk3_step<S, F>(u: &S, t: f64, dt: f64, rhs: &mut F) -> Result<S, PositivityFault>
where
    S: RkState,
    F: FnMut(&S, f64) -> Result<S, PositivityFault> + ?Sized,
{
    let l0 = rhs(u, t)?;
    let u1 = u.euler(dt, &l0);

    let l1 = rhs(&u1, t + dt)?;
    let mut u2 = u1.euler(dt, &l1);
    u2.blend(0.75, u, 0.25);

    let l2 = rhs(&u2, t + 0.5 * dt)?;
    let mut u3 = u2.euler(dt, &l2);
    u3.blend(1.0 / 3.0, u, 2.0 / 3.0);
    Ok(u3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    pub cfl: f64,
    pub variant: LambdaVariant,
    pub dt_min: f64,
    pub max_rejects: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            cfl: 0.5,
            variant: LambdaVariant::FirstOrderRStar,
            dt_min: 1e-12,
            max_rejects: 8,
        }
    }
}

/// `cfl * min(h / (|v_n| + c), h² / (2 dim D_max))`, where `D_max` is the
/// largest face `ν̃` plus the largest radiative diffusivity `4 κ_r T³ / (c_v ρ)`.
pub fn stable_dt(prims: &[PrimitiveState], grid: &Grid, gas: &GasParams, variant: LambdaVariant, cfl: f64) -> f64 {
    let mut conv = f64::INFINITY;
    let mut rad_max: f64 = 0.0;
    for q in prims {
        let c = q.sound_speed(gas);
        for axis in grid.active_axes() {
            let h = grid.spacing(axis);
            conv = conv.min(h / (q.vel[axis.index()].abs() + c));
        }
        if gas.kappa_r > 0.0 {
            rad_max = rad_max.max(4.0 * gas.kappa_r * q.t.powi(3) / (gas.cv() * q.rho));
        }
    }
    let mut nu_max: f64 = 0.0;
    for axis in grid.active_axes() {
        let h = grid.spacing(axis);
        for (l, r) in grid.faces(axis) {
            nu_max = nu_max.max(diffusion_coeffs(axis, &prims[l], &prims[r], h, variant, gas).tilde_nu);
        }
    }
    let d_max = nu_max + rad_max;
    let h_min = grid.h_min();
    let diff = if d_max > 0.0 {
        h_min * h_min / (2.0 * grid.dim() as f64 * d_max)
    } else {
        f64::INFINITY
    };
    cfl * conv.min(diff)
}

/// Convenience wrapper converting the field first.
pub fn stable_dt_field(
    field: &ConservedField,
    grid: &Grid,
    gas: &GasParams,
    variant: LambdaVariant,
    cfl: f64,
) -> Result<f64, PositivityFault> {
    Ok(stable_dt(&field.primitives(grid, gas)?, grid, gas, variant, cfl))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub t: f64,
    pub dt: f64,
    pub rejections: usize,
}

/// Owns simulation time and the rejection policy.
#[derive(Debug, Clone, PartialEq)]
pub struct StepController {
    pub cfl: f64,
    pub dt_min: f64,
    pub max_rejects: usize,
    pub t_now: f64,
    pub t_end: f64,
    pub total_rejections: usize,
}

impl StepController {
    pub fn new(params: &SolverParams, t0: f64, t_end: f64) -> Self {
        Self {
            cfl: params.cfl,
            dt_min: params.dt_min,
            max_rejects: params.max_rejects,
            t_now: t0,
            t_end,
            total_rejections: 0,
        }
    }

    pub fn finished(&self) -> bool {
        self.t_now >= self.t_end
    }

    /// Advances `u` by at most `dt_proposed`, clipped to land on `t_end`.
    /// A positivity fault in any stage or in the accepted state halves the
    /// step; the run aborts after `max_rejects` halvings or below `dt_min`.
    pub fn advance<S, F, C>(&mut self, u: &mut S, dt_proposed: f64, rhs: &mut F, check: C) -> Result<StepReport>
    where
        S: RkState,
        F: FnMut(&S, f64) -> Result<S, PositivityFault>,
        C: Fn(&S) -> Result<(), PositivityFault>,
    {
        let remaining = self.t_end - self.t_now;
        let landing = dt_proposed >= remaining * (1.0 - 1e-12);
        let mut dt = if landing { remaining } else { dt_proposed };
        let mut rejections = 0;
        loop {
            let attempt = ssprk3_step(u, self.t_now, dt, rhs).and_then(|next| check(&next).map(|_| next));
            match attempt {
                Ok(next) => {
                    *u = next;
                    self.t_now = if landing && rejections == 0 {
                        self.t_end
                    } else {
                        self.t_now + dt
                    };
                    self.total_rejections += rejections;
                    return Ok(StepReport {
                        t: self.t_now,
                        dt,
                        rejections,
                    });
                }
                Err(fault) => {
                    rejections += 1;
                    log::warn!("step rejected at t = {}: {fault}; halving dt = {dt:e}", self.t_now);
                    dt *= 0.5;
                    if rejections > self.max_rejects || dt < self.dt_min {
                        return Err(Error::Abort {
                            t: self.t_now,
                            fault,
                            rejections,
                        });
                    }
                }
            }
        }
    }
}
