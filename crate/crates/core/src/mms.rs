//! Manufactured solution for one-dimensional convergence studies.
//!
//! ```text
//! ρ = 1 + a_ρ cos(πx) cos(πt)
//! u = a_u sin(πx) cos(πt),   v = w = 0
//! T = 1 + a_T cos(2πx) cos(πt)
//! ```
//!
//! on `x ∈ [0, 1]`. The velocity vanishes at both walls and `ρ_x = T_x = 0`
//! there, so the solution satisfies the wall conditions. The forcing is the
//! residual of the continuous system
//!
//! ```text
//! ρ_t + (ρu)_x       = (ν ρ_x)_x
//! m_t + (ρu² + p)_x  = (ν m_x)_x
//! E_t + ((E + p)u)_x = (ν E_x)_x + κ_r (T⁴)_xx
//! ```
//!
//! with `ν = μ₀/ρ + μ₁ρ`, evaluated exactly with truncated jets.

use std::f64::consts::PI;

use crate::field::ConservedField;
use crate::geometry::Grid;
use crate::rhs::{apply_boundary_state, SourceTerm};
use crate::thermo::{Conserved, GasParams, PrimitiveState};

/// Value with its first time derivative and first two space derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub t: f64,
    pub x: f64,
    pub xx: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Self {
            v,
            t: 0.0,
            x: 0.0,
            xx: 0.0,
        }
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        Self {
            v: r,
            t: -self.t * r * r,
            x: -self.x * r * r,
            xx: -self.xx * r * r + 2.0 * self.x * self.x * r * r * r,
        }
    }

    pub fn scale(self, s: f64) -> Self {
        Self {
            v: s * self.v,
            t: s * self.t,
            x: s * self.x,
            xx: s * self.xx,
        }
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            t: self.t + o.t,
            x: self.x + o.x,
            xx: self.xx + o.xx,
        }
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + o.scale(-1.0)
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            t: self.t * o.v + self.v * o.t,
            x: self.x * o.v + self.v * o.x,
            xx: self.xx * o.v + 2.0 * self.x * o.x + self.v * o.xx,
        }
    }
}

/// `(ν q_x)_x`.
fn diffusion(nu: Jet, q: Jet) -> f64 {
    nu.x * q.x + nu.v * q.xx
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmsWave {
    pub gas: GasParams,
    pub amp_rho: f64,
    pub amp_u: f64,
    pub amp_t: f64,
}

impl MmsWave {
    pub fn new(gas: GasParams) -> Self {
        Self {
            gas,
            amp_rho: 0.2,
            amp_u: 0.3,
            amp_t: 0.1,
        }
    }

    /// `(ρ, u, T)` as jets.
    pub fn jets(&self, x: f64, t: f64) -> (Jet, Jet, Jet) {
        let (cx, sx) = ((PI * x).cos(), (PI * x).sin());
        let (c2x, s2x) = ((2.0 * PI * x).cos(), (2.0 * PI * x).sin());
        let (ct, st) = ((PI * t).cos(), (PI * t).sin());
        let (a, b, c) = (self.amp_rho, self.amp_u, self.amp_t);
        let rho = Jet {
            v: 1.0 + a * cx * ct,
            t: -a * PI * cx * st,
            x: -a * PI * sx * ct,
            xx: -a * PI * PI * cx * ct,
        };
        let u = Jet {
            v: b * sx * ct,
            t: -b * PI * sx * st,
            x: b * PI * cx * ct,
            xx: -b * PI * PI * sx * ct,
        };
        let temp = Jet {
            v: 1.0 + c * c2x * ct,
            t: -c * PI * c2x * st,
            x: -2.0 * c * PI * s2x * ct,
            xx: -4.0 * c * PI * PI * c2x * ct,
        };
        (rho, u, temp)
    }

    pub fn primitive(&self, x: f64, t: f64) -> PrimitiveState {
        let (rho, u, temp) = self.jets(x, t);
        PrimitiveState::from_rho_vel_t(rho.v, [u.v, 0.0, 0.0], temp.v, &self.gas)
    }

    pub fn conserved(&self, x: f64, t: f64) -> Conserved {
        self.primitive(x, t).to_conserved(&self.gas)
    }

    /// Exact solution at the nodes, with the wall state imposed (the exact
    /// wall velocity is zero; `sin(π)` is not).
    pub fn field(&self, grid: &Grid, t: f64) -> ConservedField {
        let mut f = ConservedField::from_fn(grid, |p| self.conserved(p[0], t));
        apply_boundary_state(grid, &mut f);
        f
    }

    /// Residual of the continuous system at `(x, t)`.
    pub fn residual(&self, x: f64, t: f64) -> [f64; 5] {
        let g = &self.gas;
        let (rho, u, temp) = self.jets(x, t);
        let p = (rho * temp).scale(g.r_gas);
        let m = rho * u;
        let e = p.scale(1.0 / g.gm1()) + (m * u).scale(0.5);
        let nu = rho.recip().scale(g.mu0) + rho.scale(g.mu1);
        let t2 = temp * temp;
        let t4 = t2 * t2;

        let mom_flux = m * u + p;
        let energy_flux = (e + p) * u;
        [
            rho.t + m.x - diffusion(nu, rho),
            m.t + mom_flux.x - diffusion(nu, m),
            0.0,
            0.0,
            e.t + energy_flux.x - diffusion(nu, e) - g.kappa_r * t4.xx,
        ]
    }
}

impl SourceTerm for MmsWave {
    fn add_to(&self, grid: &Grid, _field: &ConservedField, t: f64, out: &mut ConservedField) {
        for idx in 0..grid.len() {
            let x = grid.position(idx)[0];
            let s = self.residual(x, t);
            for (c, v) in s.into_iter().enumerate() {
                out.component_mut(c)[idx] += v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave() -> MmsWave {
        MmsWave::new(GasParams::new(1.4, 1.0, 0.01, 0.001, 0.001).unwrap())
    }

    #[test]
    fn jets_match_finite_differences() {
        let w = wave();
        let h = 1e-4;
        for &(x, t) in &[(0.13, 0.2), (0.5, 0.7), (0.91, 1.3)] {
            let (r, u, tt) = w.jets(x, t);
            for (jet, which) in [(r, 0), (u, 1), (tt, 2)] {
                let val = |x: f64, t: f64| {
                    let j = w.jets(x, t);
                    [j.0.v, j.1.v, j.2.v][which]
                };
                let dt = (val(x, t + h) - val(x, t - h)) / (2.0 * h);
                let dx = (val(x + h, t) - val(x - h, t)) / (2.0 * h);
                let dxx = (val(x + h, t) - 2.0 * val(x, t) + val(x - h, t)) / (h * h);
                assert!((jet.t - dt).abs() < 1e-7);
                assert!((jet.x - dx).abs() < 1e-7);
                assert!((jet.xx - dxx).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn jet_algebra() {
        let a = Jet {
            v: 2.0,
            t: 0.5,
            x: -1.0,
            xx: 3.0,
        };
        let b = Jet {
            v: -0.5,
            t: 1.0,
            x: 0.25,
            xx: -2.0,
        };
        let p = a * b;
        assert_eq!(p.xx, 3.0 * -0.5 + 2.0 * -1.0 * 0.25 + 2.0 * -2.0);
        let one = a * a.recip();
        assert!((one.v - 1.0).abs() < 1e-15);
        assert!(one.t.abs() < 1e-15 && one.x.abs() < 1e-15 && one.xx.abs() < 1e-15);
    }

    /// Independent oracle: the PDE residual from central differences of the
    /// conserved variables, fluxes and diffusion terms built from closed-form
    /// point values only.
    fn residual_by_differences(w: &MmsWave, x: f64, t: f64) -> [f64; 5] {
        let g = &w.gas;
        let h = 1e-4;
        let cons = |x: f64, t: f64| w.conserved(x, t);
        let prim = |x: f64| w.primitive(x, t);
        let flux = |x: f64| {
            let q = prim(x);
            let e = q.p / g.gm1() + 0.5 * q.rho * q.speed_sq();
            [
                q.rho * q.vel[0],
                q.rho * q.vel[0] * q.vel[0] + q.p,
                0.0,
                0.0,
                (e + q.p) * q.vel[0],
            ]
        };
        let nu = |x: f64| {
            let r = prim(x).rho;
            g.mu0 / r + g.mu1 * r
        };
        // (ν q_x)_x as a difference of half-point fluxes
        let diff = |c: usize| {
            let grad = |xa: f64| (cons(xa + 0.5 * h, t)[c] - cons(xa - 0.5 * h, t)[c]) / h;
            (nu(x + 0.5 * h) * grad(x + 0.5 * h) - nu(x - 0.5 * h) * grad(x - 0.5 * h)) / h
        };
        let t4 = |x: f64| prim(x).t.powi(4);
        let rad = g.kappa_r * (t4(x + h) - 2.0 * t4(x) + t4(x - h)) / (h * h);
        let mut out = [0.0; 5];
        for c in 0..5 {
            let ut = (cons(x, t + h)[c] - cons(x, t - h)[c]) / (2.0 * h);
            let fx = (flux(x + h)[c] - flux(x - h)[c]) / (2.0 * h);
            out[c] = ut + fx - diff(c);
        }
        out[4] -= rad;
        out
    }

    #[test]
    fn residual_matches_difference_oracle() {
        let w = wave();
        for &(x, t) in &[
            (0.1, 0.05),
            (0.37, 0.4),
            (0.5, 0.9),
            (0.77, 1.6),
            (0.0, 0.3),
            (1.0, 0.3),
        ] {
            let exact = w.residual(x, t);
            let fd = residual_by_differences(&w, x, t);
            for c in 0..5 {
                assert!(
                    (exact[c] - fd[c]).abs() < 1e-5,
                    "x={x} t={t} c={c}: {} vs {}",
                    exact[c],
                    fd[c]
                );
            }
        }
    }

    #[test]
    fn wall_residual_has_no_momentum_part() {
        let w = wave();
        for t in [0.0, 0.3, 1.1] {
            assert!(w.residual(0.0, t)[1].abs() < 1e-14);
            assert!(w.residual(1.0, t)[1].abs() < 1e-13);
        }
    }

    #[test]
    fn initial_field_matches_exact_solution() {
        let w = wave();
        let grid = Grid::line(16, 1.0).unwrap();
        let f = w.field(&grid, 0.0);
        for idx in 1..16 {
            assert_eq!(f.get(idx), w.conserved(grid.position(idx)[0], 0.0));
        }
        assert_eq!(f.get(0)[1], 0.0);
        assert_eq!(f.get(16)[1], 0.0);
    }
}
