//! Ideal-gas state algebra and entropy quantities.
//!
//! Entropy variables use the scaling
//! `w = (γ/(γ-1) - s/(γ-1) - β|v|², 2βu, 2βv, 2βw, -2β)` with
//! `β = 1/(2RT) = ρ/(2p)` and `s = ln(p/ρ^γ)`. With this scaling `w` is the
//! gradient of the entropy function `U = -ρ s / (γ-1)` with respect to the
//! conserved variables, the entropy flux is `F = -m s / (γ-1)` and the
//! entropy potentials are the momenta. The unscaled pair `-ρ s`, `-m s` differs
//! only by the positive factor `1/(γ-1)`.

use crate::error::{Error, PositiveQuantity, PositivityFault, Result};
use crate::means::FacePair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    pub gamma: f64,
    pub r_gas: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub kappa_r: f64,
    cv: f64,
}

impl GasParams {
    pub fn new(gamma: f64, r_gas: f64, mu0: f64, mu1: f64, kappa_r: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma <= 5.0 / 3.0) {
            return Err(Error::Gas(format!(
                "gamma must lie in (1, 5/3] for an ideal gas, got {gamma}"
            )));
        }
        if !(r_gas > 0.0 && r_gas.is_finite()) {
            return Err(Error::Gas(format!("gas constant must be positive, got {r_gas}")));
        }
        for (name, v) in [("mu0", mu0), ("mu1", mu1), ("kappa_r", kappa_r)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Gas(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(Self {
            gamma,
            r_gas,
            mu0,
            mu1,
            kappa_r,
            cv: r_gas / (gamma - 1.0),
        })
    }

    /// Inviscid gas with unit gas constant.
    pub fn inviscid(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn cv(&self) -> f64 {
        self.cv
    }

    #[inline]
    pub fn gm1(&self) -> f64 {
        self.gamma - 1.0
    }
}

/// Conserved 5-vector `(ρ, m₁, m₂, m₃, E)`.
pub type Conserved = [f64; 5];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub vel: [f64; 3],
    pub p: f64,
    pub t: f64,
    pub beta: f64,
}

impl PrimitiveState {
    /// Builds a state from density, velocity and temperature.
    pub fn from_rho_vel_t(rho: f64, vel: [f64; 3], t: f64, gas: &GasParams) -> Self {
        let p = rho * gas.r_gas * t;
        Self {
            rho,
            vel,
            p,
            t,
            beta: 0.5 / (gas.r_gas * t),
        }
    }

    pub fn from_rho_vel_p(rho: f64, vel: [f64; 3], p: f64, gas: &GasParams) -> Self {
        Self {
            rho,
            vel,
            p,
            t: p / (rho * gas.r_gas),
            beta: rho / (2.0 * p),
        }
    }

    #[inline]
    pub fn speed_sq(&self) -> f64 {
        self.vel[0] * self.vel[0] + self.vel[1] * self.vel[1] + self.vel[2] * self.vel[2]
    }

    #[inline]
    pub fn momentum(&self, c: usize) -> f64 {
        self.rho * self.vel[c]
    }

    pub fn to_conserved(&self, gas: &GasParams) -> Conserved {
        [
            self.rho,
            self.rho * self.vel[0],
            self.rho * self.vel[1],
            self.rho * self.vel[2],
            self.p / gas.gm1() + 0.5 * self.rho * self.speed_sq(),
        ]
    }

    pub fn sound_speed(&self, gas: &GasParams) -> f64 {
        (gas.gamma * self.p / self.rho).sqrt()
    }
}

/// Conserved to primitive conversion; `node` only labels a fault.
pub fn primitives_from_conserved(
    u: &Conserved,
    gas: &GasParams,
    node: [usize; 3],
) -> Result<PrimitiveState, PositivityFault> {
    let rho = u[0];
    if !(rho > 0.0) {
        return Err(PositivityFault {
            quantity: PositiveQuantity::Density,
            value: rho,
            node,
        });
    }
    let vel = [u[1] / rho, u[2] / rho, u[3] / rho];
    let ke = 0.5 * (u[1] * vel[0] + u[2] * vel[1] + u[3] * vel[2]);
    let p = gas.gm1() * (u[4] - ke);
    if !(p > 0.0) {
        return Err(PositivityFault {
            quantity: PositiveQuantity::Pressure,
            value: p,
            node,
        });
    }
    Ok(PrimitiveState {
        rho,
        vel,
        p,
        t: p / (rho * gas.r_gas),
        beta: rho / (2.0 * p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyQuantities {
    /// Specific entropy `ln(p / ρ^γ)`.
    pub s: f64,
    /// Entropy function `-ρ s / (γ-1)`.
    pub u: f64,
    /// Entropy flux `-m s / (γ-1)`.
    pub flux: [f64; 3],
    pub w: [f64; 5],
    /// Entropy potentials, equal to the momenta.
    pub psi: [f64; 3],
}

#[inline]
pub fn specific_entropy(prim: &PrimitiveState, gas: &GasParams) -> f64 {
    prim.p.ln() - gas.gamma * prim.rho.ln()
}

/// The same quantity via `-ln β - (γ-1) ln ρ - ln 2`.
#[inline]
pub fn specific_entropy_from_beta(prim: &PrimitiveState, gas: &GasParams) -> f64 {
    -prim.beta.ln() - gas.gm1() * prim.rho.ln() - std::f64::consts::LN_2
}

pub fn entropy_variables(prim: &PrimitiveState, gas: &GasParams) -> [f64; 5] {
    let s = specific_entropy(prim, gas);
    let gm1 = gas.gm1();
    let b2 = 2.0 * prim.beta;
    [
        gas.gamma / gm1 - s / gm1 - prim.beta * prim.speed_sq(),
        b2 * prim.vel[0],
        b2 * prim.vel[1],
        b2 * prim.vel[2],
        -b2,
    ]
}

pub fn entropy_quantities(prim: &PrimitiveState, gas: &GasParams) -> EntropyQuantities {
    let s = specific_entropy(prim, gas);
    let m = [prim.momentum(0), prim.momentum(1), prim.momentum(2)];
    let scaled = s / gas.gm1();
    EntropyQuantities {
        s,
        u: -prim.rho * scaled,
        flux: [-m[0] * scaled, -m[1] * scaled, -m[2] * scaled],
        w: entropy_variables(prim, gas),
        psi: m,
    }
}

/// Entropy-variable jump `w(right) - w(left)` assembled from face means of
/// `ρ`, `β` and velocity, without forming either endpoint value of `w`.
pub fn delta_w(left: &PrimitiveState, right: &PrimitiveState, gas: &GasParams) -> [f64; 5] {
    let rho = FacePair::new(left.rho, right.rho);
    let beta = FacePair::new(left.beta, right.beta);
    let b_bar = beta.arith();
    let b_hat = beta.log();
    let rho_hat = rho.log();
    let d_beta = beta.jump();

    let mut mean_speed_sq = 0.0;
    let mut w1_vel = 0.0;
    let mut out = [0.0; 5];
    for c in 0..3 {
        let v = FacePair::new(left.vel[c], right.vel[c]);
        let v_bar = v.arith();
        let dv = v.jump();
        mean_speed_sq += 0.5 * (left.vel[c] * left.vel[c] + right.vel[c] * right.vel[c]);
        w1_vel += v_bar * dv;
        out[1 + c] = 2.0 * b_bar * dv + 2.0 * v_bar * d_beta;
    }
    out[0] = rho.jump() / rho_hat + (1.0 / (gas.gm1() * b_hat) - mean_speed_sq) * d_beta - 2.0 * b_bar * w1_vel;
    out[4] = -2.0 * d_beta;
    out
}
