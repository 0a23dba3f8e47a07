//! Two-point face fluxes.
//!
//! The total numerical flux through a face is `f = f^c - f^d`, where the
//! diffusive part splits as `f^d = f^ν + f^λ`. Both diffusive parts share
//! one kernel `G` (the flux per unit diffusivity):
//!
//! ```text
//! G = (Dρ, D(ρu), D(ρv), D(ρw), 𝔭/(γ-1) + ½ D(ρ|v|²) - ¼ |Δv|² Dρ)
//! f^ν = ν G + (0, 0, 0, 0, κ_r D T⁴)
//! f^λ = h λ G
//! ```
//!
//! Velocity components in the normal direction are selected by the axis, so
//! y and z faces use `v` and `w` in place of `u`.

use crate::geometry::Axis;
use crate::means::{log_mean_gap_ratio, FacePair};
use crate::thermo::{GasParams, PrimitiveState};

pub type FaceFlux5 = [f64; 5];

/// Choice of the density sensor in the artificial-diffusion coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaVariant {
    /// `R* = max(1/2, |Δ ln ρ|)`: first order, proven entropy stable.
    #[default]
    FirstOrderRStar,
    /// `R# = max(|(ρ̄ - ρ̂)/Δρ|, |Δ ln ρ|)`: vanishes with `Δρ`.
    SecondOrderRSharp,
}

impl LambdaVariant {
    pub fn name(self) -> &'static str {
        match self {
            LambdaVariant::FirstOrderRStar => "r_star",
            LambdaVariant::SecondOrderRSharp => "r_sharp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionCoeffs {
    pub nu: f64,
    pub lambda: f64,
    /// `ν + h λ`.
    pub tilde_nu: f64,
    /// Sensor value `R*` or `R#` entering `λ`.
    pub r_sensor: f64,
}

impl DiffusionCoeffs {
    /// Coefficients with no artificial part.
    pub fn physical(nu: f64) -> Self {
        Self {
            nu,
            lambda: 0.0,
            tilde_nu: nu,
            r_sensor: 0.0,
        }
    }
}

/// Exact Euler flux `(ρ u_n, ρ u_n v + p e_n, (E + p) u_n)` at a state.
pub fn euler_flux(axis: Axis, q: &PrimitiveState, gas: &GasParams) -> FaceFlux5 {
    let n = axis.index();
    let un = q.vel[n];
    let mass = q.rho * un;
    let e = q.p / gas.gm1() + 0.5 * q.rho * q.speed_sq();
    let mut f = [mass, mass * q.vel[0], mass * q.vel[1], mass * q.vel[2], (e + q.p) * un];
    f[1 + n] += q.p;
    f
}

/// Kinetic-energy preserving, entropy conservative convective flux.
pub fn convective_flux(axis: Axis, left: &PrimitiveState, right: &PrimitiveState, gas: &GasParams) -> FaceFlux5 {
    let n = axis.index();
    let f1 = 0.5 * (left.rho * left.vel[n] + right.rho * right.vel[n]);
    let rho_bar = 0.5 * (left.rho + right.rho);
    let beta = FacePair::new(left.beta, right.beta);
    let p_half = rho_bar / (2.0 * beta.arith());
    let beta_hat = beta.log();

    let v_bar: [f64; 3] = std::array::from_fn(|c| 0.5 * (left.vel[c] + right.vel[c]));
    let v_bar_sq = v_bar[0] * v_bar[0] + v_bar[1] * v_bar[1] + v_bar[2] * v_bar[2];
    let mean_speed_sq = 0.5 * (left.speed_sq() + right.speed_sq());

    let mut f = [f1, v_bar[0] * f1, v_bar[1] * f1, v_bar[2] * f1, 0.0];
    f[1 + n] += p_half;
    f[4] = f1 / (2.0 * gas.gm1() * beta_hat) - 0.5 * mean_speed_sq * f1 + v_bar_sq * f1 + p_half * v_bar[n];
    f
}

/// `R*` or `R#` for a density pair.
pub fn r_sensor(rho_left: f64, rho_right: f64, variant: LambdaVariant) -> f64 {
    let dlog = (rho_right.ln() - rho_left.ln()).abs();
    match variant {
        LambdaVariant::FirstOrderRStar => dlog.max(0.5),
        LambdaVariant::SecondOrderRSharp => dlog.max(log_mean_gap_ratio(rho_left, rho_right)),
    }
}

/// `λ = |ū_n| R + |Δu_n| / 4`.
pub fn lambda_coeff(axis: Axis, left: &PrimitiveState, right: &PrimitiveState, variant: LambdaVariant) -> f64 {
    let n = axis.index();
    let un = FacePair::new(left.vel[n], right.vel[n]);
    un.arith().abs() * r_sensor(left.rho, right.rho, variant) + 0.25 * un.jump().abs()
}

/// `ν = μ₀ / ρ̂ + μ₁ ρ̄`.
pub fn nu_coeff(left: &PrimitiveState, right: &PrimitiveState, gas: &GasParams) -> f64 {
    let rho = FacePair::new(left.rho, right.rho);
    gas.mu0 / rho.log() + gas.mu1 * rho.arith()
}

pub fn diffusion_coeffs(
    axis: Axis,
    left: &PrimitiveState,
    right: &PrimitiveState,
    h: f64,
    variant: LambdaVariant,
    gas: &GasParams,
) -> DiffusionCoeffs {
    let nu = nu_coeff(left, right, gas);
    let n = axis.index();
    let un = FacePair::new(left.vel[n], right.vel[n]);
    let r = r_sensor(left.rho, right.rho, variant);
    let lambda = un.arith().abs() * r + 0.25 * un.jump().abs();
    DiffusionCoeffs {
        nu,
        lambda,
        tilde_nu: nu + h * lambda,
        r_sensor: r,
    }
}

/// Pressure-gradient surrogate `𝔭 = Dρ / (2β̂) + (ρ̄/2) D(1/β)`.
pub fn frak_p(left: &PrimitiveState, right: &PrimitiveState, h: f64) -> f64 {
    let beta_hat = FacePair::new(left.beta, right.beta).log();
    let rho_bar = 0.5 * (left.rho + right.rho);
    (right.rho - left.rho) / h / (2.0 * beta_hat) + 0.5 * rho_bar * (1.0 / right.beta - 1.0 / left.beta) / h
}

/// The diffusive flux per unit diffusivity, without radiation.
pub fn diffusion_kernel(left: &PrimitiveState, right: &PrimitiveState, h: f64, gas: &GasParams) -> FaceFlux5 {
    let d_rho = (right.rho - left.rho) / h;
    let dv_sq: f64 = (0..3)
        .map(|c| {
            let d = right.vel[c] - left.vel[c];
            d * d
        })
        .sum();
    let d_rho_v2 = (right.rho * right.speed_sq() - left.rho * left.speed_sq()) / h;
    [
        d_rho,
        (right.momentum(0) - left.momentum(0)) / h,
        (right.momentum(1) - left.momentum(1)) / h,
        (right.momentum(2) - left.momentum(2)) / h,
        frak_p(left, right, h) / gas.gm1() + 0.5 * d_rho_v2 - 0.25 * dv_sq * d_rho,
    ]
}

/// `κ_r D T⁴`.
pub fn radiation_flux(left: &PrimitiveState, right: &PrimitiveState, h: f64, gas: &GasParams) -> f64 {
    if gas.kappa_r == 0.0 {
        return 0.0;
    }
    gas.kappa_r * (right.t.powi(4) - left.t.powi(4)) / h
}

/// `(f^ν, f^λ)`; the radiation term sits in the ν part.
pub fn split_flux(
    left: &PrimitiveState,
    right: &PrimitiveState,
    coeffs: &DiffusionCoeffs,
    h: f64,
    gas: &GasParams,
) -> (FaceFlux5, FaceFlux5) {
    let g = diffusion_kernel(left, right, h, gas);
    let hl = h * coeffs.lambda;
    let mut nu_part = g.map(|x| coeffs.nu * x);
    nu_part[4] += radiation_flux(left, right, h, gas);
    let lambda_part = g.map(|x| hl * x);
    (nu_part, lambda_part)
}

/// Total diffusive flux `f^d = f^ν + f^λ`.
pub fn diffusive_flux(
    left: &PrimitiveState,
    right: &PrimitiveState,
    coeffs: &DiffusionCoeffs,
    h: f64,
    gas: &GasParams,
) -> FaceFlux5 {
    let (a, b) = split_flux(left, right, coeffs, h, gas);
    std::array::from_fn(|c| a[c] + b[c])
}

/// Every flux piece through one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceFluxes {
    pub conv: FaceFlux5,
    pub nu: FaceFlux5,
    pub lambda: FaceFlux5,
    pub coeffs: DiffusionCoeffs,
}

impl FaceFluxes {
    pub fn compute(
        axis: Axis,
        left: &PrimitiveState,
        right: &PrimitiveState,
        h: f64,
        variant: LambdaVariant,
        gas: &GasParams,
    ) -> Self {
        let coeffs = diffusion_coeffs(axis, left, right, h, variant, gas);
        let (nu, lambda) = split_flux(left, right, &coeffs, h, gas);
        Self {
            conv: convective_flux(axis, left, right, gas),
            nu,
            lambda,
            coeffs,
        }
    }

    /// `f^c - (f^ν + f^λ)`.
    #[inline]
    pub fn total(&self) -> FaceFlux5 {
        std::array::from_fn(|c| self.conv[c] - (self.nu[c] + self.lambda[c]))
    }
}

/// `λ - Δu_n/4`, the coefficient in `f^{c,1} - f^{λ,1} = ρ̄ ū - λᵃ Δρ`.
pub fn lambda_a(axis: Axis, left: &PrimitiveState, right: &PrimitiveState, variant: LambdaVariant) -> f64 {
    let n = axis.index();
    lambda_coeff(axis, left, right, variant) - 0.25 * (right.vel[n] - left.vel[n])
}

/// `λᵃ + ū_n (ρ̄ - ρ̌)/Δρ`, the coefficient in `f^{c,1} - f^{λ,1} = ρ̌ ū - λᶜ Δρ`.
pub fn lambda_c(axis: Axis, left: &PrimitiveState, right: &PrimitiveState, variant: LambdaVariant) -> f64 {
    let n = axis.index();
    let u_bar = 0.5 * (left.vel[n] + right.vel[n]);
    lambda_a(axis, left, right, variant) + u_bar * crate::means::geo_gap_ratio(left.rho, right.rho)
}
