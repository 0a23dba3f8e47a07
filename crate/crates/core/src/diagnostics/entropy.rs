//! Entropy accounting.
//!
//! Contracting the tendency with the entropy variables and summing by parts
//! gives, for fields with zero boundary momentum,
//!
//! ```text
//! -Σ V wᵀu_t = Σ_faces S (Δw)ᵀf^ν + Σ_faces S [ΔΨ - (Δw)ᵀ(f^c - f^λ)]
//! ```
//!
//! The first sum is the physical dissipation and the second the shuffle gap
//! of the convective and artificial fluxes; both are non-negative face by
//! face.

use crate::error::PositivityFault;
use crate::field::ConservedField;
use crate::flux::{convective_flux, diffusion_kernel, lambda_coeff, FaceFlux5, LambdaVariant};
use crate::geometry::Axis;
use crate::means::FacePair;
use crate::rhs::Scheme;
use crate::thermo::{delta_w, entropy_variables, GasParams, PrimitiveState};

fn dot5(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `f^c - f^λ` for a face pair. The artificial flux `hλG` does not depend
/// on the spacing, since `G` carries a factor `1/h`.
pub fn convective_minus_artificial(
    axis: Axis,
    left: &PrimitiveState,
    right: &PrimitiveState,
    variant: LambdaVariant,
    gas: &GasParams,
) -> FaceFlux5 {
    let fc = convective_flux(axis, left, right, gas);
    let lam = lambda_coeff(axis, left, right, variant);
    let g = diffusion_kernel(left, right, 1.0, gas);
    std::array::from_fn(|c| fc[c] - lam * g[c])
}

/// `ΔΨ - (Δw)ᵀ(f^c - f^λ)` with `Ψ` the normal momentum.
pub fn shuffle_gap(
    axis: Axis,
    left: &PrimitiveState,
    right: &PrimitiveState,
    variant: LambdaVariant,
    gas: &GasParams,
) -> f64 {
    let n = axis.index();
    let dpsi = right.momentum(n) - left.momentum(n);
    let dw = delta_w(left, right, gas);
    dpsi - dot5(&dw, &convective_minus_artificial(axis, left, right, variant, gas))
}

/// Magnitude of the terms in [`shuffle_gap`], `max(1, |ΔΨ|, |Δw_c (f^c - f^λ)_c|)`.
pub fn shuffle_scale(
    axis: Axis,
    left: &PrimitiveState,
    right: &PrimitiveState,
    variant: LambdaVariant,
    gas: &GasParams,
) -> f64 {
    let n = axis.index();
    let dw = delta_w(left, right, gas);
    let f = convective_minus_artificial(axis, left, right, variant, gas);
    (0..5)
        .map(|c| (dw[c] * f[c]).abs())
        .fold((right.momentum(n) - left.momentum(n)).abs().max(1.0), f64::max)
}

/// Closed form of `(Δw)ᵀ f^ν` for one face:
/// `ν[(Δρ)(Dρ)/ρ̂ + 2β̄ρ̄ Σ Δv_m D v_m - ρ̄/(γ-1) Δβ D(1/β)] - 2κ_r Δβ D T⁴`.
/// Every bracketed term is non-negative.
pub fn face_dissipation(left: &PrimitiveState, right: &PrimitiveState, nu: f64, h: f64, gas: &GasParams) -> f64 {
    let rho = FacePair::new(left.rho, right.rho);
    let beta = FacePair::new(left.beta, right.beta);
    let d_rho = rho.jump();
    let d_beta = beta.jump();
    let rho_bar = rho.arith();
    let dv_sq: f64 = (0..3).map(|c| (right.vel[c] - left.vel[c]).powi(2)).sum();
    let d_inv_beta = 1.0 / right.beta - 1.0 / left.beta;
    let mut out = nu
        * (d_rho * d_rho / (h * rho.log()) + 2.0 * beta.arith() * rho_bar * dv_sq / h
            - rho_bar / gas.gm1() * d_beta * d_inv_beta / h);
    if gas.kappa_r > 0.0 {
        out -= 2.0 * gas.kappa_r * d_beta * (right.t.powi(4) - left.t.powi(4)) / h;
    }
    out
}

/// `Σ S (Δw)ᵀ f^ν` over all interior faces.
pub fn entropy_dissipation(scheme: &Scheme, field: &ConservedField) -> Result<f64, PositivityFault> {
    Ok(entropy_dissipation_from_primitives(scheme, &scheme.primitives(field)?))
}

pub fn entropy_dissipation_from_primitives(scheme: &Scheme, prims: &[PrimitiveState]) -> f64 {
    let grid = &scheme.grid;
    let mut total = 0.0;
    for axis in grid.active_axes() {
        let h = grid.spacing(axis);
        for (l, r) in grid.faces(axis) {
            let nu = crate::flux::nu_coeff(&prims[l], &prims[r], &scheme.gas);
            total += grid.face_area(l, axis) * face_dissipation(&prims[l], &prims[r], nu, h, &scheme.gas);
        }
    }
    total
}

/// `Σ S gap` over all interior faces.
pub fn total_shuffle_gap(scheme: &Scheme, prims: &[PrimitiveState]) -> f64 {
    let grid = &scheme.grid;
    let mut total = 0.0;
    for axis in grid.active_axes() {
        for (l, r) in grid.faces(axis) {
            total += grid.face_area(l, axis) * shuffle_gap(axis, &prims[l], &prims[r], scheme.variant, &scheme.gas);
        }
    }
    total
}

/// Decomposition of the entropy rate of the unforced scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBudget {
    /// `Σ V wᵀu_t`, the rate of change of `Σ V U`.
    pub production: f64,
    pub dissipation: f64,
    pub shuffle: f64,
    /// `Σ V |wᵀu_t|`, the magnitude against which the budget closes.
    pub scale: f64,
}

impl EntropyBudget {
    /// `|production + dissipation + shuffle| / max(1, scale)`.
    pub fn relative_residual(&self) -> f64 {
        (self.production + self.dissipation + self.shuffle).abs() / self.scale.max(1.0)
    }
}

pub fn entropy_budget(scheme: &Scheme, field: &ConservedField) -> Result<EntropyBudget, PositivityFault> {
    let grid = &scheme.grid;
    let prims = scheme.primitives(field)?;
    let tend = scheme.flux_tendency(&prims);
    let mut production = 0.0;
    let mut scale = 0.0;
    for (i, q) in prims.iter().enumerate() {
        let w = entropy_variables(q, &scheme.gas);
        let c = dot5(&w, &tend.get(i)) * grid.volume(i);
        production += c;
        scale += c.abs();
    }
    Ok(EntropyBudget {
        production,
        dissipation: entropy_dissipation_from_primitives(scheme, &prims),
        shuffle: total_shuffle_gap(scheme, &prims),
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::diffusion_coeffs;
    use crate::flux::split_flux;
    use crate::geometry::Grid;
    use crate::rhs::apply_boundary_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut ChaCha8Rng, g: &GasParams) -> PrimitiveState {
        let rho = 10f64.powf(rng.gen_range(-3.0..3.0));
        let t = 10f64.powf(rng.gen_range(-3.0..3.0));
        let vel = std::array::from_fn(|_| rng.gen_range(-10.0..10.0));
        PrimitiveState::from_rho_vel_t(rho, vel, t, g)
    }

    #[test]
    fn gap_examples() {
        let g = GasParams::inviscid(1.4).unwrap();
        let q = PrimitiveState::from_rho_vel_t(1.3, [0.4, -0.2, 0.1], 0.9, &g);
        assert_eq!(shuffle_gap(Axis::X, &q, &q, LambdaVariant::FirstOrderRStar, &g), 0.0);
        let l = PrimitiveState::from_rho_vel_t(1.0, [0.0; 3], 1.0, &g);
        let r = PrimitiveState::from_rho_vel_t(2.0, [0.0; 3], 1.0, &g);
        for v in [LambdaVariant::FirstOrderRStar, LambdaVariant::SecondOrderRSharp] {
            assert!(shuffle_gap(Axis::X, &l, &r, v, &g) >= 0.0);
        }
    }

    #[test]
    fn gap_nonnegative_on_random_pairs() {
        let g = GasParams::inviscid(1.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for _ in 0..20_000 {
            let l = random_state(&mut rng, &g);
            let r = random_state(&mut rng, &g);
            for axis in Axis::ALL {
                for v in [LambdaVariant::FirstOrderRStar, LambdaVariant::SecondOrderRSharp] {
                    let gap = shuffle_gap(axis, &l, &r, v, &g);
                    assert!(
                        gap >= -1e-12 * shuffle_scale(axis, &l, &r, v, &g),
                        "{axis:?} {v:?} {gap}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_contraction() {
        let g = GasParams::new(1.4, 1.0, 0.03, 0.002, 0.01).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..20_000 {
            let l = random_state(&mut rng, &g);
            let r = random_state(&mut rng, &g);
            let h = 0.1;
            let c = diffusion_coeffs(Axis::Y, &l, &r, h, LambdaVariant::FirstOrderRStar, &g);
            let (nu_part, _) = split_flux(&l, &r, &c, h, &g);
            let dw = delta_w(&l, &r, &g);
            let direct = dot5(&dw, &nu_part);
            let closed = face_dissipation(&l, &r, c.nu, h, &g);
            let scale = (0..5).map(|k| (dw[k] * nu_part[k]).abs()).fold(1e-300, f64::max);
            assert!((direct - closed).abs() <= 1e-11 * scale, "{direct} {closed}");
            assert!(closed >= 0.0);
        }
    }

    #[test]
    fn radiation_alone_dissipates() {
        let g = GasParams::new(1.4, 1.0, 0.0, 0.0, 0.5).unwrap();
        let l = PrimitiveState::from_rho_vel_t(1.0, [0.0; 3], 1.0, &g);
        let r = PrimitiveState::from_rho_vel_t(1.0, [0.0; 3], 1.5, &g);
        assert!(face_dissipation(&l, &r, 0.0, 0.25, &g) > 0.0);
        assert_eq!(face_dissipation(&l, &l, 0.0, 0.25, &g), 0.0);
    }

    #[test]
    fn budget_closes_on_random_fields() {
        let g = GasParams::new(1.4, 1.0, 0.05, 0.005, 0.01).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for n in [[4, 4, 4], [7, 5, 0], [9, 0, 0]] {
            let grid = Grid::new(n, [1.0, 0.7, 0.4]).unwrap();
            for variant in [LambdaVariant::FirstOrderRStar, LambdaVariant::SecondOrderRSharp] {
                let scheme = Scheme::new(grid.clone(), g, variant);
                let mut f = ConservedField::from_fn(&grid, |_| {
                    PrimitiveState::from_rho_vel_t(
                        rng.gen_range(0.5..2.0),
                        std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
                        rng.gen_range(0.5..2.0),
                        &g,
                    )
                    .to_conserved(&g)
                });
                apply_boundary_state(&grid, &mut f);
                let b = entropy_budget(&scheme, &f).unwrap();
                assert!(b.relative_residual() <= 1e-10, "{n:?} {variant:?}: {b:?}");
                assert!(b.production <= 0.0 && b.dissipation >= 0.0 && b.shuffle >= 0.0);
            }
        }
    }
}
