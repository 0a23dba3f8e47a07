//! Kinetic- and internal-energy balances of the scheme and the momentum
//! exchange with the walls.
//!
//! Every face contributes to its two nodes. With total flux `F`, face means
//! of the adjacent velocities and `𝔉 = v̄·F_m - ½ mean(|v|²) F_1`, the left
//! node receives `-𝔉 + r` and the right node `+𝔉 + r`, where
//! `r = ½ Δu_n p_{1/2} - ½ ν̃ ρ̄ |Δv|² / h` collects the pressure work and the
//! dissipation shares. Dividing by the dual width gives
//! `K_t = -D₋𝔉 + (pDv) - 𝔇` at every node. At boundary nodes the dual width
//! is `h/2`, which doubles the shares relative to interior nodes.

use crate::error::PositivityFault;
use crate::field::ConservedField;
use crate::flux::FaceFluxes;
use crate::means::FacePair;
use crate::rhs::Scheme;
use crate::thermo::PrimitiveState;

/// Per-node pieces of the kinetic-energy balance.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticBalance {
    /// `K_t = v·m_t - ½|v|² ρ_t` from the scheme tendency.
    pub k_t: Vec<f64>,
    /// `D₋𝔉` summed over axes.
    pub flux_div: Vec<f64>,
    /// `(pDv)`.
    pub pdv: Vec<f64>,
    /// `𝔇 ≥ 0`.
    pub dissipation: Vec<f64>,
}

impl KineticBalance {
    /// Largest node residual `|K_t - (-D₋𝔉 + pDv - 𝔇)|`, each divided by
    /// `max(1, largest term at that node)`.
    pub fn relative_residual(&self) -> f64 {
        (0..self.k_t.len())
            .map(|i| {
                let rhs = -self.flux_div[i] + self.pdv[i] - self.dissipation[i];
                let scale = [self.k_t[i], self.flux_div[i], self.pdv[i], self.dissipation[i]]
                    .iter()
                    .fold(1.0f64, |m, v| m.max(v.abs()));
                (self.k_t[i] - rhs).abs() / scale
            })
            .fold(0.0, f64::max)
    }
}

/// `(𝔉, pressure-work share, dissipation share)` for one face, before
/// division by the dual width.
fn face_ke_pieces(
    axis_index: usize,
    l: &PrimitiveState,
    r: &PrimitiveState,
    ff: &FaceFluxes,
    h: f64,
) -> (f64, f64, f64) {
    let total = ff.total();
    let mut v_bar_fm = 0.0;
    let mut dv_sq = 0.0;
    for c in 0..3 {
        let v = FacePair::new(l.vel[c], r.vel[c]);
        v_bar_fm += v.arith() * total[1 + c];
        dv_sq += v.jump() * v.jump();
    }
    let mean_speed_sq = 0.5 * (l.speed_sq() + r.speed_sq());
    let frak_f = v_bar_fm - 0.5 * mean_speed_sq * total[0];
    let rho_bar = 0.5 * (l.rho + r.rho);
    let p_half = rho_bar / (l.beta + r.beta);
    let pdv = 0.5 * (r.vel[axis_index] - l.vel[axis_index]) * p_half;
    let diss = 0.5 * ff.coeffs.tilde_nu * rho_bar * dv_sq / h;
    (frak_f, pdv, diss)
}

/// Kinetic-energy balance of the unforced scheme at `field`. The field is
/// expected to satisfy the wall state (zero boundary momentum).
pub fn kinetic_balance(scheme: &Scheme, field: &ConservedField) -> Result<KineticBalance, PositivityFault> {
    let grid = &scheme.grid;
    let prims = scheme.primitives(field)?;
    let tend = scheme.flux_tendency(&prims);
    let n = grid.len();

    let k_t: Vec<f64> = (0..n)
        .map(|i| {
            let q = &prims[i];
            let mut s = -0.5 * q.speed_sq() * tend.component(0)[i];
            for c in 0..3 {
                s += q.vel[c] * tend.component(1 + c)[i];
            }
            s
        })
        .collect();

    let mut flux_div = vec![0.0; n];
    let mut pdv = vec![0.0; n];
    let mut dissipation = vec![0.0; n];
    for axis in grid.active_axes() {
        let h = grid.spacing(axis);
        let fluxes = scheme.face_fluxes(&prims, axis);
        for ((l, r), ff) in grid.faces(axis).zip(&fluxes) {
            let (frak_f, p, d) = face_ke_pieces(axis.index(), &prims[l], &prims[r], ff, h);
            let wl = grid.dual_width(l, axis);
            let wr = grid.dual_width(r, axis);
            flux_div[l] += frak_f / wl;
            flux_div[r] -= frak_f / wr;
            pdv[l] += p / wl;
            pdv[r] += p / wr;
            dissipation[l] += d / wl;
            dissipation[r] += d / wr;
        }
    }
    Ok(KineticBalance {
        k_t,
        flux_div,
        pdv,
        dissipation,
    })
}

/// Largest relative node residual of the internal-energy equation
/// `E_t - K_t = -D₋(f^{c,1}/(2(γ-1)β̂)) + D₋(ν̃ 𝔭/(γ-1)) + κ_r D₋D₊T⁴ - (pDv) + 𝔇`.
pub fn internal_energy_residual(scheme: &Scheme, field: &ConservedField) -> Result<f64, PositivityFault> {
    let grid = &scheme.grid;
    let gas = &scheme.gas;
    let prims = scheme.primitives(field)?;
    let tend = scheme.flux_tendency(&prims);
    let ke = kinetic_balance(scheme, field)?;
    let n = grid.len();

    // divergence of the internal-energy flux q = f^{c,1}/(2(γ-1)β̂) - ν̃𝔭/(γ-1) - κ_r D T⁴
    let mut q_div = vec![0.0; n];
    let mut q_scale = vec![0.0f64; n];
    for axis in grid.active_axes() {
        let h = grid.spacing(axis);
        let fluxes = scheme.face_fluxes(&prims, axis);
        for ((l, r), ff) in grid.faces(axis).zip(&fluxes) {
            let (ql, qr) = (&prims[l], &prims[r]);
            let beta_hat = FacePair::new(ql.beta, qr.beta).log();
            let convective = ff.conv[0] / (2.0 * gas.gm1() * beta_hat);
            let pressure = ff.coeffs.tilde_nu * crate::flux::frak_p(ql, qr, h) / gas.gm1();
            let radiation = crate::flux::radiation_flux(ql, qr, h, gas);
            let q = convective - pressure - radiation;
            let m = convective.abs().max(pressure.abs()).max(radiation.abs());
            let wl = grid.dual_width(l, axis);
            let wr = grid.dual_width(r, axis);
            q_div[l] += q / wl;
            q_div[r] -= q / wr;
            q_scale[l] = q_scale[l].max(m / wl);
            q_scale[r] = q_scale[r].max(m / wr);
        }
    }

    let mut worst: f64 = 0.0;
    for i in 0..n {
        let lhs = tend.component(4)[i] - ke.k_t[i];
        let rhs = -q_div[i] - ke.pdv[i] + ke.dissipation[i];
        let scale = [
            tend.component(4)[i],
            ke.k_t[i],
            q_scale[i],
            ke.pdv[i],
            ke.dissipation[i],
        ]
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

/// Rate of change of the total momentum `Σ V m`, as the sum of the momentum
/// fluxes through the faces that join a boundary node to an interior node.
/// Boundary nodes hold zero momentum and do not update it, so these are the
/// only faces that do not telescope.
pub fn wall_momentum_rate(scheme: &Scheme, prims: &[PrimitiveState]) -> [f64; 3] {
    let grid = &scheme.grid;
    let all = scheme.face_totals(prims);
    let mut rate = [0.0; 3];
    for axis in grid.active_axes() {
        let a = axis.index();
        let n = grid.n_axis(axis);
        let totals = &all[a];
        for (face, (l, r)) in grid.faces(axis).enumerate() {
            let cl = grid.coords_of(l);
            let cr = grid.coords_of(r);
            let f = &totals[face];
            if cl[a] == 0 && !grid.is_boundary(r) {
                let s = grid.face_area(r, axis);
                for c in 0..3 {
                    rate[c] += s * f[1 + c];
                }
            }
            if cr[a] == n && !grid.is_boundary(l) {
                let s = grid.face_area(l, axis);
                for c in 0..3 {
                    rate[c] -= s * f[1 + c];
                }
            }
        }
    }
    rate
}
