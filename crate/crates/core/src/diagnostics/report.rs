//! Text output: the diagnostics CSV, the convergence table and the report
//! of time-integrated norms.
//!
//! CSV layout, version 1: a first line `# altns diagnostics v1`, then the
//! header row [`CSV_COLUMNS`], then one row per output step.

use std::fmt;
use std::io::{self, Write};

use super::convergence::ConvergenceTable;
use super::DiagnosticsRecord;

pub const CSV_VERSION_LINE: &str = "# altns diagnostics v1";

pub const CSV_COLUMNS: [&str; 17] = [
    "t",
    "dt",
    "mass",
    "mom_x",
    "mom_y",
    "mom_z",
    "energy",
    "entropy",
    "kinetic",
    "min_rho",
    "min_t",
    "max_speed",
    "entropy_dissipation",
    "rho_l2",
    "grad_log_rho_l2",
    "rho_grad_v_l2",
    "grad_t32_l2",
];

fn csv_values(r: &DiagnosticsRecord) -> [f64; 17] {
    [
        r.t,
        r.dt,
        r.total_mass,
        r.total_momentum[0],
        r.total_momentum[1],
        r.total_momentum[2],
        r.total_energy,
        r.total_entropy,
        r.total_kinetic,
        r.min_rho,
        r.min_t,
        r.max_speed,
        r.entropy_dissipation,
        r.norms.rho_l2,
        r.norms.grad_log_rho,
        r.norms.rho_grad_v,
        r.norms.grad_t32,
    ]
}

pub fn write_csv_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "{CSV_VERSION_LINE}")?;
    writeln!(w, "{}", CSV_COLUMNS.join(","))
}

/// One row; values use Rust's shortest round-trip formatting.
pub fn write_csv_row<W: Write>(w: &mut W, r: &DiagnosticsRecord) -> io::Result<()> {
    let cells: Vec<String> = csv_values(r).iter().map(|v| format!("{v:e}")).collect();
    writeln!(w, "{}", cells.join(","))
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.label)?;
        writeln!(
            f,
            "{:>6} {:>12} {:>8} {:>12} {:>7} {:>12} {:>7}",
            "n", "h", "steps", "L1 error", "order", "L2 error", "order"
        )?;
        let ord = |o: Option<f64>| o.map_or("-".to_string(), |v| format!("{v:.3}"));
        for r in &self.rows {
            writeln!(
                f,
                "{:>6} {:>12.5e} {:>8} {:>12.5e} {:>7} {:>12.5e} {:>7}",
                r.n,
                r.h,
                r.steps,
                r.err_l1,
                ord(r.order_l1),
                r.err_l2,
                ord(r.order_l2)
            )?;
        }
        Ok(())
    }
}

/// Time integrals, by the trapezoid rule, of the squared monitored norms
/// and of the entropy dissipation, plus the spread of the total mass
/// (`‖ρ‖₁` for positive density).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AprioriReport {
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    /// `∫ ‖D₊ ln ρ‖₂² dt`.
    pub grad_log_rho_sq: f64,
    /// `∫ ‖ρ̄ D₊v‖₂² dt`.
    pub rho_grad_v_sq: f64,
    /// `∫ ‖D₊ T^{3/2}‖₂² dt`.
    pub grad_t32_sq: f64,
    /// `∫ Σ S (Δw)ᵀf^ν dt`.
    pub dissipation: f64,
    pub max_rho_l2: f64,
    /// `max_t |M(t) - M(t₀)| / |M(t₀)|`.
    pub mass_drift: f64,
    first_mass: f64,
    last: Option<DiagnosticsRecord>,
}

impl AprioriReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: &DiagnosticsRecord) {
        match self.last {
            None => {
                self.t_start = r.t;
                self.first_mass = r.total_mass;
            }
            Some(prev) => {
                let dt = r.t - prev.t;
                let trap = |a: f64, b: f64| 0.5 * dt * (a + b);
                self.grad_log_rho_sq += trap(prev.norms.grad_log_rho.powi(2), r.norms.grad_log_rho.powi(2));
                self.rho_grad_v_sq += trap(prev.norms.rho_grad_v.powi(2), r.norms.rho_grad_v.powi(2));
                self.grad_t32_sq += trap(prev.norms.grad_t32.powi(2), r.norms.grad_t32.powi(2));
                self.dissipation += trap(prev.entropy_dissipation, r.entropy_dissipation);
            }
        }
        self.t_end = r.t;
        self.samples += 1;
        self.max_rho_l2 = self.max_rho_l2.max(r.norms.rho_l2);
        if self.first_mass != 0.0 {
            self.mass_drift = self
                .mass_drift
                .max(((r.total_mass - self.first_mass) / self.first_mass).abs());
        }
        self.last = Some(*r);
    }

    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a DiagnosticsRecord>) -> Self {
        let mut rep = Self::new();
        for r in records {
            rep.push(r);
        }
        rep
    }
}

impl fmt::Display for AprioriReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# time-integrated norms over [{}, {}] ({} samples)",
            self.t_start, self.t_end, self.samples
        )?;
        writeln!(f, "int |D+ ln rho|^2 dt      {:.6e}", self.grad_log_rho_sq)?;
        writeln!(f, "int |rho D+ v|^2 dt       {:.6e}", self.rho_grad_v_sq)?;
        writeln!(f, "int |D+ T^(3/2)|^2 dt     {:.6e}", self.grad_t32_sq)?;
        writeln!(f, "int entropy dissipation   {:.6e}", self.dissipation)?;
        writeln!(f, "max |rho|_2               {:.6e}", self.max_rho_l2)?;
        writeln!(f, "max rel. mass drift       {:.3e}", self.mass_drift)
    }
}
