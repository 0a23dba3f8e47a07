//! Entropy-dissipative finite-volume solver for the mass-diffusive
//! compressible Navier-Stokes system on a closed box with no-slip adiabatic
//! walls, with diagnostics for the discrete balance laws of the scheme.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod flux;
pub mod geometry;
pub mod io;
pub mod means;
pub mod mms;
pub mod presets;
pub mod rhs;
pub mod run;
pub mod thermo;
pub mod timeint;
pub mod verify;

pub use error::{Error, PositivityFault, Result};
pub use field::ConservedField;
pub use flux::LambdaVariant;
pub use geometry::{Axis, Grid};
pub use rhs::Scheme;
pub use thermo::{GasParams, PrimitiveState};
