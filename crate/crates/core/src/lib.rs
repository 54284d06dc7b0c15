//! Optical response of a four-level quantum-well medium under a metal film,
//! and the surface plasmon polaritons it supports.
//!
//! * [`medium`]: susceptibility, permittivity and gain of the quantum well.
//! * [`multilayer`]: TM Fresnel coefficients of the top/metal/quantum-well stack.
//! * [`spp`]: single-interface and thin-film plasmon dispersion, propagation
//!   lengths, group velocities and lifetimes.
//! * [`sweep`] and [`figures`]: parameter sweeps written as CSV.
//!
//! Energies are in meV, lengths in nm (propagation lengths in µm), angles in
//! degrees and times in fs.

pub mod config;
pub mod error;
pub mod figures;
pub mod medium;
pub mod multilayer;
pub mod plot;
pub mod roots;
pub mod spp;
pub mod sweep;
pub mod units;

pub use config::{parse_config, ConfigError, Quantity, RunConfig, Sweep, SweepVariable};
pub use error::{PhysicsError, Result};
pub use medium::{calibrate_prefactor, permittivity, susceptibility, MediumResponse, QwConfig};
pub use multilayer::{stack_coefficients, OpticalStack, StackResponse};
pub use roots::SolverOptions;
pub use spp::{SppCharacter, ThinFilmMethod, ThinFilmMode, ThinFilmModes};
pub use sweep::{run_sweep, SweepOptions, SweepTable};

pub use num_complex::Complex64;
