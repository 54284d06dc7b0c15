//! Unit system and physical constants.
//!
//! Energies (Rabi frequencies, detunings, decay rates, photon energies) are in
//! meV, lengths in nm, wavevectors in nm⁻¹, times in fs. Propagation lengths
//! are reported in μm at the public boundary.

use std::f64::consts::PI;

/// Planck constant times the speed of light, meV·nm.
pub const HC_MEV_NM: f64 = 1_239_841.98;

/// Speed of light in vacuum, nm/fs.
pub const C_NM_PER_FS: f64 = 299.792_458;

/// Reduced Planck constant, meV·fs (derived from `HC_MEV_NM` and `C_NM_PER_FS`).
pub const HBAR_MEV_FS: f64 = HC_MEV_NM / (2.0 * PI * C_NM_PER_FS);

pub const NM_PER_UM: f64 = 1.0e3;

/// Photon energy (meV) at vacuum wavelength `lambda0` (nm).
pub fn photon_energy(lambda0: f64) -> f64 {
    HC_MEV_NM / lambda0
}

/// Vacuum wavenumber (nm⁻¹) for a photon energy in meV.
pub fn wavenumber_from_energy(energy: f64) -> f64 {
    2.0 * PI * energy / HC_MEV_NM
}
