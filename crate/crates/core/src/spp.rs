//! Surface plasmon polariton analysis: single-interface dispersion and
//! resonance, propagation length, penetration depths, and the long-range /
//! short-range modes of a thin metal film.

use num_complex::Complex64;

use crate::error::{PhysicsError, Result};
use crate::medium::{gain_power, medium_response, resonance_residual, QwConfig};
use crate::multilayer::{in_plane_wavevector, normal_wavevector, OpticalStack};
use crate::roots::{self, SolverOptions};
use crate::units::{photon_energy, wavenumber_from_energy, HBAR_MEV_FS, NM_PER_UM};

/// Pole threshold on |ε_m + ε_s| for the single-interface dispersion.
pub const SPP_POLE_EPSILON: f64 = 1e-12;

/// Default photon-energy step (meV) for the group-velocity difference.
pub const DEFAULT_ENERGY_STEP: f64 = 0.01;

/// Thickness window (nm) searched for the coupler-free threshold.
pub const COUPLER_FREE_RANGE: (f64, f64) = (1.0, 50.0);

/// Single-interface SPP and its derived scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SppCharacter {
    /// Complex wavevector, nm⁻¹.
    pub k_spp: Complex64,
    /// Propagation length, μm (`+inf` under net gain).
    pub propagation_length: f64,
    /// Penetration depth into the metal, nm.
    pub delta_m: f64,
    /// Penetration depth into the quantum well, nm.
    pub delta_s: f64,
    /// Gain power, nm⁻¹.
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThinFilmMode {
    /// Symmetric, long-range mode (tanh branch).
    LongRange,
    /// Anti-symmetric, short-range mode (coth branch).
    ShortRange,
}

impl ThinFilmMode {
    pub fn label(self) -> &'static str {
        match self {
            ThinFilmMode::LongRange => "lr",
            ThinFilmMode::ShortRange => "sr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThinFilmMethod {
    /// Closed-form small-thickness approximation.
    #[default]
    ExplicitSmallQ,
    /// Newton refinement of the full tanh/coth dispersion relation.
    ImplicitRoot,
}

/// Long- and short-range film modes with their transport figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinFilmModes {
    pub k_lr: Complex64,
    pub k_sr: Complex64,
    /// Propagation lengths, μm.
    pub l_lr: f64,
    pub l_sr: f64,
    /// Group velocities, nm/fs.
    pub vg_lr: f64,
    pub vg_sr: f64,
    /// Lifetimes, fs.
    pub tau_lr: f64,
    pub tau_sr: f64,
    pub method: ThinFilmMethod,
}

/// k_SPP = k0·√(ε_m ε_s / (ε_m + ε_s)), principal branch (Re ≥ 0, Im ≥ 0 on
/// the imaginary axis).
pub fn k_spp_single_interface(eps_m: Complex64, eps_s: Complex64, k0: f64) -> Result<Complex64> {
    let sum = eps_m + eps_s;
    if sum.norm() < SPP_POLE_EPSILON {
        return Err(PhysicsError::SurfacePlasmonPole { magnitude: sum.norm() });
    }
    let mut root = (eps_m * eps_s / sum).sqrt();
    if root.re == 0.0 && root.im < 0.0 {
        root = -root;
    }
    Ok(root * k0)
}

/// Intensity 1/e length 1/(2 Im k), returned in μm. Net gain (Im k ≤ 0)
/// yields `f64::INFINITY`.
pub fn propagation_length(k: Complex64) -> f64 {
    if k.im > 0.0 {
        1.0 / (2.0 * k.im) / NM_PER_UM
    } else {
        f64::INFINITY
    }
}

/// Penetration depths (δ_m, δ_s) in nm, δ_j = (1/k0)·√(|ε_s + ε_m| / |ε_j|).
pub fn penetration_depths(eps_m: Complex64, eps_s: Complex64, k0: f64) -> (f64, f64) {
    let sum = (eps_s + eps_m).norm();
    ((sum / eps_m.norm()).sqrt() / k0, (sum / eps_s.norm()).sqrt() / k0)
}

/// Single-interface SPP character at the operating point in `cfg`.
pub fn characterize(cfg: &QwConfig, stack: &OpticalStack) -> Result<SppCharacter> {
    let eps_s = medium_response(cfg)?.eps_s;
    let k0 = stack.k0();
    let k_spp = k_spp_single_interface(stack.eps_m, eps_s, k0)?;
    let (delta_m, delta_s) = penetration_depths(stack.eps_m, eps_s, k0);
    Ok(SppCharacter {
        k_spp,
        propagation_length: propagation_length(k_spp),
        delta_m,
        delta_s,
        gain: gain_power(eps_s, k0)?,
    })
}

/// Scan variable for [`find_resonance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResonanceScan {
    /// Probe detuning range in meV at a fixed incidence angle (degrees).
    DeltaP { theta_p: f64, start: f64, stop: f64 },
    /// Incidence angle range in degrees at the detuning stored in the config.
    Theta { start: f64, stop: f64 },
}

/// All roots of Re[k_SPP] − k0·n_t·sin θ on the scan range, in scan order.
pub fn find_resonances(
    cfg: &QwConfig,
    stack: &OpticalStack,
    scan: ResonanceScan,
    opts: &SolverOptions,
) -> Result<Vec<f64>> {
    let k0 = stack.k0();
    match scan {
        ResonanceScan::DeltaP { theta_p, start, stop } => {
            let kz = in_plane_wavevector(stack, theta_p);
            let f = |dp: f64| {
                resonance_residual(&cfg.with_delta_p(dp), stack, kz).unwrap_or(f64::NAN) / k0
            };
            roots::find_roots(&f, start, stop, opts)
        }
        ResonanceScan::Theta { start, stop } => {
            let eps_s = medium_response(cfg)?.eps_s;
            let k_re = k_spp_single_interface(stack.eps_m, eps_s, k0)?.re;
            let f = |th: f64| (k_re - in_plane_wavevector(stack, th)) / k0;
            roots::find_roots(&f, start, stop, opts)
        }
    }
}

/// First resonance root encountered from the start of the scan range.
pub fn find_resonance(
    cfg: &QwConfig,
    stack: &OpticalStack,
    scan: ResonanceScan,
    opts: &SolverOptions,
) -> Result<f64> {
    find_resonances(cfg, stack, scan, opts).map(|r| r[0])
}

/// Small-thickness explicit long-range wavevector.
pub fn k_lr_explicit(eps_m: Complex64, eps_s: Complex64, k0: f64, q: f64) -> Complex64 {
    let split = k0 * q / 2.0 * eps_s * (1.0 - eps_s / eps_m);
    k0 * (eps_s + split * split).sqrt()
}

/// Small-thickness explicit short-range wavevector; diverges as q → 0.
pub fn k_sr_explicit(eps_m: Complex64, eps_s: Complex64, k0: f64, q: f64) -> Result<Complex64> {
    if q == 0.0 {
        return Err(PhysicsError::ThicknessZero);
    }
    let split = 2.0 * eps_s / (q * k0 * eps_m);
    Ok(k0 * (eps_s + split * split).sqrt())
}

/// Explicit (k_LR, k_SR) pair.
pub fn thin_film_modes_explicit(
    eps_m: Complex64,
    eps_s: Complex64,
    k0: f64,
    q: f64,
) -> Result<(Complex64, Complex64)> {
    Ok((
        k_lr_explicit(eps_m, eps_s, k0, q),
        k_sr_explicit(eps_m, eps_s, k0, q)?,
    ))
}

pub fn explicit_mode(
    mode: ThinFilmMode,
    eps_m: Complex64,
    eps_s: Complex64,
    k0: f64,
    q: f64,
) -> Result<Complex64> {
    match mode {
        ThinFilmMode::LongRange => Ok(k_lr_explicit(eps_m, eps_s, k0, q)),
        ThinFilmMode::ShortRange => k_sr_explicit(eps_m, eps_s, k0, q),
    }
}

/// Film dispersion function F(k) = tanh|coth(κ_m q/2) + ε_m κ_s/(ε_s κ_m),
/// with decay constants κ_j = −i·k_jx = √(k² − ε_j k0²), Re κ_j ≥ 0.
pub fn thin_film_residual(
    mode: ThinFilmMode,
    eps_m: Complex64,
    eps_s: Complex64,
    k0: f64,
    q: f64,
    k: Complex64,
) -> Result<Complex64> {
    let minus_i = Complex64::new(0.0, -1.0);
    let kappa_m = minus_i * normal_wavevector(eps_m, k0, k);
    let kappa_s = minus_i * normal_wavevector(eps_s, k0, k);
    if kappa_m.norm() == 0.0 || eps_s.norm() == 0.0 {
        return Err(PhysicsError::DivideByZero { what: "film dispersion ratio" });
    }
    let t = (kappa_m * q / 2.0).tanh();
    let lhs = match mode {
        ThinFilmMode::LongRange => t,
        ThinFilmMode::ShortRange => {
            if t.norm() == 0.0 {
                return Err(PhysicsError::ThicknessZero);
            }
            1.0 / t
        }
    };
    Ok(lhs + eps_m * kappa_s / (eps_s * kappa_m))
}

/// Newton refinement of a film mode from `seed` (normally the explicit
/// solution).
pub fn thin_film_modes_implicit(
    mode: ThinFilmMode,
    eps_m: Complex64,
    eps_s: Complex64,
    k0: f64,
    q: f64,
    seed: Complex64,
    opts: &SolverOptions,
) -> Result<Complex64> {
    if q == 0.0 {
        return Err(PhysicsError::ThicknessZero);
    }
    let f = |k: Complex64| thin_film_residual(mode, eps_m, eps_s, k0, q, k);
    roots::newton_complex(&f, seed, opts)
}

/// Film mode wavevector by the selected method.
pub fn thin_film_mode(
    mode: ThinFilmMode,
    method: ThinFilmMethod,
    eps_m: Complex64,
    eps_s: Complex64,
    k0: f64,
    q: f64,
    opts: &SolverOptions,
) -> Result<Complex64> {
    let seed = explicit_mode(mode, eps_m, eps_s, k0, q)?;
    match method {
        ThinFilmMethod::ExplicitSmallQ => Ok(seed),
        ThinFilmMethod::ImplicitRoot => {
            thin_film_modes_implicit(mode, eps_m, eps_s, k0, q, seed, opts)
        }
    }
}

/// Group velocity (nm/fs) of a dispersion k(E), E the probe photon energy in
/// meV, from a central difference of Re k checked by step halving.
///
/// Returns the Richardson-extrapolated estimate; fails with `StepTooLarge`
/// when the `de` and `de/2` estimates differ by more than 1%.
pub fn group_velocity_of<F>(k_of_energy: F, energy_ref: f64, de: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(de > 0.0) {
        return Err(PhysicsError::InvalidArgument(format!("energy step must be > 0, got {de}")));
    }
    let slope = |h: f64| -> Result<f64> {
        Ok((k_of_energy(energy_ref + h)?.re - k_of_energy(energy_ref - h)?.re) / (2.0 * h))
    };
    let coarse = slope(de)?;
    let fine = slope(de / 2.0)?;
    if coarse == 0.0 || fine == 0.0 {
        return Err(PhysicsError::DivideByZero { what: "dk/dE in group velocity" });
    }
    let (vg_coarse, vg_fine) = (1.0 / (HBAR_MEV_FS * coarse), 1.0 / (HBAR_MEV_FS * fine));
    if (vg_coarse - vg_fine).abs() > 0.01 * vg_fine.abs() {
        return Err(PhysicsError::StepTooLarge {
            coarse: vg_coarse,
            fine: vg_fine,
        });
    }
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    Ok(1.0 / (HBAR_MEV_FS * extrapolated))
}

/// Group velocity of a film mode with respect to the probe photon energy.
///
/// The probe energy enters through k0 = E/(ħc) and through the detuning
/// Δp = E − E31 with E31 = hc/λ0; control and pump frequencies are fixed.
#[allow(clippy::too_many_arguments)]
pub fn group_velocity(
    mode: ThinFilmMode,
    method: ThinFilmMethod,
    cfg: &QwConfig,
    stack: &OpticalStack,
    photon_energy_ref: f64,
    de: f64,
    opts: &SolverOptions,
) -> Result<f64> {
    let e31 = photon_energy(stack.lambda0);
    let k_of_energy = |energy: f64| -> Result<Complex64> {
        let eps_s = medium_response(&cfg.with_delta_p(energy - e31))?.eps_s;
        thin_film_mode(
            mode,
            method,
            stack.eps_m,
            eps_s,
            wavenumber_from_energy(energy),
            stack.q,
            opts,
        )
    };
    group_velocity_of(k_of_energy, photon_energy_ref, de)
}

/// Probe photon energy (meV) at the detuning stored in `cfg`.
pub fn probe_photon_energy(cfg: &QwConfig, stack: &OpticalStack) -> f64 {
    photon_energy(stack.lambda0) + cfg.delta_p
}

/// Lifetime L/|v_g| in fs from a propagation length in μm and a group
/// velocity in nm/fs.
pub fn lifetime(propagation_length_um: f64, vg: f64) -> f64 {
    propagation_length_um * NM_PER_UM / vg.abs()
}

/// Both film modes with propagation lengths, group velocities and lifetimes.
pub fn thin_film_modes(
    cfg: &QwConfig,
    stack: &OpticalStack,
    method: ThinFilmMethod,
    opts: &SolverOptions,
) -> Result<ThinFilmModes> {
    let eps_s = medium_response(cfg)?.eps_s;
    let k0 = stack.k0();
    let e_ref = probe_photon_energy(cfg, stack);
    let mut k = [Complex64::new(0.0, 0.0); 2];
    let mut l = [0.0; 2];
    let mut vg = [0.0; 2];
    for (i, mode) in [ThinFilmMode::LongRange, ThinFilmMode::ShortRange].into_iter().enumerate() {
        k[i] = thin_film_mode(mode, method, stack.eps_m, eps_s, k0, stack.q, opts)?;
        l[i] = propagation_length(k[i]);
        vg[i] = group_velocity(mode, method, cfg, stack, e_ref, DEFAULT_ENERGY_STEP, opts)?;
    }
    Ok(ThinFilmModes {
        k_lr: k[0],
        k_sr: k[1],
        l_lr: l[0],
        l_sr: l[1],
        vg_lr: vg[0],
        vg_sr: vg[1],
        tau_lr: lifetime(l[0], vg[0]),
        tau_sr: lifetime(l[1], vg[1]),
        method,
    })
}

/// Film thickness (nm) at which Re k_mode(q) = k0·n_t, from the explicit
/// forms over [`COUPLER_FREE_RANGE`].
pub fn coupler_free_thickness(
    cfg: &QwConfig,
    stack: &OpticalStack,
    mode: ThinFilmMode,
    opts: &SolverOptions,
) -> Result<f64> {
    let eps_s = medium_response(cfg)?.eps_s;
    let k0 = stack.k0();
    let target = k0 * stack.n_t;
    let f = |q: f64| {
        explicit_mode(mode, stack.eps_m, eps_s, k0, q)
            .map(|k| (k.re - target) / k0)
            .unwrap_or(f64::NAN)
    };
    roots::first_root(&f, COUPLER_FREE_RANGE.0, COUPLER_FREE_RANGE.1, opts)
}
