//! Steady-state optical response of the four-level asymmetric double quantum
//! well driven by probe, control, pump and generated (fourth) fields.
//!
//! Level scheme: probe |1⟩↔|3⟩, control |2⟩↔|3⟩, pump |2⟩↔|4⟩ and the
//! generated field |1⟩↔|4⟩ close the mixing loop. All Rabi frequencies are
//! real and non-negative; energies are in meV.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PhysicsError, Result};
use crate::multilayer::{in_plane_wavevector, OpticalStack};
use crate::roots::{self, SolverOptions};
use crate::spp::k_spp_single_interface;

/// Default absolute threshold for the susceptibility and local-field poles.
pub const POLE_EPSILON: f64 = 1e-12;

/// Drive and decay parameters of the quantum well, all in meV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QwConfig {
    pub omega_p: f64,
    pub omega_c: f64,
    pub omega_b: f64,
    pub omega_s: f64,
    pub delta_p: f64,
    pub delta_c: f64,
    pub delta_b: f64,
    pub gamma_2: f64,
    pub gamma_3l: f64,
    pub gamma_4l: f64,
    pub gamma_3d: f64,
    pub gamma_4d: f64,
    /// Density-dipole prefactor N|μ₁₃|²/(ε₀ħ), meV.
    pub alpha: f64,
}

impl Default for QwConfig {
    fn default() -> Self {
        crate::config::defaults().qw
    }
}

impl QwConfig {
    /// Cross-coupling √(γ_3l·γ_4l) between the bonding and anti-bonding states.
    pub fn kappa(&self) -> f64 {
        (self.gamma_3l * self.gamma_4l).sqrt()
    }

    pub fn gamma_3(&self) -> f64 {
        self.gamma_3l + self.gamma_3d
    }

    pub fn gamma_4(&self) -> f64 {
        self.gamma_4l + self.gamma_4d
    }

    pub fn with_omega_b(mut self, omega_b: f64) -> Self {
        self.omega_b = omega_b;
        self
    }

    pub fn with_delta_p(mut self, delta_p: f64) -> Self {
        self.delta_p = delta_p;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Checks the parameter invariants, naming the offending field on failure.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        let finite = [
            ("omega_p", self.omega_p),
            ("omega_c", self.omega_c),
            ("omega_b", self.omega_b),
            ("omega_s", self.omega_s),
            ("delta_p", self.delta_p),
            ("delta_c", self.delta_c),
            ("delta_b", self.delta_b),
            ("gamma_2", self.gamma_2),
            ("gamma_3l", self.gamma_3l),
            ("gamma_4l", self.gamma_4l),
            ("gamma_3d", self.gamma_3d),
            ("gamma_4d", self.gamma_4d),
            ("alpha", self.alpha),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err((key, format!("must be finite, got {v}")));
            }
        }
        if self.omega_p <= 0.0 {
            return Err(("omega_p", format!("probe Rabi frequency must be > 0, got {}", self.omega_p)));
        }
        for (key, v) in [
            ("omega_c", self.omega_c),
            ("omega_b", self.omega_b),
            ("omega_s", self.omega_s),
            ("gamma_2", self.gamma_2),
            ("gamma_3l", self.gamma_3l),
            ("gamma_4l", self.gamma_4l),
            ("gamma_3d", self.gamma_3d),
            ("gamma_4d", self.gamma_4d),
        ] {
            if v < 0.0 {
                return Err((key, format!("must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Complex detuning denominators d2, d3, d4 (meV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Denominators {
    pub d2: Complex64,
    pub d3: Complex64,
    pub d4: Complex64,
}

/// Susceptibility and local-field corrected permittivity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumResponse {
    pub chi: Complex64,
    pub eps_s: Complex64,
}

pub fn complex_denominators(cfg: &QwConfig) -> Denominators {
    Denominators {
        d2: Complex64::new(cfg.delta_p - cfg.delta_c, cfg.gamma_2),
        d3: Complex64::new(cfg.delta_p, cfg.gamma_3()),
        d4: Complex64::new(cfg.delta_p - cfg.delta_c + cfg.delta_b, cfg.gamma_4()),
    }
}

/// Closed-form steady-state susceptibility.
pub fn susceptibility(cfg: &QwConfig) -> Result<Complex64> {
    susceptibility_with_epsilon(cfg, POLE_EPSILON)
}

pub fn susceptibility_with_epsilon(cfg: &QwConfig, pole_epsilon: f64) -> Result<Complex64> {
    if cfg.omega_p <= 0.0 {
        return Err(PhysicsError::DivideByZero { what: "probe Rabi frequency" });
    }
    let Denominators { d2, d3, d4 } = complex_denominators(cfg);
    let i = Complex64::i();
    let kappa = cfg.kappa();
    let (op, oc, ob, os) = (cfg.omega_p, cfg.omega_c, cfg.omega_b, cfg.omega_s);

    let numerator = (ob * ob - d2 * d4) * op - (oc * ob + d2 * i * kappa) * os;
    let denominator = -i * kappa * (2.0 * oc * ob) - (d4 * (oc * oc) + d3 * (ob * ob))
        + d2 * (d3 * d4 + kappa * kappa);
    if denominator.norm() < pole_epsilon {
        return Err(PhysicsError::DenominatorUnderflow {
            magnitude: denominator.norm(),
        });
    }
    Ok(cfg.alpha / op * numerator / denominator)
}

/// Susceptibility from a direct dense solve of the steady-state amplitude
/// equations with an undepleted ground state (A₁ = 1).
///
/// Unknowns (A₂, A₃, A₄):
///
/// ```text
/// d2·A₂ + Ω_c·A₃ + Ω_b·A₄          = 0
/// Ω_c·A₂ + d3·A₃ − iκ·A₄           = −Ω_p
/// Ω_b·A₂ − iκ·A₃ + d4·A₄           = −Ω_s
/// ```
pub fn susceptibility_oracle(cfg: &QwConfig) -> Result<Complex64> {
    if cfg.omega_p <= 0.0 {
        return Err(PhysicsError::DivideByZero { what: "probe Rabi frequency" });
    }
    let Denominators { d2, d3, d4 } = complex_denominators(cfg);
    let r = |x: f64| Complex64::new(x, 0.0);
    let ik = Complex64::new(0.0, cfg.kappa());
    #[rustfmt::skip]
    let m = Matrix3::new(
        d2,               r(cfg.omega_c), r(cfg.omega_b),
        r(cfg.omega_c),   d3,             -ik,
        r(cfg.omega_b),   -ik,            d4,
    );
    let rhs = Vector3::new(r(0.0), r(-cfg.omega_p), r(-cfg.omega_s));

    let row_scale: f64 = m.row_iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).product();
    if row_scale == 0.0 || m.determinant().norm() <= 1e-14 * row_scale {
        return Err(PhysicsError::SingularSystem);
    }
    let amps = m.lu().solve(&rhs).ok_or(PhysicsError::SingularSystem)?;
    let a3 = amps[1];
    if !a3.is_finite() {
        return Err(PhysicsError::SingularSystem);
    }
    Ok(cfg.alpha / cfg.omega_p * a3)
}

/// Local-field corrected permittivity ε_s = 1 + χ/(1 − χ/3).
pub fn permittivity(chi: Complex64) -> Result<Complex64> {
    permittivity_with_epsilon(chi, POLE_EPSILON)
}

pub fn permittivity_with_epsilon(chi: Complex64, pole_epsilon: f64) -> Result<Complex64> {
    let den = 1.0 - chi / 3.0;
    if den.norm() < pole_epsilon {
        return Err(PhysicsError::LocalFieldPole { magnitude: den.norm() });
    }
    Ok(1.0 + chi / den)
}

pub fn medium_response(cfg: &QwConfig) -> Result<MediumResponse> {
    let chi = susceptibility(cfg)?;
    let eps_s = permittivity(chi)?;
    Ok(MediumResponse { chi, eps_s })
}

/// Optical gain power G = −k0·Im ε_s / Re ε_s in nm⁻¹; positive means gain.
pub fn gain_power(eps_s: Complex64, k0: f64) -> Result<f64> {
    if eps_s.re == 0.0 {
        return Err(PhysicsError::DivideByZero { what: "Re[eps_s] in gain power" });
    }
    Ok(-k0 * eps_s.im / eps_s.re)
}

/// Scan range for the prefactor, meV.
pub const PREFACTOR_SCAN: (f64, f64) = (1e-3, 1e2);

/// Finds the prefactor α for which the single-interface SPP wavevector
/// matches the probe's in-plane wavevector at the target detuning and angle.
///
/// The scan is logarithmic over [`PREFACTOR_SCAN`]; the first root from the
/// low end is returned.
pub fn calibrate_prefactor(
    cfg: &QwConfig,
    stack: &OpticalStack,
    target_delta_p: f64,
    target_theta: f64,
    opts: &SolverOptions,
) -> Result<f64> {
    let base = cfg.with_delta_p(target_delta_p);
    let kz = in_plane_wavevector(stack, target_theta);
    let k0 = stack.k0();
    let residual = |log_alpha: f64| -> f64 {
        let alpha = 10f64.powf(log_alpha);
        resonance_residual(&base.with_alpha(alpha), stack, kz).unwrap_or(f64::NAN) / k0
    };
    let (lo, hi) = (PREFACTOR_SCAN.0.log10(), PREFACTOR_SCAN.1.log10());
    let scan_opts = SolverOptions {
        rel_tol: opts.rel_tol.min(1e-13),
        ..*opts
    };
    match roots::first_root(&residual, lo, hi, &scan_opts) {
        Ok(u) => Ok(10f64.powf(u)),
        Err(PhysicsError::NoBracket { samples, .. }) => Err(PhysicsError::NoBracket {
            start: PREFACTOR_SCAN.0,
            stop: PREFACTOR_SCAN.1,
            samples: samples.into_iter().map(|(u, r)| (10f64.powf(u), r)).collect(),
        }),
        Err(e) => Err(e),
    }
}

/// Re[k_SPP(ε_s)] − k_z for the metal/quantum-well interface, nm⁻¹.
pub(crate) fn resonance_residual(cfg: &QwConfig, stack: &OpticalStack, kz: f64) -> Result<f64> {
    let eps_s = medium_response(cfg)?.eps_s;
    Ok(k_spp_single_interface(stack.eps_m, eps_s, stack.k0())?.re - kz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_cfg() -> QwConfig {
        QwConfig {
            omega_p: 1.0,
            omega_c: 4.0,
            omega_b: 0.0,
            omega_s: 1.0,
            delta_p: -1.73,
            delta_c: 0.0,
            delta_b: 0.0,
            gamma_2: 0.0,
            gamma_3l: 2.07,
            gamma_4l: 2.07,
            gamma_3d: 2.58,
            gamma_4d: 2.58,
            alpha: 1.0,
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn denominators_at_resonance() {
        let cfg = default_cfg().with_delta_p(0.0);
        let d = complex_denominators(&cfg);
        assert_eq!(d.d2, c(0.0, 0.0));
        assert!((d.d3 - c(0.0, 4.65)).norm() < 1e-12);
        assert!((d.d4 - c(0.0, 4.65)).norm() < 1e-12);
    }

    #[test]
    fn denominators_vanish_without_detuning_or_decay() {
        let cfg = QwConfig {
            delta_p: 0.0,
            gamma_2: 0.0,
            gamma_3l: 0.0,
            gamma_4l: 0.0,
            gamma_3d: 0.0,
            gamma_4d: 0.0,
            ..default_cfg()
        };
        let d = complex_denominators(&cfg);
        assert_eq!((d.d2, d.d3, d.d4), (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn d2_is_real_without_ground_decay() {
        let d = complex_denominators(&default_cfg());
        assert_eq!(d.d2, c(-1.73, 0.0));
    }

    #[test]
    fn kappa_and_total_decays() {
        let cfg = default_cfg();
        assert!((cfg.kappa() - 2.07).abs() < 1e-15);
        assert!((cfg.gamma_3() - 4.65).abs() < 1e-15);
        assert!((cfg.gamma_4() - 4.65).abs() < 1e-15);
    }

    #[test]
    fn dark_state_is_transparent() {
        let cfg = QwConfig {
            omega_b: 0.0,
            omega_s: 0.0,
            gamma_3l: 0.0,
            gamma_4l: 0.0,
            delta_p: 0.7,
            delta_c: 0.7,
            ..default_cfg()
        };
        assert_eq!(cfg.kappa(), 0.0);
        assert_eq!(susceptibility(&cfg).unwrap(), c(0.0, 0.0));
        assert!(susceptibility_oracle(&cfg).unwrap().norm() < 1e-15);
    }

    #[test]
    fn decoupled_probe_is_two_level_lorentzian() {
        let cfg = QwConfig {
            omega_c: 0.0,
            omega_b: 0.0,
            omega_s: 0.0,
            gamma_3l: 0.0,
            gamma_4l: 0.0,
            gamma_3d: 3.0,
            alpha: 2.0,
            ..default_cfg()
        };
        let d3 = complex_denominators(&cfg).d3;
        let want = -cfg.alpha / d3;
        let got = susceptibility_oracle(&cfg).unwrap();
        assert!((got - want).norm() < 1e-14 * want.norm());
        // positive Im[χ] is absorption
        assert!(got.im > 0.0);
    }

    #[test]
    fn closed_form_matches_oracle_at_default_point() {
        for ob in [0.0, 1.0, 2.0, 2.5, 3.2, 4.0] {
            let cfg = default_cfg().with_omega_b(ob);
            let a = susceptibility(&cfg).unwrap();
            let b = susceptibility_oracle(&cfg).unwrap();
            assert!((a - b).norm() <= 1e-12 * b.norm(), "Ω_b={ob}: {a} vs {b}");
        }
    }

    #[test]
    fn linear_in_prefactor() {
        let cfg = default_cfg().with_omega_b(2.3);
        let a = susceptibility(&cfg).unwrap();
        let b = susceptibility(&cfg.with_alpha(2.0)).unwrap();
        assert_eq!(b, 2.0 * a);
    }

    #[test]
    fn lossless_levels_give_real_susceptibility() {
        let cfg = QwConfig {
            gamma_2: 0.0,
            gamma_3l: 0.0,
            gamma_4l: 0.0,
            gamma_3d: 0.0,
            gamma_4d: 0.0,
            delta_p: 1.3,
            delta_c: 0.4,
            delta_b: -0.9,
            omega_b: 1.7,
            ..default_cfg()
        };
        let chi = susceptibility(&cfg).unwrap();
        assert!(chi.im.abs() <= 1e-15 * chi.norm(), "{chi}");
    }

    #[test]
    fn pole_is_reported() {
        // γ and detunings zero with only the probe coupled: d2 = d3 = d4 = 0.
        let cfg = QwConfig {
            delta_p: 0.0,
            omega_c: 0.0,
            omega_b: 0.0,
            gamma_3l: 0.0,
            gamma_4l: 0.0,
            gamma_3d: 0.0,
            gamma_4d: 0.0,
            ..default_cfg()
        };
        assert!(matches!(
            susceptibility(&cfg),
            Err(PhysicsError::DenominatorUnderflow { .. })
        ));
        assert_eq!(susceptibility_oracle(&cfg), Err(PhysicsError::SingularSystem));
    }

    #[test]
    fn permittivity_values() {
        assert_eq!(permittivity(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((permittivity(c(1.5, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            permittivity(c(3.0, 0.0)),
            Err(PhysicsError::LocalFieldPole { .. })
        ));
    }

    #[test]
    fn permittivity_imaginary_part_expansion() {
        for chi in [c(0.3, 0.2), c(-0.14, 0.09), c(-0.1, -0.003), c(2.0, -1.0)] {
            let eps = permittivity(chi).unwrap();
            let want = chi.im / (1.0 - chi / 3.0).norm_sqr();
            assert!((eps.im - want).abs() < 1e-14, "{chi}");
            assert_eq!(eps.im.signum(), chi.im.signum());
        }
    }

    #[test]
    fn gain_power_values() {
        assert_eq!(gain_power(c(0.9, 0.0), 0.0106).unwrap(), 0.0);
        let g = gain_power(c(0.9, -0.009), 0.010666).unwrap();
        assert!((g - 1.0666e-4).abs() < 1e-15);
        assert!(matches!(
            gain_power(c(0.0, 0.1), 0.01),
            Err(PhysicsError::DivideByZero { .. })
        ));
    }

    #[test]
    fn validation_names_offending_key() {
        let bad = QwConfig { omega_p: 0.0, ..default_cfg() };
        assert_eq!(bad.validate().unwrap_err().0, "omega_p");
        let bad = QwConfig { gamma_3d: -1.0, ..default_cfg() };
        assert_eq!(bad.validate().unwrap_err().0, "gamma_3d");
        assert!(default_cfg().validate().is_ok());
    }
}
