//! TM Fresnel optics of the top / metal film / quantum-well stack.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PhysicsError, Result};

/// Relative threshold below which a Fresnel or stack denominator is treated
/// as a pole.
pub const POLE_REL_EPSILON: f64 = 1e-12;

/// Permittivities and geometry of the three-layer structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalStack {
    /// Top (incidence) layer permittivity.
    pub eps_t: Complex64,
    /// Metal film permittivity.
    pub eps_m: Complex64,
    /// Metal film thickness, nm.
    pub q: f64,
    /// Vacuum wavelength, nm.
    pub lambda0: f64,
    /// Top-layer refractive index.
    pub n_t: f64,
}

impl Default for OpticalStack {
    fn default() -> Self {
        crate::config::defaults().stack
    }
}

impl OpticalStack {
    /// Vacuum wavenumber 2π/λ0, nm⁻¹.
    pub fn k0(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.lambda0
    }

    pub fn with_thickness(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        if !(self.q >= 0.0) || !self.q.is_finite() {
            return Err(("q", format!("film thickness must be >= 0, got {}", self.q)));
        }
        if !(self.lambda0 > 0.0) || !self.lambda0.is_finite() {
            return Err(("lambda0", format!("wavelength must be > 0, got {}", self.lambda0)));
        }
        if !(self.n_t > 0.0) || !self.n_t.is_finite() {
            return Err(("n_t", format!("refractive index must be > 0, got {}", self.n_t)));
        }
        if !self.eps_t.is_finite() {
            return Err(("eps_t", "permittivity must be finite".into()));
        }
        if !self.eps_m.is_finite() {
            return Err(("eps_m", "permittivity must be finite".into()));
        }
        Ok(())
    }
}

/// Reflection and transmission of the full stack at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackResponse {
    pub r: Complex64,
    pub t: Complex64,
    /// Reflectivity |r|².
    pub reflectivity: f64,
    /// Electric-field enhancement |ε_t/ε_s|·|t|².
    pub t_el: f64,
}

/// In-plane wavevector k_z = k0·n_t·sin θ (nm⁻¹), θ in degrees.
pub fn in_plane_wavevector(stack: &OpticalStack, theta_p: f64) -> f64 {
    stack.k0() * stack.n_t * theta_p.to_radians().sin()
}

/// Normal wavevector √(k0²ε − k_z²) on the branch with Im ≥ 0 (Re ≥ 0 when
/// the imaginary part vanishes), so that evanescent fields decay away from
/// the interface.
pub fn normal_wavevector(eps_j: Complex64, k0: f64, k_z: Complex64) -> Complex64 {
    let s = (eps_j * (k0 * k0) - k_z * k_z).sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

/// Single-interface TM reflection coefficient r_ij.
///
/// A vanishing denominator is the single-interface surface-mode condition
/// and is reported as [`PhysicsError::SurfaceModePole`].
pub fn fresnel_r_tm(
    eps_i: Complex64,
    eps_j: Complex64,
    k_ix: Complex64,
    k_jx: Complex64,
) -> Result<Complex64> {
    let a = eps_j * k_ix;
    let b = eps_i * k_jx;
    let den = a + b;
    if den.norm() <= POLE_REL_EPSILON * (a.norm() + b.norm()) || den.norm() == 0.0 {
        return Err(PhysicsError::SurfaceModePole);
    }
    Ok((a - b) / den)
}

/// Single-interface transmission coefficient t_ij = 1 + r_ij.
pub fn fresnel_t_tm(
    eps_i: Complex64,
    eps_j: Complex64,
    k_ix: Complex64,
    k_jx: Complex64,
) -> Result<Complex64> {
    fresnel_r_tm(eps_i, eps_j, k_ix, k_jx).map(|r| 1.0 + r)
}

/// Reflection, transmission and field enhancement of the top/metal/QW stack
/// for a TM probe at `theta_p` degrees.
pub fn stack_coefficients(
    stack: &OpticalStack,
    eps_s: Complex64,
    theta_p: f64,
) -> Result<StackResponse> {
    let k0 = stack.k0();
    let kz = Complex64::new(in_plane_wavevector(stack, theta_p), 0.0);
    let k_tx = normal_wavevector(stack.eps_t, k0, kz);
    let k_mx = normal_wavevector(stack.eps_m, k0, kz);
    let k_sx = normal_wavevector(eps_s, k0, kz);

    let r_tm = fresnel_r_tm(stack.eps_t, stack.eps_m, k_tx, k_mx)?;
    let r_ms = fresnel_r_tm(stack.eps_m, eps_s, k_mx, k_sx)?;
    let t_tm = 1.0 + r_tm;
    let t_ms = 1.0 + r_ms;

    let i = Complex64::i();
    let phase = (i * k_mx * stack.q).exp();
    let round_trip = phase * phase;
    let den = 1.0 + r_tm * r_ms * round_trip;
    if den.norm() <= POLE_REL_EPSILON * (1.0 + (r_tm * r_ms * round_trip).norm()) {
        return Err(PhysicsError::FabryPerotPole);
    }
    let r = (r_tm + r_ms * round_trip) / den;
    let t = t_tm * t_ms * phase / den;
    if eps_s.norm() == 0.0 {
        return Err(PhysicsError::DivideByZero { what: "eps_s in field enhancement" });
    }
    Ok(StackResponse {
        r,
        t,
        reflectivity: r.norm_sqr(),
        t_el: (stack.eps_t / eps_s).norm() * t.norm_sqr(),
    })
}
