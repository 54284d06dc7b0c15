//! Fixed reference values for the default operating point and for simple
//! closed-form limits. Expected numbers were computed independently (plain
//! complex arithmetic, outside this crate) and frozen here.

use spp_core::config::defaults;
use spp_core::figures::{figure_table, FigureId, FigureOptions};
use spp_core::medium::{
    calibrate_prefactor, complex_denominators, gain_power, medium_response, permittivity,
    susceptibility,
};
use spp_core::multilayer::{in_plane_wavevector, normal_wavevector};
use spp_core::spp::{
    coupler_free_thickness, find_resonance, find_resonances, k_spp_single_interface,
    penetration_depths, propagation_length, ResonanceScan, ThinFilmMode,
};
use spp_core::{Complex64, PhysicsError, QwConfig, SolverOptions};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn qw() -> QwConfig {
    defaults().qw
}

#[test]
fn denominators_at_resonance() {
    let d = complex_denominators(&qw().with_delta_p(0.0));
    assert_eq!(d.d2, c(0.0, 0.0));
    assert!((d.d3 - c(0.0, 4.65)).norm() < 1e-12);
    assert!((d.d4 - c(0.0, 4.65)).norm() < 1e-12);

    let d = complex_denominators(&qw().with_delta_p(-1.73));
    assert_eq!(d.d2, c(-1.73, 0.0));
}

#[test]
fn permittivity_substitutions() {
    assert_eq!(permittivity(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    assert!((permittivity(c(1.5, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-15);
}

#[test]
fn gain_arithmetic() {
    let g = gain_power(c(0.9, -0.009), 0.010666).unwrap();
    assert!((g - 1.0666e-4).abs() < 1e-12);
    assert_eq!(gain_power(c(0.9, 0.0), 0.010666).unwrap(), 0.0);
}

#[test]
fn probe_in_plane_wavevector() {
    let s = defaults().stack;
    assert!((in_plane_wavevector(&s, 77.0) - 0.010_392_374_257_026_33).abs() < 1e-16);
    assert_eq!(in_plane_wavevector(&s, 0.0), 0.0);
}

#[test]
fn air_metal_spp() {
    let s = defaults().stack;
    let k = k_spp_single_interface(s.eps_m, c(1.0, 0.0), s.k0()).unwrap() / s.k0();
    // sqrt(eps_m / (eps_m + 1)) evaluated directly
    assert!((k - c(1.039_659_447_665_262, 0.002_792_524_201_816_82)).norm() < 1e-12);
    let km = normal_wavevector(s.eps_m, s.k0(), c(in_plane_wavevector(&s, 77.0), 0.0));
    assert!(km.im > 0.0);
}

#[test]
fn length_and_depth_arithmetic() {
    assert!((propagation_length(c(1.0, 0.025)) - 0.02).abs() < 1e-15);
    let k0 = 0.01;
    let (dm, ds) = penetration_depths(c(-2.0, 0.0), c(1.0, 0.0), k0);
    assert!((ds - 1.0 / k0).abs() < 1e-12);
    assert!((dm - 0.5f64.sqrt() / k0).abs() < 1e-12);
    let (dm2, ds2) = penetration_depths(c(-2.0, 0.0), c(1.0, 0.0), 2.0 * k0);
    assert!((dm2 - dm / 2.0).abs() < 1e-12 && (ds2 - ds / 2.0).abs() < 1e-12);
}

#[test]
fn shipped_prefactor_is_the_calibrated_value() {
    let d = defaults();
    let opts = SolverOptions::default();
    let alpha = calibrate_prefactor(&d.qw.with_omega_b(2.0), &d.stack, -1.73, 77.0, &opts).unwrap();
    assert!((alpha - d.qw.alpha).abs() < 1e-12 * alpha, "{alpha} vs {}", d.qw.alpha);

    let cfg = d.qw.with_omega_b(2.0).with_delta_p(-1.73);
    let eps = medium_response(&cfg).unwrap().eps_s;
    let k = k_spp_single_interface(d.stack.eps_m, eps, d.stack.k0()).unwrap();
    let kz = in_plane_wavevector(&d.stack, 77.0);
    assert!((k.re - kz).abs() < 1e-12 * d.stack.k0());
}

#[test]
fn calibration_residual_is_monotone_near_root() {
    let d = defaults();
    let cfg = d.qw.with_omega_b(2.0).with_delta_p(-1.73);
    let kz = in_plane_wavevector(&d.stack, 77.0);
    let residual = |alpha: f64| {
        let eps = medium_response(&cfg.with_alpha(alpha)).unwrap().eps_s;
        k_spp_single_interface(d.stack.eps_m, eps, d.stack.k0()).unwrap().re - kz
    };
    let a = cfg.alpha;
    let samples: Vec<f64> = (-5..=5).map(|i| residual(a * (1.0 + 0.002 * i as f64))).collect();
    assert!(samples.windows(2).all(|w| w[1] < w[0]) || samples.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn grazing_calibration_target_is_reported() {
    let d = defaults();
    match calibrate_prefactor(&d.qw.with_omega_b(2.0), &d.stack, -1.73, 90.0, &SolverOptions::default()) {
        Ok(alpha) => assert!(alpha > 0.0),
        Err(PhysicsError::NoBracket { samples, .. }) => assert!(!samples.is_empty()),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn im_chi_vanishes_near_two_mev_pump() {
    let cfg = qw().with_delta_p(-1.73);
    let f = |ob: f64| susceptibility(&cfg.with_omega_b(ob)).unwrap().im;
    let root = spp_core::roots::first_root(&f, 1.5, 2.5, &SolverOptions::default()).unwrap();
    assert!((root - 2.0).abs() < 0.1, "{root}");
    assert!(f(root).abs() < 1e-12);
}

#[test]
fn angle_scan_inverts_detuning_resonance() {
    let d = defaults();
    let opts = SolverOptions::default();
    let pumped = d.qw.with_omega_b(2.0);
    let scan = ResonanceScan::DeltaP { theta_p: 77.0, start: -2.5, stop: -1.0 };
    let dp = find_resonance(&pumped, &d.stack, scan, &opts).unwrap();
    assert!((dp + 1.73).abs() < 1e-6, "{dp}");
    let th = find_resonance(
        &pumped.with_delta_p(dp),
        &d.stack,
        ResonanceScan::Theta { start: 0.0, stop: 90.0 },
        &opts,
    )
    .unwrap();
    assert!((th - 77.0).abs() < 1e-6, "{th}");
}

#[test]
fn no_resonance_without_the_medium() {
    let d = defaults();
    // dark state: chi = 0 exactly, so eps_s = 1 and Re k_spp > k0
    let dark = QwConfig {
        omega_b: 0.0,
        omega_s: 0.0,
        gamma_2: 0.0,
        gamma_3l: 0.0,
        delta_p: 0.0,
        delta_c: 0.0,
        ..d.qw
    };
    assert_eq!(susceptibility(&dark).unwrap(), c(0.0, 0.0));
    let r = find_resonances(&dark, &d.stack, ResonanceScan::Theta { start: -90.0, stop: 90.0 }, &SolverOptions::default());
    assert!(matches!(r, Err(PhysicsError::NoBracket { .. })));
}

#[test]
fn vacuum_film_has_no_coupler_free_thickness() {
    let d = defaults();
    let dark = QwConfig {
        omega_b: 0.0,
        omega_s: 0.0,
        gamma_2: 0.0,
        gamma_3l: 0.0,
        delta_p: 0.0,
        delta_c: 0.0,
        ..d.qw
    };
    let r = coupler_free_thickness(&dark, &d.stack, ThinFilmMode::LongRange, &SolverOptions::default());
    assert!(matches!(r, Err(PhysicsError::NoBracket { .. })));
}

#[test]
fn short_range_threshold_thickness() {
    let d = defaults();
    let pumped = d.qw.with_omega_b(2.0);
    let q = coupler_free_thickness(&pumped, &d.stack, ThinFilmMode::ShortRange, &SolverOptions::default()).unwrap();
    assert!((q - 36.846).abs() < 0.01, "{q}");
}

fn column(id: FigureId, name: &str) -> Vec<(f64, f64)> {
    let t = figure_table(id, &FigureOptions::default()).unwrap();
    t.rows.iter().map(|r| (r[0], r[t.column_index(name).unwrap()])).collect()
}

fn at(points: &[(f64, f64)], x: f64) -> f64 {
    points.iter().find(|p| (p.0 - x).abs() < 1e-9).unwrap().1
}

#[test]
fn fig2a_transparency_dip_at_line_centre() {
    let im = column(FigureId::Fig2a, "eps_s.im");
    assert_eq!(at(&im, 0.0), 0.0);
    let i = im.iter().position(|p| p.0 == 0.0).unwrap();
    assert!(im[i - 1].1 > 0.0 && im[i + 1].1 > 0.0);
}

#[test]
fn fig2b_zero_absorption_pumps() {
    let im = column(FigureId::Fig2b, "eps_s.im");
    let crossings: Vec<f64> = im
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| w[0].0)
        .collect();
    assert_eq!(crossings.len(), 2, "{crossings:?}");
    assert!((crossings[0] - 2.0).abs() < 0.1);
    assert!((crossings[1] - 3.2).abs() < 0.15);
}

#[test]
fn fig5b_propagation_lengths() {
    let l = column(FigureId::Fig5b, "L");
    assert!((at(&l, 2.0) - 19.2045).abs() < 1e-3);
    assert!((at(&l, 2.5) - 64.627).abs() < 1e-2);
}

#[test]
fn fig6_quantum_well_depth_exceeds_metal_depth() {
    let ds = column(FigureId::Fig6a, "delta_s");
    let dm = column(FigureId::Fig6b, "delta_m");
    assert!(ds.iter().zip(&dm).all(|(s, m)| s.1 > m.1));
}

#[test]
fn fig7a_long_range_damping_turns_to_gain_near_two_mev() {
    let im = column(FigureId::Fig7a, "k_lr_norm.im");
    let first = im.windows(2).find(|w| w[0].1 > 0.0 && w[1].1 < 0.0).unwrap();
    assert!((first[0].0 - 2.0).abs() < 0.15, "{first:?}");
    let sr = column(FigureId::Fig7b, "k_sr_norm.im");
    assert!(sr.iter().zip(&im).all(|(s, l)| s.1 > l.1));
}

#[test]
fn fig8c_long_range_length_peaks_near_350_um() {
    let l = column(FigureId::Fig8c, "L_lr");
    let max = l.iter().map(|p| p.1).fold(0.0, f64::max);
    assert!((max - 364.88).abs() < 0.05, "{max}");
}
