use proptest::prelude::*;

use spp_core::config::{parse_config, to_config_text, Axis, Quantity, RunConfig, Sweep, SweepVariable};
use spp_core::medium::{medium_response, susceptibility, susceptibility_oracle};
use spp_core::multilayer::{
    fresnel_r_tm, in_plane_wavevector, normal_wavevector, stack_coefficients,
};
use spp_core::spp::{
    explicit_mode, penetration_depths, propagation_length, thin_film_mode, ThinFilmMethod,
    ThinFilmMode,
};
use spp_core::{Complex64, OpticalStack, QwConfig, SolverOptions, ThinFilmMethod as Method};

fn qw_strategy() -> impl Strategy<Value = QwConfig> {
    (
        (0.1f64..5.0, 0.0f64..8.0, 0.0f64..5.0, 0.0f64..3.0),
        (-6.0f64..6.0, -3.0f64..3.0, -3.0f64..3.0),
        (0.0f64..1.0, 0.0f64..4.0, 0.0f64..4.0, 0.5f64..4.0, 0.5f64..4.0),
        0.1f64..10.0,
    )
        .prop_map(|((op, oc, ob, os), (dp, dc, db), (g2, g3l, g4l, g3d, g4d), alpha)| QwConfig {
            omega_p: op,
            omega_c: oc,
            omega_b: ob,
            omega_s: os,
            delta_p: dp,
            delta_c: dc,
            delta_b: db,
            gamma_2: g2,
            gamma_3l: g3l,
            gamma_4l: g4l,
            gamma_3d: g3d,
            gamma_4d: g4d,
            alpha,
        })
}

fn complex(re: std::ops::Range<f64>, im: std::ops::Range<f64>) -> impl Strategy<Value = Complex64> {
    (re, im).prop_map(|(a, b)| Complex64::new(a, b))
}

fn stack_strategy() -> impl Strategy<Value = OpticalStack> {
    (1.0f64..2.0, complex(-30.0..-1.0, 0.0..3.0), 0.0f64..100.0, 400.0f64..1000.0).prop_map(
        |(n_t, eps_m, q, lambda0)| OpticalStack {
            eps_t: Complex64::new(n_t * n_t, 0.0),
            eps_m,
            q,
            lambda0,
            n_t,
        },
    )
}

proptest! {
    #[test]
    fn closed_form_matches_oracle(cfg in qw_strategy()) {
        if let (Ok(a), Ok(b)) = (susceptibility(&cfg), susceptibility_oracle(&cfg)) {
            prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(b.norm()).max(1e-300));
        }
    }

    #[test]
    fn susceptibility_is_linear_in_prefactor(cfg in qw_strategy(), scale in 0.1f64..10.0) {
        if let (Ok(a), Ok(b)) = (susceptibility(&cfg), susceptibility(&cfg.with_alpha(cfg.alpha * scale))) {
            prop_assert!((b - a * scale).norm() <= 1e-12 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn dark_state_is_transparent(mut cfg in qw_strategy()) {
        cfg.gamma_2 = 0.0;
        cfg.delta_c = cfg.delta_p;
        cfg.omega_b = 0.0;
        cfg.omega_s = 0.0;
        cfg.gamma_3l = 0.0;
        prop_assert_eq!(susceptibility(&cfg).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn permittivity_absorption_sign_follows_chi(cfg in qw_strategy()) {
        if let Ok(m) = medium_response(&cfg) {
            prop_assert_eq!(m.eps_s.im.signum(), m.chi.im.signum());
        }
    }

    #[test]
    fn zero_thickness_composes_interfaces(
        s in stack_strategy(),
        eps_s in complex(0.5..3.0, 0.0..0.5),
        th in -89.9f64..89.9,
    ) {
        let s = s.with_thickness(0.0);
        let kz = Complex64::new(in_plane_wavevector(&s, th), 0.0);
        let kt = normal_wavevector(s.eps_t, s.k0(), kz);
        let ks = normal_wavevector(eps_s, s.k0(), kz);
        let direct = fresnel_r_tm(s.eps_t, eps_s, kt, ks).unwrap();
        let r = stack_coefficients(&s, eps_s, th).unwrap().r;
        prop_assert!((r - direct).norm() < 1e-12);
    }

    #[test]
    fn reflectivity_is_even_in_angle(s in stack_strategy(), eps_s in complex(0.5..3.0, -0.5..0.5), th in 0.0f64..90.0) {
        let a = stack_coefficients(&s, eps_s, th).map(|r| r.reflectivity.to_bits());
        let b = stack_coefficients(&s, eps_s, -th).map(|r| r.reflectivity.to_bits());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn passive_stack_does_not_amplify(s in stack_strategy(), eps_s in complex(-5.0..5.0, 0.0..2.0), th in -90.0f64..90.0) {
        if let Ok(r) = stack_coefficients(&s, eps_s, th) {
            prop_assert!(r.reflectivity <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn evanescent_branch(eps in complex(-30.0..30.0, -3.0..3.0), kz in 0.0f64..0.05) {
        let k = normal_wavevector(eps, 0.0107, Complex64::new(kz, 0.0));
        prop_assert!(k.im >= 0.0);
        if k.im == 0.0 {
            prop_assert!(k.re >= 0.0);
        }
    }

    #[test]
    fn lengths_and_depths_positive_when_damped(
        eps_m in complex(-30.0..-1.0, 0.0..3.0),
        eps_s in complex(0.5..3.0, 0.0..0.5),
        k0 in 0.005f64..0.02,
    ) {
        let k = spp_core::spp::k_spp_single_interface(eps_m, eps_s, k0).unwrap();
        if k.im > 0.0 {
            prop_assert!(propagation_length(k) > 0.0);
        }
        let (dm, ds) = penetration_depths(eps_m, eps_s, k0);
        prop_assert!(dm > 0.0 && ds > 0.0);
    }

    #[test]
    fn explicit_and_implicit_film_modes_agree_for_thin_films(
        ob in 0.0f64..4.0,
        dp in -3.0f64..0.0,
        q in 2.0f64..10.0,
    ) {
        let d = spp_core::config::defaults();
        let eps = medium_response(&d.qw.with_omega_b(ob).with_delta_p(dp)).unwrap().eps_s;
        let s = d.stack;
        for (mode, tol) in [(ThinFilmMode::LongRange, 0.01), (ThinFilmMode::ShortRange, 0.02)] {
            let e = explicit_mode(mode, s.eps_m, eps, s.k0(), q).unwrap();
            let k = thin_film_mode(mode, ThinFilmMethod::ImplicitRoot, s.eps_m, eps, s.k0(), q, &SolverOptions::default()).unwrap();
            prop_assert!((k - e).norm() < tol * k.norm(), "{:?} q={} {} vs {}", mode, q, k, e);
        }
    }

    #[test]
    fn config_text_round_trips(
        qw in qw_strategy(),
        eps_m in complex(-30.0..-1.0, 0.0..3.0),
        q in 0.0f64..100.0,
        theta in -90.0f64..90.0,
        start in -5.0f64..0.0,
        stop in 0.1f64..5.0,
        count in 2usize..500,
        inner in proptest::option::of((-90.0f64..0.0, 1.0f64..90.0, 2usize..50)),
        implicit in any::<bool>(),
        plot in any::<bool>(),
        path in proptest::option::of("[a-z_/]{1,12}\\.csv"),
        outputs in proptest::sample::subsequence(
            vec![Quantity::Chi, Quantity::R, Quantity::TEl, Quantity::L, Quantity::KLr, Quantity::Tau, Quantity::Asym],
            1..=7,
        ),
    ) {
        let mut cfg = RunConfig::with_defaults(
            Sweep {
                outer: Axis::new(SweepVariable::DeltaP, start, stop, count),
                inner: inner.map(|(a, b, n)| Axis::new(SweepVariable::ThetaP, a, b, n)),
            },
            outputs,
        );
        cfg.qw = qw;
        cfg.stack.eps_m = eps_m;
        cfg.stack.q = q;
        cfg.theta_p = theta;
        cfg.thin_film = if implicit { Method::ImplicitRoot } else { Method::ExplicitSmallQ };
        cfg.plot = plot;
        cfg.out_path = path.map(Into::into);
        cfg.validate().unwrap();
        let text = to_config_text(&cfg);
        prop_assert_eq!(parse_config(&text).unwrap(), cfg);
    }
}
