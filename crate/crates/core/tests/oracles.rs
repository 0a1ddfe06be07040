//! Independent re-derivations checked against the library.

use std::f64::consts::FRAC_PI_2;

use satnr_core::geometry::{angular_velocity, differential_distance, slant_range, visibility_pass_duration};
use satnr_core::impairments::{
    apparent_elevation, default_elevation_grid, default_error_grid, residual_doppler,
    residual_doppler_surface,
};
use satnr_core::numerology::{max_position_error, scs_from_index};
use satnr_core::ScenarioConfig;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Central angle via `acos((R/r) cos(el)) - el`, then chord length by the
/// law of cosines.
fn law_of_cosines_ranges(cfg: &ScenarioConfig) -> (f64, f64) {
    let re = cfg.constants.earth_radius_m;
    let r = re + cfg.altitude_m;
    let el = cfg.min_elevation_rad;
    let psi1 = (re / r * el.cos()).acos() - el;
    let psi2 = psi1 - cfg.beam_diameter_m / re;
    let chord = |psi: f64| (re * re + r * r - 2.0 * re * r * psi.cos()).sqrt();
    (chord(psi1), chord(psi2))
}

#[test]
fn differential_matches_law_of_cosines() {
    for (h, beam, el_deg) in [
        (1.2e6, 3.2e5, 45.0),
        (5.5e5, 1e5, 30.0),
        (2e6, 8e5, 20.0),
        (1.2e6, 1.0, 60.0),
    ] {
        let cfg = ScenarioConfig {
            altitude_m: h,
            beam_diameter_m: beam,
            min_elevation_rad: f64::to_radians(el_deg),
            ..Default::default()
        };
        let g = differential_distance(&cfg).unwrap();
        let (d1, d2) = law_of_cosines_ranges(&cfg);
        assert!(rel(g.d1_m, d1) < 1e-9, "d1 {} vs {}", g.d1_m, d1);
        assert!(rel(g.d2_m, d2) < 1e-9, "d2 {} vs {}", g.d2_m, d2);
    }
}

#[test]
fn default_differential_geometry() {
    let g = differential_distance(&ScenarioConfig::default()).unwrap();
    assert!((g.d1_m - 1580e3).abs() <= 2e3, "{g:?}");
    assert!((g.d2_m - 1372e3).abs() <= 10e3, "{g:?}");
    assert!((g.differential_m - 208e3).abs() <= 10e3, "{g:?}");
    assert_eq!(g.differential_m, g.d1_m - g.d2_m);
}

/// Steps an overhead pass at 1 ms and measures how long elevation stays at
/// or above the minimum, using explicit 2-D position vectors.
fn time_stepped_pass(cfg: &ScenarioConfig) -> f64 {
    let re = cfg.constants.earth_radius_m;
    let r = re + cfg.altitude_m;
    let w = (cfg.constants.earth_mu_m3s2 / r.powi(3)).sqrt();
    let dt = 1e-3;
    let elevation = |t: f64| {
        let (sx, sy) = (r * (w * t).sin(), r * (w * t).cos());
        let (lx, ly) = (sx, sy - re);
        (ly / (lx * lx + ly * ly).sqrt()).asin()
    };
    let mut steps = 0u64;
    while elevation(steps as f64 * dt) >= cfg.min_elevation_rad {
        steps += 1;
    }
    2.0 * steps as f64 * dt
}

#[test]
fn pass_duration_matches_time_stepping() {
    for el_deg in [45.0, 60.0, 80.0] {
        let cfg = ScenarioConfig {
            min_elevation_rad: f64::to_radians(el_deg),
            ..Default::default()
        };
        let closed = visibility_pass_duration(&cfg);
        let stepped = time_stepped_pass(&cfg);
        assert!(rel(closed, stepped) < 0.01, "{el_deg}: {closed} vs {stepped}");
    }
}

#[test]
fn frozen_angular_velocity() {
    // sqrt(3.986004418e14 / 7.571e6^3), evaluated offline
    let w = angular_velocity(&ScenarioConfig::default());
    assert!(rel(w, 9.583828170e-4) < 1e-9, "{w}");
}

#[test]
fn apparent_elevation_satisfies_both_relations() {
    for (d, th, rb) in [
        (1.2e6, FRAC_PI_2, 3.95e3),
        (1.58e6, 0.785, 50e3),
        (1.4e6, 1.1, 10e3),
        (2e6, 0.3, 1e5),
    ] {
        let te = apparent_elevation(d, th, rb).unwrap();
        let de = (d * d + rb * rb + 2.0 * rb * d * f64::cos(th)).sqrt();
        // |d_e| cos(te) = |d| cos(th) + R_B
        let lhs7 = de * te.cos();
        let rhs7 = d * th.cos() + rb;
        assert!(rel(lhs7, rhs7) < 1e-9, "{lhs7} vs {rhs7}");
        // |d|^2 = |d_e|^2 + R_B^2 - 2 R_B |d_e| cos(te)
        let rhs8 = de * de + rb * rb - 2.0 * rb * de * te.cos();
        assert!(rel(d * d, rhs8) < 1e-9, "{} vs {rhs8}", d * d);
    }
}

#[test]
fn surface_equals_pointwise() {
    let cfg = ScenarioConfig::default();
    let els = default_elevation_grid();
    let errs = default_error_grid();
    let s = residual_doppler_surface(&cfg, &els, &errs).unwrap();
    assert_eq!(s.cells.len(), els.len() * errs.len());
    for (i, &th) in els.iter().enumerate() {
        for (j, &rb) in errs.iter().enumerate() {
            assert_eq!(*s.at(i, j), residual_doppler(&cfg, th, rb).unwrap());
        }
    }
}

#[test]
fn surface_peaks_at_zenith() {
    let cfg = ScenarioConfig::default();
    let els = default_elevation_grid();
    let s = residual_doppler_surface(&cfg, &els, &default_error_grid()).unwrap();
    for j in 1..s.position_errors_m.len() {
        let best = (0..els.len())
            .max_by(|&a, &b| {
                s.at(a, j)
                    .residual_doppler_hz
                    .total_cmp(&s.at(b, j).residual_doppler_hz)
            })
            .unwrap();
        assert_eq!(best, els.len() - 1, "R_B = {}", s.position_errors_m[j]);
    }
}

#[test]
fn zero_error_identity_over_grid() {
    let cfg = ScenarioConfig::default();
    for th in default_elevation_grid() {
        let r = residual_doppler(&cfg, th, 0.0).unwrap();
        assert!(r.residual_doppler_hz <= 1e-9 * r.true_doppler_hz.abs().max(1.0));
    }
}

#[test]
fn residual_grows_with_error_at_zenith() {
    let cfg = ScenarioConfig::default();
    let mut last = 0.0;
    for k in 1..=50 {
        let r = residual_doppler(&cfg, FRAC_PI_2, f64::from(k) * 1e3).unwrap();
        assert!(r.residual_doppler_hz > last, "{k} km");
        last = r.residual_doppler_hz;
    }
}

#[test]
fn max_error_sits_on_the_tolerance_boundary() {
    let cfg = ScenarioConfig::default();
    for n in 0..=5 {
        let scs = scs_from_index(n);
        let tol = cfg.scs_doppler_ratio * scs;
        let rb = max_position_error(&cfg, scs).unwrap();
        let at = residual_doppler(&cfg, FRAC_PI_2, rb).unwrap().residual_doppler_hz;
        let past = residual_doppler(&cfg, FRAC_PI_2, rb + 1.0).unwrap().residual_doppler_hz;
        assert!(at <= tol && past > tol, "n={n}: {at} {tol} {past}");
    }
}

/// Residual at zenith is `F * R_B / sqrt(d^2 + R_B^2)`, nearly linear in R_B
/// while R_B << d. A dense sweep finds each crossing independently of the
/// bisection.
#[test]
fn doubling_spacing_roughly_doubles_tolerated_error() {
    let cfg = ScenarioConfig::default();
    let sweep = |tol: f64| {
        let mut rb = 0.0;
        while residual_doppler(&cfg, FRAC_PI_2, rb + 1.0).unwrap().residual_doppler_hz <= tol {
            rb += 1.0;
        }
        rb
    };
    let mut prev = None;
    for n in 0..=3 {
        let scs = scs_from_index(n);
        let swept = sweep(cfg.scs_doppler_ratio * scs);
        let bisected = max_position_error(&cfg, scs).unwrap();
        assert!((swept - bisected).abs() <= 1.0, "{swept} vs {bisected}");
        if let Some(p) = prev {
            assert!(rel(swept, 2.0 * p) < 0.005, "{swept} vs 2 x {p}");
        }
        prev = Some(swept);
    }
}

#[test]
fn slant_range_frozen_values() {
    let cfg = ScenarioConfig::default();
    // closed form -R sin(el) + sqrt(R^2 sin^2(el) + (R+h)^2 - R^2), evaluated offline
    let d = slant_range(&cfg, 45f64.to_radians()).unwrap();
    assert!(rel(d, 1_579_857.987) < 1e-9, "{d}");
}
