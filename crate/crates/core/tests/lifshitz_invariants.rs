use std::sync::Arc;

use casimir::io::log_grid;
use casimir::lifshitz::{free_energy, pressure, EvaluationConfig};
use casimir::models::{DrudeParameters, MaterialResponse, ZeroFrequencyRule};
use casimir::presets::{self, Preset};

fn au() -> DrudeParameters {
    presets::lookup("Au-paper").unwrap().drude_parameters().unwrap().clone()
}

fn models() -> Vec<MaterialResponse> {
    let d = au();
    let Preset::Table { table, .. } = presets::lookup("Si-static").unwrap() else {
        panic!("Si-static is tabulated")
    };
    vec![
        MaterialResponse::IdealMetalSchwinger,
        MaterialResponse::drude(d.clone()),
        MaterialResponse::plasma(d.omega_p).unwrap(),
        MaterialResponse::ImpedanceInfraredOptics { omega_p: d.omega_p },
        MaterialResponse::ImpedanceSkinEffect(d.clone()),
        MaterialResponse::TabulatedEps(Arc::clone(&table)),
    ]
}

#[test]
fn pressure_magnitude_decreases_with_separation() {
    let cfg = EvaluationConfig::with_tolerance(1e-6).unwrap();
    let grid = log_grid(100e-9, 10e-6, 20).unwrap();
    for m in models() {
        let p: Vec<f64> = grid.iter().map(|&z| pressure(z, 300.0, &m, &cfg).unwrap()).collect();
        assert!(p.iter().all(|&v| v < 0.0), "{}", m.tag());
        assert!(p.windows(2).all(|w| w[1].abs() < w[0].abs()), "{}: {p:?}", m.tag());
    }
}

#[test]
fn zero_frequency_rule_ordering() {
    // Same ξ > 0 response for all three: Drude with γ = 0 is the plasma model.
    let cfg = EvaluationConfig::default();
    let d = au();
    let bulk = MaterialResponse::plasma(d.omega_p).unwrap();
    for &z in &[0.3e-6, 1e-6, 3e-6] {
        for &t in &[10.0, 300.0] {
            let f = |rule| {
                free_energy(z, t, &MaterialResponse::mixed(bulk.clone(), rule), &cfg)
                    .unwrap()
                    .free_energy_per_area
                    .abs()
            };
            let drude = f(ZeroFrequencyRule::Drude);
            let plasma = f(ZeroFrequencyRule::Plasma { omega_p: d.omega_p });
            let ideal = f(ZeroFrequencyRule::Ideal);
            assert!(drude <= plasma && plasma <= ideal, "z={z} T={t}: {drude} {plasma} {ideal}");
        }
    }
    let unmixed = free_energy(1e-6, 300.0, &bulk, &cfg).unwrap();
    let mixed = free_energy(
        1e-6,
        300.0,
        &MaterialResponse::mixed(bulk.clone(), ZeroFrequencyRule::Plasma { omega_p: d.omega_p }),
        &cfg,
    )
    .unwrap();
    assert!(!unmixed.mixed_prescription && mixed.mixed_prescription);
    assert!(((unmixed.free_energy_per_area - mixed.free_energy_per_area) / unmixed.free_energy_per_area).abs() < 1e-12);
}

#[test]
fn impedance_tracks_plasma() {
    let cfg = EvaluationConfig::default();
    let d = au();
    let plasma = MaterialResponse::plasma(d.omega_p).unwrap();
    let imp = MaterialResponse::ImpedanceInfraredOptics { omega_p: d.omega_p };
    for z in log_grid(1e-6, 10e-6, 6).unwrap() {
        let a = free_energy(z, 300.0, &plasma, &cfg).unwrap().free_energy_per_area;
        let b = free_energy(z, 300.0, &imp, &cfg).unwrap().free_energy_per_area;
        assert!(((a - b) / a).abs() < 0.02, "z={z}: {a} vs {b}");
    }
}

#[test]
fn error_estimate_bounds_tolerance_change() {
    let d = au();
    let model = MaterialResponse::drude(d);
    for &z in &[0.2e-6, 2e-6] {
        let loose = free_energy(z, 300.0, &model, &EvaluationConfig::with_tolerance(1e-6).unwrap()).unwrap();
        let tight = free_energy(z, 300.0, &model, &EvaluationConfig::with_tolerance(1e-11).unwrap()).unwrap();
        let change = ((loose.free_energy_per_area - tight.free_energy_per_area) / tight.free_energy_per_area).abs();
        assert!(loose.quadrature_error_estimate <= 1e-6);
        assert!(change <= loose.quadrature_error_estimate.max(1e-12), "z={z}: {change} vs {}", loose.quadrature_error_estimate);
    }
}

#[test]
fn results_are_thread_independent() {
    use rayon::prelude::*;
    let cfg = EvaluationConfig::default();
    let m = MaterialResponse::drude(au());
    let grid = log_grid(100e-9, 5e-6, 12).unwrap();
    let serial: Vec<f64> = grid.iter().map(|&z| pressure(z, 300.0, &m, &cfg).unwrap()).collect();
    let parallel: Vec<f64> = grid.par_iter().map(|&z| pressure(z, 300.0, &m, &cfg).unwrap()).collect();
    assert_eq!(serial, parallel);
}
