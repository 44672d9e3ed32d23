use casimir::models::{DrudeParameters, GammaMap, MaterialResponse};
use casimir::thermo::{drude_zero_T_entropy, entropy, nernst_verdict, nernst_verdict_with, ScanSettings, Verdict};

fn au() -> DrudeParameters {
    DrudeParameters::from_ev(9.0, 0.035).unwrap()
}

/// No step artifacts: every interior value sits within 25% (of the local
/// magnitude) of the mean of its neighbours.
fn assert_continuous(s: &[f64]) {
    for w in s.windows(3) {
        let local = w.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let defect = (w[1] - 0.5 * (w[0] + w[2])).abs();
        assert!(defect < 0.25 * local, "{w:?} in {s:?}");
    }
}

#[test]
fn scans_are_continuous() {
    let d = au();
    let plasma = nernst_verdict(&MaterialResponse::plasma(d.omega_p).unwrap(), 1e-6, None).unwrap();
    assert_continuous(&plasma.entropies);
    let perfect = nernst_verdict(
        &MaterialResponse::drude(d.clone()),
        1e-6,
        Some(GammaMap::perfect_lattice(300.0, 165.0)),
    )
    .unwrap();
    assert_continuous(&perfect.entropies);
    assert!(perfect.converged.iter().all(|&c| c));
    assert_eq!(perfect.temperatures.len(), 25);
}

#[test]
fn perfect_lattice_extrapolates_to_zero_t_entropy() {
    let d = au();
    let scan = nernst_verdict(
        &MaterialResponse::drude(d.clone()),
        1e-6,
        Some(GammaMap::perfect_lattice(300.0, 165.0)),
    )
    .unwrap();
    let s0 = drude_zero_T_entropy(1e-6, d.omega_p).unwrap();
    assert_eq!(scan.verdict, Verdict::NernstViolated);
    assert!(((scan.extrapolated - s0) / s0).abs() < 0.01, "{} vs {s0}", scan.extrapolated);
}

#[test]
fn constant_gamma_drude_at_low_t() {
    // Constant γ behaves like a large residual: S → 0.
    let d = au();
    let settings = ScanSettings {
        t_low: Some(1e-4),
        ..ScanSettings::default()
    };
    let scan = nernst_verdict_with(&MaterialResponse::drude(d), 1e-6, None, &settings).unwrap();
    assert_eq!(scan.verdict, Verdict::NernstOk);
}

#[test]
fn explicit_grid_is_validated() {
    let d = au();
    let m = MaterialResponse::plasma(d.omega_p).unwrap();
    let bad = ScanSettings {
        grid: Some(vec![1.0, 2.0]),
        ..ScanSettings::default()
    };
    assert!(nernst_verdict_with(&m, 1e-6, None, &bad).is_err());
    assert!(entropy(1e-6, -1.0, &m).is_err());
    assert!(nernst_verdict(&m, 0.0, None).is_err());
}
