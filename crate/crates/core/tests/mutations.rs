//! The invariant suite must notice a wrong rounding rule or a wrong constant.

use modecap::simulation::{self, SimulationConfig};
use modecap::verify::{self, Mutations};

#[test]
fn reference_model_passes() {
    let m = Mutations::default();
    assert!(verify::dof_ordering(&m).passed);
    assert!(verify::detectability(&m).passed);
}

#[test]
fn floor_instead_of_ceiling_breaks_ordering() {
    let m = Mutations {
        index_round: f64::floor,
        ..Mutations::default()
    };
    let r = verify::dof_ordering(&m);
    assert!(!r.passed, "{}", r.detail);
    assert!(r.detail.starts_with("3 violations"), "{}", r.detail);
}

#[test]
fn dropping_e_breaks_detectability() {
    let m = Mutations {
        critical_frequency: verify::critical_frequency_without_e,
        ..Mutations::default()
    };
    let r = verify::detectability(&m);
    assert!(!r.passed, "{}", r.detail);

    let cfg = SimulationConfig {
        trials: 0,
        ..SimulationConfig::default()
    };
    let det = simulation::detectability_scan(
        &verify::detectability_scenario(),
        &cfg,
        &verify::critical_frequency_without_e,
    )
    .unwrap();
    let failed: Vec<usize> = det.iter().filter(|d| !d.passed).map(|d| d.n).collect();
    assert_eq!(failed, [8, 9, 10, 11]);
}

#[test]
fn full_simulation_reports_mutant() {
    let cfg = SimulationConfig {
        trials: 0,
        freq_points: 257,
        ..SimulationConfig::default()
    };
    let s = verify::detectability_scenario();
    let good = simulation::run_simulation(&s, &cfg).unwrap();
    assert!(good.passed);
    let bad = simulation::run_simulation_with(&s, &cfg, &verify::critical_frequency_without_e).unwrap();
    assert!(!bad.detectability_passed);
    assert!(!bad.passed);
    // the field itself is unaffected
    assert!(bad.jacobi_anger_passed && bad.parseval_passed);
}
