//! Each example's `run_example` as a regression check.

#[allow(dead_code)]
#[path = "../examples/berry_phase.rs"]
mod berry_phase;
#[allow(dead_code)]
#[path = "../examples/decay_holonomy.rs"]
mod decay_holonomy;
#[allow(dead_code)]
#[path = "../examples/gauge_covariance.rs"]
mod gauge_covariance;
#[allow(dead_code)]
#[path = "../examples/wilczek_zee.rs"]
mod wilczek_zee;
#[allow(dead_code)]
#[path = "../examples/coefficient_routes.rs"]
mod coefficient_routes;
#[allow(dead_code)]
#[path = "../examples/invariant_oracle.rs"]
mod invariant_oracle;
#[allow(dead_code)]
#[path = "../examples/eta_zeta.rs"]
mod eta_zeta;
#[allow(dead_code)]
#[path = "../examples/scenario_run.rs"]
mod scenario_run;

#[test]
fn berry_phase_example() {
    assert!(berry_phase::run_example().unwrap() < 1e-5);
}

#[test]
fn decay_holonomy_example() {
    let s = decay_holonomy::run_example().unwrap();
    assert!(s.unitarity < 1e-9);
    assert!(s.commutator > 1e-6);
    // first order in gamma, see the eta_zeta example
    assert!(s.omega_gap < 1e-2);
}

#[test]
fn gauge_covariance_example() {
    assert!(gauge_covariance::run_example().unwrap() < 1e-5);
}

#[test]
fn wilczek_zee_example() {
    assert!(wilczek_zee::run_example().unwrap() > 1e-3);
}

#[test]
fn coefficient_routes_example() {
    assert!(coefficient_routes::run_example().unwrap() < 1e-6);
}

#[test]
fn invariant_oracle_example() {
    assert!(invariant_oracle::run_example().unwrap() < 1e-8);
}

#[test]
fn eta_zeta_example() {
    let rows = eta_zeta::run_example().unwrap();
    for r in &rows {
        // the constant-offset reading of zeta is the better one everywhere off the equator
        if (r.theta0 - std::f64::consts::FRAC_PI_2).abs() > 1e-9 {
            assert!(r.zeta_constant.abs() < r.zeta_growing.abs());
        }
        assert!(r.eta.abs() < 2e-2);
    }
}

#[test]
fn scenario_run_example() {
    let dir = scenario_run::run_example().unwrap();
    assert!(dir.join("holonomy.json").exists());
    std::fs::remove_dir_all(dir).unwrap();
}
