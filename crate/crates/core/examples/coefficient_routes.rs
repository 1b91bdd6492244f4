//! Two routes to rho(t): direct Lindblad propagation, and propagating the
//! coefficients in the invariant basis before mapping back.

use std::f64::consts::PI;

use hkit::dynamics::{initial_coefficients, propagate, propagate_coefficients, reconstruct_density, TimeGrid, TrajectoryKind};
use hkit::frames::connection;
use hkit::matlib::max_abs_diff;
use hkit::models::two_level::{analytic_frames, initial_density, two_level_model, TwoLevelDecayParams};

/// Largest gap between the routes over all runs.
pub fn run_example() -> hkit::Result<f64> {
    let mut worst = 0.0_f64;
    for gamma in [0.0, 1e-3, 5e-2] {
        let p = TwoLevelDecayParams::new(1.0, gamma, 1.0, PI / 3.0, 0.2)?;
        let grid = TimeGrid::new(0.0, p.period(), 2001)?;
        let model = two_level_model(&p)?;
        let rho = propagate(&model, &initial_density(&p), &grid, TrajectoryKind::Density, 1e-8)?;
        let frames = analytic_frames(&p, &grid)?;
        let a = connection(&frames)?;
        let coeffs = propagate_coefficients(&model, &frames, &a, &initial_coefficients(&frames, &rho.samples[0]), &grid)?;
        let rebuilt = reconstruct_density(&frames, &coeffs)?;
        let gap = rebuilt.iter().zip(&rho.samples).map(|(x, y)| max_abs_diff(x, y)).fold(0.0, f64::max);
        worst = worst.max(gap);
        println!("gamma {gamma:7.1e}: route gap {gap:.2e}, final rho_ee {:.6}", rho.last()[(0, 0)].re);
    }
    Ok(worst)
}

fn main() -> hkit::Result<()> {
    run_example()?;
    Ok(())
}
