//! The numerically propagated invariant against its closed form, and the
//! conserved expectation Tr[I rho].

use std::f64::consts::PI;

use hkit::dynamics::{invariant_expectation, propagate, TimeGrid, TrajectoryKind};
use hkit::matlib::max_abs_diff;
use hkit::models::two_level::{chi_closed_form, initial_density, two_level_model, TwoLevelDecayParams};

/// Worst deviation from the closed form.
pub fn run_example() -> hkit::Result<f64> {
    let p = TwoLevelDecayParams::new(1.0, 2e-2, 1.0, 2.0 * PI / 3.0, 0.1)?;
    let grid = TimeGrid::new(0.0, 3.0 * p.period(), 6001)?;
    let model = two_level_model(&p)?;
    let inv = propagate(&model, &chi_closed_form(&p, 0.0), &grid, TrajectoryKind::Invariant, 1e-10)?;
    let rho = propagate(&model, &initial_density(&p), &grid, TrajectoryKind::Density, 1e-8)?;
    let mut worst = 0.0_f64;
    for (k, t) in grid.times().enumerate() {
        worst = worst.max(max_abs_diff(&inv.samples[k], &chi_closed_form(&p, t)));
    }
    let e0 = invariant_expectation(&inv.samples[0], &rho.samples[0])?;
    let e1 = invariant_expectation(inv.last(), rho.last())?;
    println!("max |I - I_exact| = {worst:.2e} over three periods");
    println!("Tr[I rho]: {e0:.12} -> {e1:.12}");
    Ok(worst)
}

fn main() -> hkit::Result<()> {
    run_example()?;
    Ok(())
}
