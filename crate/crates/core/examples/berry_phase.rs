//! Closed spin-1/2 in a rotating field: the cyclic holonomy of the
//! invariant's eigenframe reduces to the Berry phases `+-pi(1 - cos theta0)`.

use std::f64::consts::PI;

use hkit::dynamics::{propagate, TimeGrid, TrajectoryKind};
use hkit::frames::eigenframes;
use hkit::holonomy::{geometric_phase, CaseTag};
use hkit::matlib::phase_set_distance;
use hkit::models::two_level::{berry_reference, chi_closed_form, two_level_model, TwoLevelDecayParams};

/// Largest eigenphase error over a few cone angles.
pub fn run_example() -> hkit::Result<f64> {
    let mut worst = 0.0_f64;
    println!("{:>8} {:>14} {:>14} {:>10}", "theta0", "phase +", "reference", "error");
    for theta0 in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0] {
        let p = TwoLevelDecayParams::new(1.0, 0.0, 1.0, theta0, 0.3)?;
        let grid = TimeGrid::new(0.0, p.period(), 4001)?;
        let inv = propagate(&two_level_model(&p)?, &chi_closed_form(&p, 0.0), &grid, TrajectoryKind::Invariant, 1e-10)?;
        let frames = eigenframes(&inv, 1e-8)?;
        // closed system, nondegenerate: each level carries its own phase
        let hol = geometric_phase(&frames, grid.len() - 1, CaseTag::NTND)?;
        let (a, b) = berry_reference(theta0);
        let err = phase_set_distance(&hol.eigenphases, &[a, b]);
        worst = worst.max(err);
        println!("{theta0:8.4} {:14.10} {:14.10} {err:10.2e}", hol.eigenphases[0].max(hol.eigenphases[1]), a.max(b));
    }
    Ok(worst)
}

fn main() -> hkit::Result<()> {
    let worst = run_example()?;
    println!("worst error {worst:.2e}");
    Ok(())
}
