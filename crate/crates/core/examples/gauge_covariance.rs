//! Re-gauging the frame by a smooth random unitary leaves the holonomy's
//! spectrum alone and conjugates `O` by the initial gauge value.

use std::f64::consts::PI;

use hkit::dynamics::TimeGrid;
use hkit::frames::{gauge_transform, GaugeField, GaugeMixing, SmoothRandomGauge};
use hkit::holonomy::{geometric_phase, CaseTag};
use hkit::matlib::{max_abs_diff, phase_set_distance};
use hkit::models::two_level::{analytic_frames, TwoLevelDecayParams};

/// Worst covariance residual over the seeds.
pub fn run_example() -> hkit::Result<f64> {
    let p = TwoLevelDecayParams::new(1.0, 1e-3, 1.0, PI / 3.0, 0.0)?;
    let grid = TimeGrid::new(0.0, p.period(), 8001)?;
    let frames = analytic_frames(&p, &grid)?;
    let k = grid.len() - 1;
    let mut worst = 0.0_f64;
    for (case, mixing) in [(CaseTag::TND, GaugeMixing::Full), (CaseTag::NTND, GaugeMixing::Diagonal)] {
        let base = geometric_phase(&frames, k, case)?;
        for seed in 1..=4 {
            let gauge = SmoothRandomGauge::new(seed, &frames.blocks, mixing, 3, 1.0);
            let moved = geometric_phase(&gauge_transform(&frames, &gauge)?, k, case)?;
            let m0 = gauge.value(0.0);
            let cov = max_abs_diff(&moved.o, &(m0.adjoint() * &base.o * &m0));
            let spec = phase_set_distance(&base.eigenphases, &moved.eigenphases);
            worst = worst.max(cov);
            println!("{case:6} seed {seed}: spectrum shift {spec:.1e}, covariance residual {cov:.1e}");
        }
    }
    Ok(worst)
}

fn main() -> hkit::Result<()> {
    println!("worst residual {:.2e}", run_example()?);
    Ok(())
}
