//! Angles of the rotating frame: integrated exactly versus the
//! weak-coupling formulas, with both readings of the zeta correction.

use std::f64::consts::PI;

use hkit::dynamics::TimeGrid;
use hkit::models::two_level::{eta_zeta_approx_with, integrate_eta_zeta, TwoLevelDecayParams, ZetaReading};

#[derive(Debug)]
pub struct AngleErrors {
    pub theta0: f64,
    pub eta: f64,
    pub zeta_constant: f64,
    pub zeta_growing: f64,
}

/// Errors at one period for a few cone angles, at `gamma / w0 = 1e-3`.
pub fn run_example() -> hkit::Result<Vec<AngleErrors>> {
    let mut rows = Vec::new();
    println!("{:>8} {:>11} {:>14} {:>14}", "theta0", "eta err", "zeta const", "zeta growing");
    for theta0 in [PI / 7.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, 0.9 * PI] {
        let p = TwoLevelDecayParams::new(1.0, 1e-3, 1.0, theta0, 0.4)?;
        let t = p.period();
        let grid = TimeGrid::new(0.0, t, 20001)?;
        let (eta, zeta) = *integrate_eta_zeta(&p, &grid)?.last().expect("grid is non-empty");
        let a = eta_zeta_approx_with(&p, t, ZetaReading::ConstantOffset);
        let b = eta_zeta_approx_with(&p, t, ZetaReading::GrowingOffset);
        let row = AngleErrors { theta0, eta: eta - a.eta, zeta_constant: zeta - a.zeta, zeta_growing: zeta - b.zeta };
        println!("{theta0:8.4} {:11.3e} {:14.3e} {:14.3e}", row.eta, row.zeta_constant, row.zeta_growing);
        rows.push(row);
    }
    Ok(rows)
}

fn main() -> hkit::Result<()> {
    run_example()?;
    Ok(())
}
