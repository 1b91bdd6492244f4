//! Weakly damped spin: the holonomy stays unitary while the frame
//! generator stops commuting with itself, and `Omega(t)` tracks its
//! weak-coupling approximation.

use std::f64::consts::PI;

use hkit::dynamics::{basis_series, TimeGrid};
use hkit::frames::connection;
use hkit::holonomy::{geometric_phase_with, non_abelian_witness, CaseTag};
use hkit::matlib::unitary_deviation;
use hkit::models::two_level::{analytic_frames, omega_approx, omega_numeric, two_level_model, TwoLevelDecayParams};

#[derive(Debug)]
pub struct DecaySummary {
    pub unitarity: f64,
    pub commutator: f64,
    pub omega_gap: f64,
}

pub fn run_example() -> hkit::Result<DecaySummary> {
    let p = TwoLevelDecayParams::new(1.0, 1e-3, 1.0, 2.0 * PI / 3.0, 0.4)?;
    let grid = TimeGrid::new(0.0, p.period(), 8001)?;
    let frames = analytic_frames(&p, &grid)?;
    let a = connection(&frames)?;
    let k = grid.len() - 1;

    let mut unitarity = 0.0_f64;
    for case in [CaseTag::General, CaseTag::TND, CaseTag::NTND] {
        let hol = geometric_phase_with(&frames, &a, k, case)?;
        unitarity = unitarity.max(unitary_deviation(&hol.o));
        println!("{case:6} phases {:?} |tr O| {:.12}", hol.eigenphases, hol.trace_o.norm());
    }

    let g: Vec<_> = basis_series(&two_level_model(&p)?, &frames, &a)?.iter().map(|b| b.generator()).collect();
    let w = non_abelian_witness(&g, grid.dt(), 32)?;
    println!("H + A + iD: commutator {:.3e}, reversal gap {:.3e}", w.commutator, w.reversal_gap);

    let (omega, off) = omega_numeric(&p, &grid)?;
    let (approx, s) = omega_approx(&p, p.period())?;
    let omega_gap = (omega[k] - approx).abs();
    println!("Omega(T) = {:.10}, approximation {approx:.10} (S = {s:.4}), off-diagonal {off:.1e}", omega[k]);
    Ok(DecaySummary { unitarity, commutator: w.commutator, omega_gap })
}

fn main() -> hkit::Result<()> {
    println!("{:?}", run_example()?);
    Ok(())
}
