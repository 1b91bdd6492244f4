//! Tripod system with a two-fold degenerate dark subspace.
//!
//! Basis `(e, 1, 2, 3)`, `H = W0 (|e><b| + |b><e|)` with the bright state
//! `b = (sin t cos p, sin t sin p e^{i x}, cos t)` for parameters
//! `(t, p, x) = (theta, phi, chi)`. The spectrum is `-W0, 0, 0, W0`. Moving
//! `b` around a loop rotates the dark pair by a `U(2)` holonomy, which is
//! non-Abelian once `chi` varies.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{LindbladModel, OperatorTrajectory, TimeGrid, TrajectoryKind};
use crate::error::{Error, Result};
use crate::frames;
use crate::holonomy::{self, CaseTag, HolonomyResult};
use crate::matlib::{self, CMatrix};

/// Ellipse `p(s) = center + u cos(2 pi s) + v sin(2 pi s)` in `(theta, phi, chi)`, `s` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamLoop {
    pub center: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
}

impl ParamLoop {
    pub fn constant(center: [f64; 3]) -> Self {
        Self { center, u: [0.0; 3], v: [0.0; 3] }
    }

    pub fn point(&self, s: f64) -> [f64; 3] {
        let (sn, cs) = (TAU * s).sin_cos();
        std::array::from_fn(|i| self.center[i] + self.u[i] * cs + self.v[i] * sn)
    }

    /// Largest `|dp/ds|` over the loop (bounded by `2 pi (|u| + |v|)`).
    pub fn max_speed(&self) -> f64 {
        let norm = |a: &[f64; 3]| a.iter().map(|x| x * x).sum::<f64>().sqrt();
        TAU * (norm(&self.u) + norm(&self.v))
    }

    /// The same ellipse run backwards from the same starting point.
    pub fn reversed(&self) -> Self {
        Self { center: self.center, u: self.u, v: self.v.map(|x| -x) }
    }
}

fn bright_state(p: [f64; 3]) -> [Complex64; 3] {
    let [theta, phi, chi] = p;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [Complex64::new(st * cp, 0.0), Complex64::from_polar(st * sp, chi), Complex64::new(ct, 0.0)]
}

pub fn tripod_hamiltonian(omega: f64, p: [f64; 3]) -> CMatrix {
    let b = bright_state(p);
    let mut h = matlib::zeros(4);
    for (j, bj) in b.iter().enumerate() {
        h[(j + 1, 0)] = bj * omega;
        h[(0, j + 1)] = bj.conj() * omega;
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripodOptions {
    /// Coupling `W0`; also the gap to the dark pair.
    pub omega: f64,
    /// Grid points along the loop.
    pub n_steps: usize,
    /// Largest parameter speed as a fraction of the gap.
    pub adiabatic_ratio: f64,
}

impl Default for TripodOptions {
    fn default() -> Self {
        Self { omega: 1.0, n_steps: 4001, adiabatic_ratio: 1e-2 }
    }
}

/// Duration of one traversal so that `|dp/dt| <= adiabatic_ratio * gap`.
/// A constant loop still gets a unit duration.
pub fn loop_period(path: &ParamLoop, opts: &TripodOptions) -> f64 {
    let speed = path.max_speed();
    if speed == 0.0 {
        1.0
    } else {
        speed / (opts.adiabatic_ratio * opts.omega)
    }
}

/// Closed tripod model following `path` with one traversal per [`loop_period`].
pub fn wilczek_zee_demo(path: &ParamLoop, opts: &TripodOptions) -> Result<LindbladModel> {
    if !(opts.omega > 0.0) {
        return Err(Error::param("omega", "gap closes unless the coupling is positive"));
    }
    let period = loop_period(path, opts);
    let (path, omega) = (*path, opts.omega);
    LindbladModel::closed(4, Arc::new(move |t| tripod_hamiltonian(omega, path.point(t / period))))
}

#[derive(Debug, Clone)]
pub struct TripodHolonomy {
    /// The dark-subspace block of `O`.
    pub dark: CMatrix,
    pub full: HolonomyResult,
    pub period: f64,
}

/// Dark-pair holonomy of one traversal. The frame is the continuity-gauge
/// eigenframe of `H(t)`, and `O` is taken in the `t_d` case.
pub fn tripod_holonomy(path: &ParamLoop, opts: &TripodOptions) -> Result<TripodHolonomy> {
    let model = wilczek_zee_demo(path, opts)?;
    let period = loop_period(path, opts);
    let grid = TimeGrid::new(0.0, period, opts.n_steps)?;
    let traj = OperatorTrajectory {
        grid,
        samples: grid.times().map(|t| model.hamiltonian(t)).collect(),
        kind: TrajectoryKind::Invariant,
        renormalized: false,
    };
    let frames = frames::eigenframes(&traj, 1e-8)?;
    if frames.block_sizes() != [1, 2, 1] {
        return Err(Error::Inconsistent(format!("unexpected tripod blocks {:?}", frames.block_sizes())));
    }
    let full = holonomy::geometric_phase(&frames, grid.len() - 1, CaseTag::TD)?;
    let dark = full.o.view((1, 1), (2, 2)).into_owned();
    Ok(TripodHolonomy { dark, full, period })
}

/// Two fixed loops around the same point whose holonomies do not commute.
pub fn demo_loops() -> (ParamLoop, ParamLoop) {
    let center = [1.0, 0.8, 0.0];
    let l1 = ParamLoop { center, u: [0.35, 0.0, 0.0], v: [0.0, 0.35, 0.0] };
    let l2 = ParamLoop { center, u: [0.0, 0.35, 0.0], v: [0.0, 0.0, 0.9] };
    (l1, l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlib::{max_abs, max_abs_diff, unitary_deviation};

    fn opts() -> TripodOptions {
        TripodOptions { n_steps: 2001, ..TripodOptions::default() }
    }

    #[test]
    fn spectrum_is_tripod() {
        let h = tripod_hamiltonian(1.5, [0.7, 1.1, 0.4]);
        let eig = matlib::hermitian_eig(&h, 1e-8).unwrap();
        let expected = [-1.5, 0.0, 0.0, 1.5];
        assert!(eig.eigenvalues.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(eig.block_sizes(), vec![1, 2, 1]);
    }

    #[test]
    fn constant_loop_gives_identity() {
        let hol = tripod_holonomy(&ParamLoop::constant([1.0, 0.5, 0.2]), &opts()).unwrap();
        assert!(max_abs_diff(&hol.dark, &matlib::identity(2)) < 1e-10);
    }

    #[test]
    fn loops_give_noncommuting_unitaries() {
        let (l1, l2) = demo_loops();
        let h1 = tripod_holonomy(&l1, &opts()).unwrap().dark;
        let h2 = tripod_holonomy(&l2, &opts()).unwrap().dark;
        assert!(unitary_deviation(&h1) < 1e-8 && unitary_deviation(&h2) < 1e-8);
        assert!(max_abs(&matlib::commutator(&h1, &h2)) > 1e-3);
    }

    #[test]
    fn reversed_loop_undoes_holonomy() {
        let (l1, _) = demo_loops();
        let fwd = tripod_holonomy(&l1, &opts()).unwrap().dark;
        let back = tripod_holonomy(&l1.reversed(), &opts()).unwrap().dark;
        assert!(max_abs_diff(&(back * fwd), &matlib::identity(2)) < 1e-5);
    }

    #[test]
    fn period_respects_adiabatic_ratio() {
        let (l1, _) = demo_loops();
        let o = opts();
        assert!(l1.max_speed() / loop_period(&l1, &o) <= o.adiabatic_ratio * o.omega * (1.0 + 1e-12));
        assert!(wilczek_zee_demo(&l1, &TripodOptions { omega: 0.0, ..o }).is_err());
    }
}
