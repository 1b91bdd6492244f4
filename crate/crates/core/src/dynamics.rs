//! Open-system model, time grids and fixed-step propagation.
//!
//! The master equation is taken in the bracket form
//!
//! ```text
//! d_t rho = -i[H0, rho] + sum_ij g_ij { [G_i, rho G_j^dag] + [G_i rho, G_j^dag] }
//! ```
//!
//! and the dynamical invariant obeys
//!
//! ```text
//! d_t I = -i[H0, I] + sum_ij g_ij { G_j^dag [G_i, I] + [I, G_j^dag] G_i }
//! ```
//!
//! so that `Tr[I(t) rho(t)]` is conserved. Both are integrated with classical
//! RK4 on a uniform grid. The coefficient equations for `rho` expanded in a
//! moving frame live here as well, since they only need the frame and its
//! connection.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{ConnectionSeries, FrameTrajectory};
use crate::matlib::{self, hermitize, is_finite, max_abs, CMatrix, I};

pub type OperatorFn = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;
pub type CouplingFn = Arc<dyn Fn(f64) -> DMatrix<f64> + Send + Sync>;

/// `H0(t)`, jump operators `G_i` and the coupling matrix `g_ij(t)`.
#[derive(Clone)]
pub struct LindbladModel {
    dim: usize,
    hamiltonian: OperatorFn,
    jump_ops: Vec<CMatrix>,
    couplings: CouplingFn,
}

impl fmt::Debug for LindbladModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LindbladModel")
            .field("dim", &self.dim)
            .field("jump_ops", &self.jump_ops.len())
            .finish_non_exhaustive()
    }
}

impl LindbladModel {
    pub fn new(dim: usize, hamiltonian: OperatorFn, jump_ops: Vec<CMatrix>, couplings: CouplingFn) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be at least 1"));
        }
        for op in &jump_ops {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: op.nrows().max(op.ncols()) });
            }
        }
        let h0 = hamiltonian(0.0);
        if h0.nrows() != dim || h0.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: h0.nrows() });
        }
        let g0 = couplings(0.0);
        if g0.nrows() != jump_ops.len() || g0.ncols() != jump_ops.len() {
            return Err(Error::DimensionMismatch { expected: jump_ops.len(), found: g0.nrows() });
        }
        Ok(Self { dim, hamiltonian, jump_ops, couplings })
    }

    /// A model without jump operators.
    pub fn closed(dim: usize, hamiltonian: OperatorFn) -> Result<Self> {
        Self::new(dim, hamiltonian, Vec::new(), Arc::new(|_| DMatrix::zeros(0, 0)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self, t: f64) -> CMatrix {
        (self.hamiltonian)(t)
    }

    pub fn jump_ops(&self) -> &[CMatrix] {
        &self.jump_ops
    }

    pub fn couplings(&self, t: f64) -> DMatrix<f64> {
        (self.couplings)(t)
    }

    /// True when any coupling is nonzero at one of the grid times.
    pub fn is_dissipative_on(&self, grid: &TimeGrid) -> bool {
        !self.jump_ops.is_empty() && grid.times().any(|t| self.couplings(t).iter().any(|&g| g != 0.0))
    }

    fn check_dim(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.nrows().max(m.ncols()) });
        }
        Ok(())
    }
}

/// Uniform grid on `[t0, t1]` with `n_steps` samples, both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, n_steps: usize) -> Result<Self> {
        let grid = Self { t0, t1, n_steps };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t1.is_finite()) {
            return Err(Error::param("grid", "endpoints must be finite"));
        }
        if !(self.t1 > self.t0) {
            return Err(Error::param("grid.t1", "must exceed t0"));
        }
        if self.n_steps < 2 {
            return Err(Error::param("grid.n_steps", "must be at least 2"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_steps
    }

    pub fn is_empty(&self) -> bool {
        self.n_steps == 0
    }

    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / (self.n_steps - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.n_steps {
            self.t1
        } else {
            self.t0 + k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_steps).map(move |k| self.time(k))
    }

    /// The grid on `[t0, t_k]` that shares the first `k + 1` points.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k >= self.n_steps {
            return Err(Error::IndexOutOfRange { index: k, len: self.n_steps });
        }
        Self::new(self.t0, self.time(k), k + 1)
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k < self.n_steps {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: k, len: self.n_steps })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Density,
    Invariant,
    Coefficient,
}

#[derive(Debug, Clone)]
pub struct OperatorTrajectory {
    pub grid: TimeGrid,
    pub samples: Vec<CMatrix>,
    pub kind: TrajectoryKind,
    /// Set when a density trajectory had to be trace-renormalized.
    pub renormalized: bool,
}

impl OperatorTrajectory {
    pub fn last(&self) -> &CMatrix {
        self.samples.last().expect("trajectory has at least two samples")
    }
}

fn dissipator(model: &LindbladModel, x: &CMatrix, t: f64, invariant: bool) -> CMatrix {
    let n = model.dim;
    let mut out = CMatrix::zeros(n, n);
    if model.jump_ops.is_empty() {
        return out;
    }
    let gamma = model.couplings(t);
    for (i, gi) in model.jump_ops.iter().enumerate() {
        for (j, gj) in model.jump_ops.iter().enumerate() {
            let g = gamma[(i, j)];
            if g == 0.0 {
                continue;
            }
            let gj_dag = gj.adjoint();
            let term = if invariant {
                // G_j^dag [G_i, X] + [X, G_j^dag] G_i
                &gj_dag * matlib::commutator(gi, x) + matlib::commutator(x, &gj_dag) * gi
            } else {
                // [G_i, X G_j^dag] + [G_i X, G_j^dag]
                matlib::commutator(gi, &(x * &gj_dag)) + matlib::commutator(&(gi * x), &gj_dag)
            };
            out += term.scale(g);
        }
    }
    out
}

fn lindblad_rhs_unchecked(model: &LindbladModel, rho: &CMatrix, t: f64) -> CMatrix {
    let h = model.hamiltonian(t);
    matlib::commutator(&h, rho) * (-I) + dissipator(model, rho, t, false)
}

fn invariant_rhs_unchecked(model: &LindbladModel, inv: &CMatrix, t: f64) -> CMatrix {
    let h = model.hamiltonian(t);
    matlib::commutator(&h, inv) * (-I) + dissipator(model, inv, t, true)
}

/// Right-hand side of the master equation at time `t`.
pub fn lindblad_rhs(model: &LindbladModel, rho: &CMatrix, t: f64) -> Result<CMatrix> {
    model.check_dim(rho)?;
    Ok(lindblad_rhs_unchecked(model, rho, t))
}

/// Right-hand side of the invariant equation at time `t`.
pub fn invariant_rhs(model: &LindbladModel, inv: &CMatrix, t: f64) -> Result<CMatrix> {
    model.check_dim(inv)?;
    Ok(invariant_rhs_unchecked(model, inv, t))
}

fn rk4_step(f: &dyn Fn(&CMatrix, f64) -> CMatrix, x: &CMatrix, t: f64, dt: f64) -> CMatrix {
    let k1 = f(x, t);
    let k2 = f(&(x + k1.scale(dt / 2.0)), t + dt / 2.0);
    let k3 = f(&(x + k2.scale(dt / 2.0)), t + dt / 2.0);
    let k4 = f(&(x + k3.scale(dt)), t + dt);
    x + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0)
}

fn check_density(rho: &CMatrix) -> Result<()> {
    let deviation = matlib::hermitian_deviation(rho);
    if deviation > 1e-8 {
        return Err(Error::NotHermitian { deviation, tolerance: 1e-8 });
    }
    let tr = matlib::trace(rho);
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
        return Err(Error::param("rho0", format!("trace {tr} differs from 1")));
    }
    let eig = matlib::hermitian_eig(&hermitize(rho), 1e-12)?;
    if eig.eigenvalues[0] < -1e-8 {
        return Err(Error::param("rho0", format!("negative eigenvalue {}", eig.eigenvalues[0])));
    }
    Ok(())
}

/// Integrates the master equation (`Density`) or the invariant equation
/// (`Invariant`) with fixed-step RK4 on `grid`.
///
/// Each sample is re-Hermitized after the step. A density trajectory is
/// trace-renormalized only when its trace drifts by more than `rtol`, and the
/// trajectory is then flagged `renormalized`.
pub fn propagate(
    model: &LindbladModel,
    x0: &CMatrix,
    grid: &TimeGrid,
    kind: TrajectoryKind,
    rtol: f64,
) -> Result<OperatorTrajectory> {
    grid.validate()?;
    model.check_dim(x0)?;
    let invariant = match kind {
        TrajectoryKind::Density => {
            check_density(x0)?;
            false
        }
        TrajectoryKind::Invariant => {
            let deviation = matlib::hermitian_deviation(x0);
            if deviation > 1e-9 {
                return Err(Error::NotHermitian { deviation, tolerance: 1e-9 });
            }
            true
        }
        TrajectoryKind::Coefficient => {
            return Err(Error::param("kind", "coefficient trajectories are produced by propagate_coefficients"))
        }
    };
    let rhs = |x: &CMatrix, t: f64| {
        if invariant {
            invariant_rhs_unchecked(model, x, t)
        } else {
            lindblad_rhs_unchecked(model, x, t)
        }
    };

    let dt = grid.dt();
    let mut samples = Vec::with_capacity(grid.len());
    samples.push(hermitize(x0));
    let mut renormalized = false;
    for k in 0..grid.len() - 1 {
        let t = grid.time(k);
        let mut next = hermitize(&rk4_step(&rhs, &samples[k], t, dt));
        if !is_finite(&next) {
            return Err(Error::IntegrationFailure { last_valid_time: t });
        }
        if !invariant {
            let tr = matlib::trace(&next).re;
            if (tr - 1.0).abs() > rtol {
                next /= Complex64::new(tr, 0.0);
                renormalized = true;
            }
        }
        samples.push(next);
    }
    Ok(OperatorTrajectory { grid: *grid, samples, kind, renormalized })
}

/// `Tr[I rho]`. An imaginary part above `1e-8` (relative to `max(1, |Tr|)`)
/// signals that `I` or `rho` is not Hermitian and is reported as an error.
pub fn invariant_expectation(inv: &CMatrix, rho: &CMatrix) -> Result<f64> {
    if inv.shape() != rho.shape() {
        return Err(Error::DimensionMismatch { expected: inv.nrows(), found: rho.nrows() });
    }
    let value = matlib::trace(&(inv * rho));
    if value.im.abs() > 1e-8 * value.norm().max(1.0) {
        return Err(Error::Inconsistent(format!("Tr[I rho] has imaginary part {:.3e}", value.im)));
    }
    Ok(value.re)
}

/// Frame matrix elements entering the coefficient equations at one grid point.
///
/// With `F` the frame (columns `|l,a;t>`): `h = -F^dag H0 F`, `a` the
/// connection, `d = sum_ij g_ij F^dag G_j^dag G_i F` and `lambda[i] = F^dag G_i F`.
/// When every coupling vanishes `d` is zero and `lambda` is empty.
#[derive(Debug, Clone)]
pub struct BasisMatrices {
    pub h: CMatrix,
    pub a: CMatrix,
    pub d: CMatrix,
    pub lambda: Vec<CMatrix>,
    pub couplings: DMatrix<f64>,
}

impl BasisMatrices {
    /// `H + A + iD`, the generator acting from the left in the coefficient equation.
    pub fn generator(&self) -> CMatrix {
        &self.h + &self.a + self.d.map(|z| z * I)
    }

    fn lincomb(parts: &[(f64, &BasisMatrices)]) -> BasisMatrices {
        let first = parts[0].1;
        let mut out = BasisMatrices {
            h: first.h.scale(0.0),
            a: first.a.scale(0.0),
            d: first.d.scale(0.0),
            lambda: first.lambda.iter().map(|l| l.scale(0.0)).collect(),
            couplings: first.couplings.scale(0.0),
        };
        for &(w, b) in parts {
            out.h += b.h.scale(w);
            out.a += b.a.scale(w);
            out.d += b.d.scale(w);
            for (acc, l) in out.lambda.iter_mut().zip(&b.lambda) {
                *acc += l.scale(w);
            }
            out.couplings += b.couplings.scale(w);
        }
        out
    }
}

/// Evaluates [`BasisMatrices`] at grid index `k` using the frame and its connection.
pub fn basis_matrices(
    model: &LindbladModel,
    frames: &FrameTrajectory,
    connection: &ConnectionSeries,
    k: usize,
) -> Result<BasisMatrices> {
    frames.grid.check_index(k)?;
    if connection.grid != frames.grid {
        return Err(Error::GridMismatch);
    }
    let f = &frames.vectors[k];
    if f.nrows() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: f.nrows() });
    }
    let t = frames.grid.time(k);
    let f_dag = f.adjoint();
    let h = -(&f_dag * model.hamiltonian(t) * f);
    let a = connection.samples[k].clone();
    let n = f.ncols();
    let couplings = if model.jump_ops.is_empty() { DMatrix::zeros(0, 0) } else { model.couplings(t) };
    let active = couplings.iter().any(|&g| g != 0.0);
    let mut d = CMatrix::zeros(n, n);
    let mut lambda = Vec::new();
    if active {
        for (i, gi) in model.jump_ops.iter().enumerate() {
            for (j, gj) in model.jump_ops.iter().enumerate() {
                let g = couplings[(i, j)];
                if g != 0.0 {
                    d += (&f_dag * gj.adjoint() * gi * f).scale(g);
                }
            }
        }
        lambda = model.jump_ops.iter().map(|gi| &f_dag * gi * f).collect();
    }
    Ok(BasisMatrices { h, a, d, lambda, couplings: if active { couplings } else { DMatrix::zeros(0, 0) } })
}

/// Time derivative of the coefficient matrix:
/// `i G c - i c G^dag + 2 sum_ij g_ij Lambda_i c Lambda_j^dag` with `G = H + A + iD`.
pub fn coefficient_rhs(c: &CMatrix, b: &BasisMatrices) -> CMatrix {
    let g = b.generator();
    let mut out = (&g * c - c * g.adjoint()) * I;
    for (i, li) in b.lambda.iter().enumerate() {
        for (j, lj) in b.lambda.iter().enumerate() {
            let gij = b.couplings[(i, j)];
            if gij != 0.0 {
                out += (li * c * lj.adjoint()).scale(2.0 * gij);
            }
        }
    }
    out
}

/// Basis matrices at every grid point.
pub fn basis_series(
    model: &LindbladModel,
    frames: &FrameTrajectory,
    connection: &ConnectionSeries,
) -> Result<Vec<BasisMatrices>> {
    (0..frames.grid.len()).map(|k| basis_matrices(model, frames, connection, k)).collect()
}

/// Cubic interpolation of the basis matrices at `t_k + dt/2`.
fn midpoint(series: &[BasisMatrices], k: usize) -> BasisMatrices {
    let n = series.len();
    if n < 4 {
        return BasisMatrices::lincomb(&[(0.5, &series[k]), (0.5, &series[k + 1])]);
    }
    if k == 0 {
        BasisMatrices::lincomb(&[
            (5.0 / 16.0, &series[0]),
            (15.0 / 16.0, &series[1]),
            (-5.0 / 16.0, &series[2]),
            (1.0 / 16.0, &series[3]),
        ])
    } else if k + 2 >= n {
        BasisMatrices::lincomb(&[
            (1.0 / 16.0, &series[n - 4]),
            (-5.0 / 16.0, &series[n - 3]),
            (15.0 / 16.0, &series[n - 2]),
            (5.0 / 16.0, &series[n - 1]),
        ])
    } else {
        BasisMatrices::lincomb(&[
            (-1.0 / 16.0, &series[k - 1]),
            (9.0 / 16.0, &series[k]),
            (9.0 / 16.0, &series[k + 1]),
            (-1.0 / 16.0, &series[k + 2]),
        ])
    }
}

/// RK4 integration of the coefficient equations in the given frame.
///
/// `c0` holds `<l,a;0| rho(0) |l',a';0>`. The frame only exists on the grid,
/// so the RK4 half-step matrices are cubic interpolants of the neighbouring
/// grid values.
pub fn propagate_coefficients(
    model: &LindbladModel,
    frames: &FrameTrajectory,
    connection: &ConnectionSeries,
    c0: &CMatrix,
    grid: &TimeGrid,
) -> Result<OperatorTrajectory> {
    if *grid != frames.grid || connection.grid != frames.grid {
        return Err(Error::GridMismatch);
    }
    let n = frames.dim();
    if c0.nrows() != n || c0.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c0.nrows() });
    }
    let series = basis_series(model, frames, connection)?;
    let dt = grid.dt();
    let mut samples = Vec::with_capacity(grid.len());
    samples.push(c0.clone());
    for k in 0..grid.len() - 1 {
        let mid = midpoint(&series, k);
        let c = &samples[k];
        let k1 = coefficient_rhs(c, &series[k]);
        let k2 = coefficient_rhs(&(c + k1.scale(dt / 2.0)), &mid);
        let k3 = coefficient_rhs(&(c + k2.scale(dt / 2.0)), &mid);
        let k4 = coefficient_rhs(&(c + k3.scale(dt)), &series[k + 1]);
        let next = c + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0);
        if !is_finite(&next) {
            return Err(Error::IntegrationFailure { last_valid_time: grid.time(k) });
        }
        samples.push(next);
    }
    Ok(OperatorTrajectory { grid: *grid, samples, kind: TrajectoryKind::Coefficient, renormalized: false })
}

/// `c0 = F(0)^dag rho F(0)`.
pub fn initial_coefficients(frames: &FrameTrajectory, rho0: &CMatrix) -> CMatrix {
    let f = &frames.vectors[0];
    f.adjoint() * rho0 * f
}

/// `rho(t_k) = F(t_k) c(t_k) F(t_k)^dag`.
pub fn reconstruct_density(frames: &FrameTrajectory, coefficients: &OperatorTrajectory) -> Result<Vec<CMatrix>> {
    if coefficients.grid != frames.grid {
        return Err(Error::GridMismatch);
    }
    Ok(frames.vectors.iter().zip(&coefficients.samples).map(|(f, c)| f * c * f.adjoint()).collect())
}

/// Largest `max |X_k|` over a trajectory.
pub fn trajectory_scale(samples: &[CMatrix]) -> f64 {
    samples.iter().map(max_abs).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlib::{c, diag_real, max_abs_diff, pauli_z, unitary_exp, zeros};

    fn sigma_minus() -> CMatrix {
        // (e, g) ordering: sigma_- = |g><e|
        let mut m = zeros(2);
        m[(1, 0)] = c(1.0, 0.0);
        m
    }

    fn decay_model(omega0: f64, gamma: f64) -> LindbladModel {
        let h = pauli_z().scale(omega0 / 2.0);
        LindbladModel::new(
            2,
            Arc::new(move |_| h.clone()),
            vec![sigma_minus()],
            Arc::new(move |_| DMatrix::from_element(1, 1, gamma / 2.0)),
        )
        .unwrap()
    }

    #[test]
    fn grid_spacing_and_endpoints() {
        let g = TimeGrid::new(0.0, 1.0, 11).unwrap();
        assert!((g.dt() - 0.1).abs() < 1e-15);
        assert_eq!(g.time(10), 1.0);
        assert_eq!(g.times().count(), 11);
        assert!(TimeGrid::new(1.0, 0.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert_eq!(g.prefix(4).unwrap().t1, g.time(4));
    }

    #[test]
    fn lindblad_rhs_trivial_cases() {
        let model = decay_model(1.3, 0.0);
        let rho = diag_real(&[0.3, 0.7]);
        assert_eq!(max_abs(&lindblad_rhs(&model, &rho, 0.0).unwrap()), 0.0);
        let model = decay_model(1.3, 0.2);
        assert_eq!(max_abs(&lindblad_rhs(&model, &zeros(2), 0.5).unwrap()), 0.0);
        assert!(matches!(lindblad_rhs(&model, &zeros(3), 0.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn excited_state_decays_at_rate_gamma() {
        // rho = |e><e|, g11 = gamma/2, G1 = sigma_-: d rho/dt = gamma(|g><g| - |e><e|)
        let gamma = 0.37;
        let model = decay_model(1.0, gamma);
        let rho = diag_real(&[1.0, 0.0]);
        let d = lindblad_rhs(&model, &rho, 0.0).unwrap();
        assert!(max_abs_diff(&d, &diag_real(&[-gamma, gamma])) < 1e-15);
    }

    #[test]
    fn invariant_rhs_trivial_cases() {
        let model = decay_model(0.8, 0.0);
        let h = model.hamiltonian(0.0);
        assert_eq!(max_abs(&invariant_rhs(&model, &h, 0.0).unwrap()), 0.0);
        let model = decay_model(0.8, 0.3);
        assert!(max_abs(&invariant_rhs(&model, &crate::matlib::identity(2), 0.0).unwrap()) < 1e-16);
    }

    #[test]
    fn rhs_outputs_are_hermitian_and_traceless() {
        let model = decay_model(1.1, 0.25);
        let x = CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.2, -0.3), c(0.2, 0.3), c(0.4, 0.0)]);
        let dr = lindblad_rhs(&model, &x, 0.0).unwrap();
        assert!(matlib::hermitian_deviation(&dr) < 1e-15);
        assert!(matlib::trace(&dr).norm() < 1e-15);
        let di = invariant_rhs(&model, &x, 0.0).unwrap();
        assert!(matlib::hermitian_deviation(&di) < 1e-12);
    }

    #[test]
    fn closed_constant_hamiltonian_matches_conjugation() {
        let h = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(-0.3, 0.0)]);
        let hc = h.clone();
        let model = LindbladModel::closed(2, Arc::new(move |_| hc.clone())).unwrap();
        let rho0 = CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let norm = 0.6; // larger than the spectral radius of h
        let grid = TimeGrid::new(0.0, 3.0, (3.0 * norm / 0.01) as usize + 2).unwrap();
        let traj = propagate(&model, &rho0, &grid, TrajectoryKind::Density, 1e-10).unwrap();
        for (k, t) in grid.times().enumerate() {
            let u = unitary_exp(&h, -t).unwrap();
            let exact = &u * &rho0 * u.adjoint();
            assert!(max_abs_diff(&traj.samples[k], &exact) < 1e-8);
        }
        assert!(!traj.renormalized);
    }

    #[test]
    fn zero_model_keeps_state_constant() {
        let model = LindbladModel::closed(3, Arc::new(|_| zeros(3))).unwrap();
        let x0 = diag_real(&[1.0, -2.0, 0.5]);
        let grid = TimeGrid::new(0.0, 1.0, 50).unwrap();
        let traj = propagate(&model, &x0, &grid, TrajectoryKind::Invariant, 1e-10).unwrap();
        assert!(traj.samples.iter().all(|s| max_abs_diff(s, &x0) == 0.0));
    }

    #[test]
    fn propagate_rejects_invalid_density() {
        let model = decay_model(1.0, 0.1);
        let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
        let bad = diag_real(&[0.7, 0.7]);
        assert!(propagate(&model, &bad, &grid, TrajectoryKind::Density, 1e-10).is_err());
        let neg = diag_real(&[1.2, -0.2]);
        assert!(propagate(&model, &neg, &grid, TrajectoryKind::Density, 1e-10).is_err());
    }

    #[test]
    fn propagate_reports_blow_up() {
        let model = LindbladModel::closed(2, Arc::new(|_| pauli_z().scale(1e200))).unwrap();
        let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
        let x0 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1e200, 0.0), c(1e200, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            propagate(&model, &x0, &grid, TrajectoryKind::Invariant, 1e-10),
            Err(Error::IntegrationFailure { .. })
        ));
    }

    #[test]
    fn expectation_examples() {
        let rho = diag_real(&[0.25, 0.75]);
        assert!((invariant_expectation(&crate::matlib::identity(2), &rho).unwrap() - 1.0).abs() < 1e-15);
        let excited = diag_real(&[1.0, 0.0]);
        assert_eq!(invariant_expectation(&pauli_z(), &excited).unwrap(), 1.0);
        let mut bad = zeros(2);
        bad[(0, 1)] = c(0.0, 1.0);
        let rho = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        assert!(invariant_expectation(&bad, &rho).is_err());
    }
}
