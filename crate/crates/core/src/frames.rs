//! Gauge-fixed eigenframes of an invariant trajectory, the connection
//! `A = i F^dag dF/dt` and the overlap `W(t, 0) = F(0)^dag F(t)`.
//!
//! A frame is an `n x n` matrix whose columns are the basis states, grouped
//! into degenerate blocks that stay fixed along the trajectory.
//!
//! In the continuity gauge each block is rotated so that its overlap with the
//! previous step is Hermitian positive-definite. The within-block part of the
//! connection is then zero up to discretization error. That is a property of
//! the gauge, not of the dynamics.

use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{OperatorTrajectory, TimeGrid, TrajectoryKind};
use crate::error::{Error, Result};
use crate::matlib::{self, hermitize, polar_unitary, unitary_exp, CMatrix, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeTag {
    Analytic,
    Continuity,
}

#[derive(Debug, Clone)]
pub struct FrameTrajectory {
    pub grid: TimeGrid,
    /// Eigenvalues per time, in frame column order.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Degenerate blocks as contiguous column ranges, constant in time.
    pub blocks: Vec<Range<usize>>,
    pub vectors: Vec<CMatrix>,
    /// Exact time derivatives of `vectors`, when the source provides them.
    pub derivatives: Option<Vec<CMatrix>>,
    pub gauge_tag: GaugeTag,
}

impl FrameTrajectory {
    /// Frames from a closed form. Checks per-time orthonormality to `1e-9`.
    pub fn from_analytic(
        grid: TimeGrid,
        eigenvalues: Vec<Vec<f64>>,
        blocks: Vec<Range<usize>>,
        vectors: Vec<CMatrix>,
        derivatives: Option<Vec<CMatrix>>,
    ) -> Result<Self> {
        grid.validate()?;
        if vectors.len() != grid.len() || eigenvalues.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(d) = &derivatives {
            if d.len() != grid.len() {
                return Err(Error::GridMismatch);
            }
        }
        let n = vectors[0].ncols();
        check_blocks(&blocks, n)?;
        for f in &vectors {
            let deviation = matlib::unitary_deviation(f);
            if f.nrows() != n || f.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: f.ncols() });
            }
            if deviation > 1e-9 {
                return Err(Error::NotUnitary { deviation, tolerance: 1e-9 });
            }
        }
        Ok(Self { grid, eigenvalues, blocks, vectors, derivatives, gauge_tag: GaugeTag::Analytic })
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].ncols()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Index of the block that contains column `col`.
    pub fn block_of(&self, col: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&col))
    }

    /// The same frame on the first `k + 1` grid points.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        let grid = self.grid.prefix(k)?;
        Ok(Self {
            grid,
            eigenvalues: self.eigenvalues[..=k].to_vec(),
            blocks: self.blocks.clone(),
            vectors: self.vectors[..=k].to_vec(),
            derivatives: self.derivatives.as_ref().map(|d| d[..=k].to_vec()),
            gauge_tag: self.gauge_tag,
        })
    }

    /// Drops the exact derivatives so downstream code falls back to finite differences.
    pub fn without_derivatives(mut self) -> Self {
        self.derivatives = None;
        self
    }
}

fn check_blocks(blocks: &[Range<usize>], n: usize) -> Result<()> {
    let mut next = 0;
    for b in blocks {
        if b.start != next || b.end <= b.start {
            return Err(Error::param("blocks", "must be contiguous, non-empty and ordered"));
        }
        next = b.end;
    }
    if next != n {
        return Err(Error::param("blocks", format!("cover {next} columns, frame has {n}")));
    }
    Ok(())
}

fn columns(m: &CMatrix, r: &Range<usize>) -> CMatrix {
    m.columns(r.start, r.len()).into_owned()
}

/// Numeric eigenframes of an invariant trajectory in the continuity gauge.
///
/// Blocks keep the ascending order of the first sample. At every later step
/// the new eigenspaces are matched to the previous ones by largest subspace
/// overlap. Each matched block is then right-multiplied by the adjoint of the
/// polar-unitary part of its overlap with the previous step. For a 1x1 block
/// this makes `<v_k|v_{k+1}>` real and positive.
pub fn eigenframes(traj: &OperatorTrajectory, deg_tol: f64) -> Result<FrameTrajectory> {
    if traj.kind == TrajectoryKind::Coefficient {
        return Err(Error::param("kind", "frames need a density or invariant trajectory"));
    }
    let grid = traj.grid;
    let first = matlib::hermitian_eig(&traj.samples[0], deg_tol)?;
    let blocks = first.blocks.clone();
    let mut vectors = Vec::with_capacity(grid.len());
    let mut eigenvalues = Vec::with_capacity(grid.len());
    vectors.push(first.vectors);
    eigenvalues.push(first.eigenvalues);

    for k in 1..grid.len() {
        let eig = matlib::hermitian_eig(&traj.samples[k], deg_tol)?;
        let crossing = Error::DegeneracyCrossing { t_prev: grid.time(k - 1), t_next: grid.time(k) };
        if eig.block_sizes().len() != blocks.len() {
            return Err(crossing);
        }
        let prev = &vectors[k - 1];
        let n = prev.ncols();
        let mut frame = CMatrix::zeros(n, n);
        let mut values = vec![0.0; n];
        let mut used = vec![false; eig.blocks.len()];
        for b in &blocks {
            let fp = columns(prev, b);
            // Subspace overlap weight, normalized to 1 for identical subspaces.
            let mut best: Option<(usize, f64)> = None;
            for (j, nb) in eig.blocks.iter().enumerate() {
                if used[j] || nb.len() != b.len() {
                    continue;
                }
                let w = (fp.adjoint() * columns(&eig.vectors, nb)).norm_squared() / b.len() as f64;
                if best.map_or(true, |(_, bw)| w > bw) {
                    best = Some((j, w));
                }
            }
            let (j, weight) = best.ok_or_else(|| crossing.clone())?;
            if weight < 0.5 {
                return Err(crossing);
            }
            used[j] = true;
            let nb = &eig.blocks[j];
            let fnew = columns(&eig.vectors, nb);
            let polar = polar_unitary(&(fp.adjoint() * &fnew), 1e-12)?;
            let aligned = fnew * polar.u.adjoint();
            frame.columns_mut(b.start, b.len()).copy_from(&aligned);
            for (i, col) in b.clone().enumerate() {
                values[col] = eig.eigenvalues[nb.start + i];
            }
        }
        vectors.push(frame);
        eigenvalues.push(values);
    }
    Ok(FrameTrajectory { grid, eigenvalues, blocks, vectors, derivatives: None, gauge_tag: GaugeTag::Continuity })
}

#[derive(Debug, Clone)]
pub struct ConnectionSeries {
    pub grid: TimeGrid,
    pub samples: Vec<CMatrix>,
    /// Largest `max |A - A^dag|` before symmetrization.
    pub hermitian_deviation: f64,
    /// Set when that deviation exceeded `1e-5`.
    pub flagged: bool,
}

impl ConnectionSeries {
    /// The connection on the first `k + 1` grid points.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        Ok(Self {
            grid: self.grid.prefix(k)?,
            samples: self.samples[..=k].to_vec(),
            hermitian_deviation: self.hermitian_deviation,
            flagged: self.flagged,
        })
    }

    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(f).collect(),
            hermitian_deviation: self.hermitian_deviation,
            flagged: self.flagged,
        }
    }
}

/// Second-order finite-difference derivative of a sampled matrix path:
/// central inside, one-sided at both ends.
pub fn finite_difference(samples: &[CMatrix], dt: f64) -> Result<Vec<CMatrix>> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::GridTooShort { len: n, min: 3 });
    }
    let mut out = Vec::with_capacity(n);
    out.push((&samples[1] * c(4.0) - &samples[0] * c(3.0) - &samples[2]) / c(2.0 * dt));
    for k in 1..n - 1 {
        out.push((&samples[k + 1] - &samples[k - 1]) / c(2.0 * dt));
    }
    out.push((&samples[n - 1] * c(3.0) - &samples[n - 2] * c(4.0) + &samples[n - 3]) / c(2.0 * dt));
    Ok(out)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn assemble(grid: TimeGrid, frames: &[CMatrix], derivs: &[CMatrix]) -> ConnectionSeries {
    let mut worst = 0.0_f64;
    let samples = frames
        .iter()
        .zip(derivs)
        .map(|(f, d)| {
            let a = f.adjoint() * d * I;
            worst = worst.max(matlib::hermitian_deviation(&a));
            hermitize(&a)
        })
        .collect();
    ConnectionSeries { grid, samples, hermitian_deviation: worst, flagged: worst > 1e-5 }
}

/// The connection `A(t) = i F^dag dF/dt`, Hermitized.
///
/// Uses the frame's exact derivatives when present, finite differences otherwise.
pub fn connection(frames: &FrameTrajectory) -> Result<ConnectionSeries> {
    if frames.grid.len() < 3 {
        return Err(Error::GridTooShort { len: frames.grid.len(), min: 3 });
    }
    match &frames.derivatives {
        Some(d) => Ok(assemble(frames.grid, &frames.vectors, d)),
        None => connection_fd(frames),
    }
}

/// The connection from finite differences, ignoring any exact derivatives.
pub fn connection_fd(frames: &FrameTrajectory) -> Result<ConnectionSeries> {
    let d = finite_difference(&frames.vectors, frames.grid.dt())?;
    Ok(assemble(frames.grid, &frames.vectors, &d))
}

/// `W(t_k, 0) = F(0)^dag F(t_k)`.
pub fn overlap(frames: &FrameTrajectory, k: usize) -> Result<CMatrix> {
    frames.grid.check_index(k)?;
    Ok(frames.vectors[0].adjoint() * &frames.vectors[k])
}

/// A time-dependent unitary acting on frame indices.
pub trait GaugeField {
    fn value(&self, t: f64) -> CMatrix;

    /// Exact derivative, if known. Without it transformed frames lose their
    /// exact derivatives and the connection is finite-differenced.
    fn derivative(&self, _t: f64) -> Option<CMatrix> {
        None
    }
}

impl<F: Fn(f64) -> CMatrix> GaugeField for F {
    fn value(&self, t: f64) -> CMatrix {
        self(t)
    }
}

/// `F'(t) = F(t) M(t)`, i.e. `|l,a;t>' = sum M_{nu l}^{b a}(t) |nu,b;t>`.
///
/// `M` may mix blocks. The eigenvalue and block labels are then inherited
/// from the original frame and only describe it, not the new columns.
pub fn gauge_transform(frames: &FrameTrajectory, gauge: &dyn GaugeField) -> Result<FrameTrajectory> {
    let n = frames.dim();
    let mut vectors = Vec::with_capacity(frames.grid.len());
    let mut derivatives = frames.derivatives.as_ref().map(|_| Vec::with_capacity(frames.grid.len()));
    for (k, t) in frames.grid.times().enumerate() {
        let m = gauge.value(t);
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
        }
        let deviation = matlib::unitary_deviation(&m);
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation, tolerance: 1e-10 });
        }
        let f = &frames.vectors[k];
        if let (Some(out), Some(fd)) = (derivatives.as_mut(), frames.derivatives.as_ref()) {
            match gauge.derivative(t) {
                Some(md) => out.push(&fd[k] * &m + f * md),
                None => derivatives = None,
            }
        }
        vectors.push(f * m);
    }
    Ok(FrameTrajectory {
        grid: frames.grid,
        eigenvalues: frames.eigenvalues.clone(),
        blocks: frames.blocks.clone(),
        vectors,
        derivatives,
        gauge_tag: frames.gauge_tag,
    })
}

/// Which index pairs a random gauge may couple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeMixing {
    /// Any pair.
    Full,
    /// Pairs inside one degenerate block.
    BlockDiagonal,
    /// Phases only.
    Diagonal,
}

/// `M(t) = prod_j exp(i f_j(t) K_j)` with fixed random Hermitian `K_j` and
/// `f_j(t) = a_j sin(w_j t + p_j)`. Seeded, so reproducible.
#[derive(Debug, Clone)]
pub struct SmoothRandomGauge {
    generators: Vec<CMatrix>,
    amplitude: Vec<f64>,
    rate: Vec<f64>,
    offset: Vec<f64>,
}

impl SmoothRandomGauge {
    /// `rate_scale` bounds the angular rates `w_j`; amplitudes are up to `1`.
    pub fn new(seed: u64, blocks: &[Range<usize>], mixing: GaugeMixing, terms: usize, rate_scale: f64) -> Self {
        let n = blocks.last().map_or(0, |b| b.end);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let same_block = |i: usize, j: usize| blocks.iter().any(|b| b.contains(&i) && b.contains(&j));
        let mut generators = Vec::with_capacity(terms);
        let (mut amplitude, mut rate, mut offset) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..terms {
            let mut k = CMatrix::zeros(n, n);
            for i in 0..n {
                k[(i, i)] = c(rng.random_range(-1.0..1.0));
                for j in i + 1..n {
                    let allowed = match mixing {
                        GaugeMixing::Full => true,
                        GaugeMixing::BlockDiagonal => same_block(i, j),
                        GaugeMixing::Diagonal => false,
                    };
                    if allowed {
                        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        k[(i, j)] = z;
                        k[(j, i)] = z.conj();
                    }
                }
            }
            generators.push(k);
            amplitude.push(rng.random_range(0.3..1.0));
            rate.push(rate_scale * rng.random_range(0.2..1.0));
            offset.push(rng.random_range(0.0..std::f64::consts::TAU));
        }
        Self { generators, amplitude, rate, offset }
    }

    fn factors(&self, t: f64) -> Vec<CMatrix> {
        self.generators
            .iter()
            .enumerate()
            .map(|(j, k)| {
                let f = self.amplitude[j] * (self.rate[j] * t + self.offset[j]).sin();
                unitary_exp(k, f).expect("generators are Hermitian")
            })
            .collect()
    }
}

impl GaugeField for SmoothRandomGauge {
    fn value(&self, t: f64) -> CMatrix {
        let n = self.generators.first().map_or(0, |g| g.nrows());
        self.factors(t).iter().fold(matlib::identity(n), |acc, m| acc * m)
    }

    fn derivative(&self, t: f64) -> Option<CMatrix> {
        let n = self.generators.first().map_or(0, |g| g.nrows());
        let factors = self.factors(t);
        let mut total = CMatrix::zeros(n, n);
        for j in 0..factors.len() {
            let fdot = self.amplitude[j] * self.rate[j] * (self.rate[j] * t + self.offset[j]).cos();
            let mut term = matlib::identity(n);
            for (i, m) in factors.iter().enumerate() {
                if i == j {
                    term = term * (&self.generators[j] * I * c(fdot)) * m;
                } else {
                    term *= m;
                }
            }
            total += term;
        }
        Some(total)
    }
}

/// Frames `R(t) = exp(-i w t sigma_y)` of the rotating synthetic invariant, with exact derivatives.
pub fn rotation_frames(omega: f64, grid: &TimeGrid) -> Result<FrameTrajectory> {
    let frame = |t: f64| {
        let (s, co) = (omega * t).sin_cos();
        CMatrix::from_row_slice(2, 2, &[c(co), c(-s), c(s), c(co)])
    };
    let deriv = |t: f64| {
        let (s, co) = (omega * t).sin_cos();
        CMatrix::from_row_slice(2, 2, &[c(-s), c(-co), c(co), c(-s)]) * c(omega)
    };
    FrameTrajectory::from_analytic(
        *grid,
        vec![vec![1.0, 2.0]; grid.len()],
        vec![0..1, 1..2],
        grid.times().map(frame).collect(),
        Some(grid.times().map(deriv).collect()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{propagate, LindbladModel};
    use crate::matlib::{diag_real, max_abs, max_abs_diff, pauli_y, zeros};
    use std::sync::Arc;

    fn rotating_invariant(omega: f64, grid: &TimeGrid) -> OperatorTrajectory {
        let h = pauli_y().scale(omega);
        let model = LindbladModel::closed(2, Arc::new(move |_| h.clone())).unwrap();
        propagate(&model, &diag_real(&[1.0, 2.0]), grid, TrajectoryKind::Invariant, 1e-10).unwrap()
    }

    #[test]
    fn constant_invariant_gives_constant_frame_and_zero_connection() {
        let grid = TimeGrid::new(0.0, 1.0, 20).unwrap();
        let inv = diag_real(&[1.0, 3.0, 3.0]);
        let traj = OperatorTrajectory {
            grid,
            samples: vec![inv; 20],
            kind: TrajectoryKind::Invariant,
            renormalized: false,
        };
        let frames = eigenframes(&traj, 1e-9).unwrap();
        assert_eq!(frames.block_sizes(), vec![1, 2]);
        let a = connection(&frames).unwrap();
        assert!(a.samples.iter().all(|s| max_abs(s) < 1e-14));
        assert!(max_abs_diff(&overlap(&frames, 0).unwrap(), &matlib::identity(3)) < 1e-14);
    }

    #[test]
    fn continuity_frame_tracks_known_rotation() {
        let omega = 0.7;
        let grid = TimeGrid::new(0.0, 4.0, 2001).unwrap();
        let frames = eigenframes(&rotating_invariant(omega, &grid), 1e-9).unwrap();
        let exact = rotation_frames(omega, &grid).unwrap();
        for k in (0..grid.len()).step_by(100) {
            for col in 0..2 {
                let inner = (exact.vectors[k].column(col).adjoint() * frames.vectors[k].column(col))[(0, 0)];
                assert!((inner.norm() - 1.0).abs() < 1e-6, "column {col} at step {k}");
            }
        }
        let a = connection(&frames).unwrap();
        for s in &a.samples {
            assert!((s[(0, 1)].norm() - omega).abs() < 1e-6);
            assert!(s[(0, 0)].norm() < 1e-6 && s[(1, 1)].norm() < 1e-6);
        }
    }

    #[test]
    fn finite_difference_connection_is_second_order() {
        let omega = 1.3;
        let err = |n: usize| {
            let grid = TimeGrid::new(0.0, 2.0, n).unwrap();
            let frames = rotation_frames(omega, &grid).unwrap();
            let exact = connection(&frames).unwrap();
            let fd = connection_fd(&frames.without_derivatives()).unwrap();
            exact.samples.iter().zip(&fd.samples).map(|(a, b)| max_abs_diff(a, b)).fold(0.0, f64::max)
        };
        let ratio = err(101) / err(201);
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rotation_connection_is_omega_sigma_y() {
        let grid = TimeGrid::new(0.0, 1.0, 11).unwrap();
        let a = connection(&rotation_frames(0.4, &grid).unwrap()).unwrap();
        for s in &a.samples {
            assert!(max_abs_diff(s, &pauli_y().scale(0.4)) < 1e-15);
        }
    }

    #[test]
    fn overlap_transforms_covariantly() {
        let grid = TimeGrid::new(0.0, 3.0, 301).unwrap();
        let frames = rotation_frames(0.9, &grid).unwrap();
        let gauge = SmoothRandomGauge::new(7, &frames.blocks, GaugeMixing::Full, 3, 1.5);
        let moved = gauge_transform(&frames, &gauge).unwrap();
        let m0 = gauge.value(0.0);
        for k in [0, 150, 300] {
            let w = overlap(&frames, k).unwrap();
            let expected = m0.adjoint() * w * gauge.value(grid.time(k));
            assert!(max_abs_diff(&overlap(&moved, k).unwrap(), &expected) < 1e-8);
        }
    }

    #[test]
    fn phase_gauge_shifts_connection() {
        let grid = TimeGrid::new(0.0, 2.0, 401).unwrap();
        let frames = rotation_frames(0.5, &grid).unwrap().without_derivatives();
        let phase = |t: f64| matlib::identity(2) * Complex64::from_polar(1.0, 0.3 * t * t);
        let moved = gauge_transform(&frames, &phase).unwrap();
        let a = connection(&frames).unwrap();
        let b = connection(&moved).unwrap();
        for (k, t) in grid.times().enumerate() {
            let shift = &b.samples[k] - &a.samples[k];
            assert!(max_abs_diff(&shift, &(matlib::identity(2) * c(-0.6 * t))) < 1e-4);
        }
    }

    #[test]
    fn identity_gauge_is_a_no_op() {
        let grid = TimeGrid::new(0.0, 1.0, 11).unwrap();
        let frames = rotation_frames(0.5, &grid).unwrap();
        let moved = gauge_transform(&frames, &|_t: f64| matlib::identity(2)).unwrap();
        assert!(frames.vectors.iter().zip(&moved.vectors).all(|(a, b)| max_abs_diff(a, b) == 0.0));
    }

    #[test]
    fn gauge_derivative_matches_finite_difference() {
        let blocks = vec![0..1, 1..3];
        let gauge = SmoothRandomGauge::new(3, &blocks, GaugeMixing::BlockDiagonal, 4, 2.0);
        let (t, h) = (0.37, 1e-5);
        let fd = (gauge.value(t + h) - gauge.value(t - h)) / c(2.0 * h);
        assert!(max_abs_diff(&fd, &gauge.derivative(t).unwrap()) < 1e-8);
        let m = gauge.value(t);
        assert!(m[(0, 1)].norm() < 1e-15 && m[(2, 0)].norm() < 1e-15);
        assert!(matlib::unitary_deviation(&m) < 1e-12);
    }

    #[test]
    fn rejects_non_unitary_gauge() {
        let grid = TimeGrid::new(0.0, 1.0, 5).unwrap();
        let frames = rotation_frames(0.5, &grid).unwrap();
        let bad = |_t: f64| matlib::identity(2).scale(1.1);
        assert!(matches!(gauge_transform(&frames, &bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn degeneracy_crossing_aborts() {
        // eigenvalues (1 - t, 1 + t) merge at t = 0 only through the second sample
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let samples = vec![diag_real(&[0.0, 1.0]), diag_real(&[0.5, 0.5]), diag_real(&[1.0, 0.0])];
        let traj = OperatorTrajectory { grid, samples, kind: TrajectoryKind::Invariant, renormalized: false };
        assert!(matches!(eigenframes(&traj, 1e-9), Err(Error::DegeneracyCrossing { .. })));
    }

    #[test]
    fn short_grid_rejected() {
        let grid = TimeGrid::new(0.0, 1.0, 2).unwrap();
        let frames = FrameTrajectory::from_analytic(
            grid,
            vec![vec![0.0]; 2],
            vec![0..1],
            vec![matlib::identity(1); 2],
            None,
        )
        .unwrap();
        assert!(matches!(connection(&frames), Err(Error::GridTooShort { .. })));
        let _ = zeros(1);
    }
}
