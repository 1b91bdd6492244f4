//! Parallel transport and the geometric-phase operator `O = U V`.
//!
//! `V` is the time-ordered exponential of the connection, with the latest
//! factor on the left, and `U` is the unitary polar factor of the overlap
//! `W(t, 0)`. Only the spectrum and the trace of `O` are gauge invariant.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{LindbladModel, OperatorTrajectory, TrajectoryKind};
use crate::error::{Error, Result};
use crate::frames::{self, ConnectionSeries, FrameTrajectory};
use crate::matlib::{self, hermitize, max_abs, max_abs_diff, polar_unitary, unitary_exp, CMatrix};

/// Which sectors of the transport survive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// No restriction.
    #[serde(rename = "general")]
    General,
    /// Transitional, degenerate: transport within degenerate blocks only.
    #[serde(rename = "t_d")]
    TD,
    /// Transitional, nondegenerate: full matrix, every block 1x1.
    #[serde(rename = "t_nd")]
    TND,
    /// Non-transitional, nondegenerate: each level transported on its own.
    #[serde(rename = "nt_nd")]
    NTND,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::General => "general",
            CaseTag::TD => "t_d",
            CaseTag::TND => "t_nd",
            CaseTag::NTND => "nt_nd",
        }
    }

    /// Checks the tag against a block structure.
    pub fn check(&self, blocks: &[Range<usize>]) -> Result<()> {
        let degenerate = blocks.iter().any(|b| b.len() > 1);
        let reject = |reason: &str| Err(Error::IncompatibleCase { case: self.as_str().into(), reason: reason.into() });
        match self {
            CaseTag::General => Ok(()),
            CaseTag::TD if !degenerate => reject("no degenerate block to transport within"),
            CaseTag::TND | CaseTag::NTND if degenerate => reject("frame has a degenerate block"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(CaseTag::General),
            "t_d" => Ok(CaseTag::TD),
            "t_nd" => Ok(CaseTag::TND),
            "nt_nd" => Ok(CaseTag::NTND),
            other => Err(Error::param("case_tag", format!("unknown case `{other}`"))),
        }
    }
}

/// Zeroes the sectors a case excludes. Applied to the connection before
/// exponentiation and to the overlap before the polar decomposition.
pub fn restrict(m: &CMatrix, blocks: &[Range<usize>], case: CaseTag) -> CMatrix {
    match case {
        CaseTag::General | CaseTag::TND => m.clone(),
        CaseTag::NTND => CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| if i == j { m[(i, j)] } else { Complex64::new(0.0, 0.0) }),
        CaseTag::TD => CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            if blocks.iter().any(|b| b.contains(&i) && b.contains(&j)) {
                m[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    }
}

/// `V(t_k)` for every grid index, starting from the identity.
/// Step `k` multiplies by `exp(i (A_k + A_{k+1}) dt / 2)` from the left.
pub fn transporter_series(a: &ConnectionSeries) -> Result<Vec<CMatrix>> {
    let first = a.samples.first().ok_or(Error::GridTooShort { len: 0, min: 1 })?;
    let dt = a.grid.dt();
    let mut out = Vec::with_capacity(a.samples.len());
    out.push(matlib::identity(first.nrows()));
    for k in 0..a.samples.len() - 1 {
        let mid = hermitize(&((&a.samples[k] + &a.samples[k + 1]) * Complex64::new(0.5, 0.0)));
        let step = unitary_exp(&mid, dt)?;
        out.push(step * &out[k]);
    }
    Ok(out)
}

/// `V` at the final grid point.
pub fn transporter(a: &ConnectionSeries) -> Result<CMatrix> {
    Ok(transporter_series(a)?.pop().expect("series is non-empty"))
}

#[derive(Debug, Clone, Serialize)]
pub struct HolonomyResult {
    pub t: f64,
    #[serde(skip)]
    pub o: CMatrix,
    #[serde(skip)]
    pub u: CMatrix,
    #[serde(skip)]
    pub vpar: CMatrix,
    #[serde(skip)]
    pub r: CMatrix,
    #[serde(skip)]
    pub trace_o: Complex64,
    pub eigenphases: Vec<f64>,
    pub case_tag: CaseTag,
    /// Rank of the (restricted) overlap.
    pub overlap_rank: usize,
}

/// `O(t_k, 0)` using the frame's own connection.
pub fn geometric_phase(frames: &FrameTrajectory, k: usize, case: CaseTag) -> Result<HolonomyResult> {
    let a = frames::connection(frames)?;
    geometric_phase_with(frames, &a, k, case)
}

/// `O(t_k, 0)` with a precomputed connection.
pub fn geometric_phase_with(
    frames: &FrameTrajectory,
    a: &ConnectionSeries,
    k: usize,
    case: CaseTag,
) -> Result<HolonomyResult> {
    frames.grid.check_index(k)?;
    if a.grid != frames.grid {
        return Err(Error::GridMismatch);
    }
    case.check(&frames.blocks)?;
    let w = restrict(&frames::overlap(frames, k)?, &frames.blocks, case);
    let polar = polar_unitary(&w, 1e-12)?;
    let vpar = if k == 0 {
        matlib::identity(frames.dim())
    } else {
        let restricted = a.prefix(k)?.map(|m| restrict(m, &frames.blocks, case));
        transporter(&restricted)?
    };
    let o = &polar.u * &vpar;
    let eigenphases = matlib::unitary_eigenphases(&o)?;
    Ok(HolonomyResult {
        t: frames.grid.time(k),
        trace_o: matlib::trace(&o),
        o,
        u: polar.u,
        vpar,
        r: polar.r,
        eigenphases,
        case_tag: case,
        overlap_rank: polar.rank,
    })
}

/// `arg( <l;0|l;t> exp(-int <l;s|d_s|l;s> ds) )` for a nondegenerate level,
/// with the integral by the trapezoid rule on the frame grid.
pub fn noncyclic_abelian_gp(frames: &FrameTrajectory, level: usize, k: usize) -> Result<f64> {
    let a = frames::connection(frames)?;
    noncyclic_abelian_gp_with(frames, &a, level, k)
}

pub fn noncyclic_abelian_gp_with(frames: &FrameTrajectory, a: &ConnectionSeries, level: usize, k: usize) -> Result<f64> {
    frames.grid.check_index(k)?;
    let block = frames.block_of(level).ok_or(Error::IndexOutOfRange { index: level, len: frames.dim() })?;
    if frames.blocks[block].len() != 1 {
        return Err(Error::IncompatibleCase { case: "noncyclic".into(), reason: format!("level {level} is degenerate") });
    }
    let w = frames::overlap(frames, k)?[(level, level)];
    if w.norm() < 1e-12 {
        return Err(Error::Singular(format!("overlap <l;0|l;t> = {:.3e} at t = {}", w.norm(), frames.grid.time(k))));
    }
    // <l|d l> = -i A_ll, so exp(-int <l|dl>) = exp(i int A_ll)
    let dt = frames.grid.dt();
    let integral: f64 = (0..k).map(|j| 0.5 * dt * (a.samples[j][(level, level)].re + a.samples[j + 1][(level, level)].re)).sum();
    Ok(matlib::wrap_phase(w.arg() + integral))
}

/// Largest `|<psi_a(t)| d_t |psi_b(t)>|` over interior grid points, where the
/// transported states are the columns of `F(t) V(t)` and the derivative is a
/// central difference.
pub fn parallel_residual(frames: &FrameTrajectory, vpar_series: &[CMatrix]) -> Result<f64> {
    if vpar_series.len() != frames.grid.len() {
        return Err(Error::GridMismatch);
    }
    let dt = frames.grid.dt();
    let moved: Vec<CMatrix> = frames.vectors.iter().zip(vpar_series).map(|(f, v)| f * v).collect();
    let mut worst = 0.0_f64;
    for k in 1..moved.len() - 1 {
        let d = moved[k].adjoint() * (&moved[k + 1] - &moved[k - 1]) / Complex64::new(2.0 * dt, 0.0);
        worst = worst.max(max_abs(&d));
    }
    Ok(worst)
}

/// Closed-system coefficient matrix `c(t) = V c(0) V^dag` with
/// `V = T exp(i int (H + A))` restricted to the degenerate blocks.
///
/// `h` holds the frame Hamiltonian `-F^dag H0 F` per grid point. The frame
/// of a closed system never mixes its eigenspaces, so the block restriction
/// drops only discretization noise.
pub fn dissipative_free_block_solution(
    h: &[CMatrix],
    a: &ConnectionSeries,
    blocks: &[Range<usize>],
    c0: &CMatrix,
) -> Result<OperatorTrajectory> {
    if h.len() != a.samples.len() {
        return Err(Error::GridMismatch);
    }
    let generator = ConnectionSeries {
        grid: a.grid,
        samples: h.iter().zip(&a.samples).map(|(h, a)| restrict(&(h + a), blocks, CaseTag::TD)).collect(),
        hermitian_deviation: a.hermitian_deviation,
        flagged: a.flagged,
    };
    let v = transporter_series(&generator)?;
    Ok(OperatorTrajectory {
        grid: a.grid,
        samples: v.iter().map(|v| v * c0 * v.adjoint()).collect(),
        kind: TrajectoryKind::Coefficient,
        renormalized: false,
    })
}

/// Same as [`dissipative_free_block_solution`] but assembled from a model,
/// which must be free of dissipation on the frame grid.
pub fn block_solution_for(
    model: &LindbladModel,
    frames: &FrameTrajectory,
    a: &ConnectionSeries,
    c0: &CMatrix,
) -> Result<OperatorTrajectory> {
    if model.is_dissipative_on(&frames.grid) {
        return Err(Error::param("gamma", "the block solution applies only without dissipation"));
    }
    let h: Vec<CMatrix> = frames
        .grid
        .times()
        .zip(&frames.vectors)
        .map(|(t, f)| -(f.adjoint() * model.hamiltonian(t) * f))
        .collect();
    dissipative_free_block_solution(&h, a, &frames.blocks, c0)
}

/// Time-ordered product of `exp(i G dt)` for general (not necessarily
/// Hermitian) generators, midpoint-averaged like [`transporter`].
/// With `reversed` the factors are multiplied in the opposite order.
pub fn ordered_exponential(generators: &[CMatrix], dt: f64, reversed: bool) -> Result<CMatrix> {
    let first = generators.first().ok_or(Error::GridTooShort { len: 0, min: 1 })?;
    let mut out = matlib::identity(first.nrows());
    for k in 0..generators.len() - 1 {
        let step = ((&generators[k] + &generators[k + 1]) * Complex64::new(0.0, 0.5 * dt)).exp();
        if !matlib::is_finite(&step) {
            return Err(Error::NonFinite { context: "ordered exponential" });
        }
        out = if reversed { out * step } else { step * out };
    }
    Ok(out)
}

/// How far a generator series is from commuting with itself.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NonAbelianWitness {
    /// Largest `max |[G(t_i), G(t_j)]|` over sampled pairs.
    pub commutator: f64,
    /// `max |G|^2` over the samples, the natural scale of `commutator`.
    pub scale: f64,
    /// `max |T exp - reversed T exp|`.
    pub reversal_gap: f64,
}

impl NonAbelianWitness {
    pub fn max(&self) -> f64 {
        self.commutator.max(self.reversal_gap)
    }
}

/// Witness over `samples` evenly spaced generator samples (all pairs) plus the full ordered products.
pub fn non_abelian_witness(generators: &[CMatrix], dt: f64, samples: usize) -> Result<NonAbelianWitness> {
    if generators.len() < 2 {
        return Err(Error::GridTooShort { len: generators.len(), min: 2 });
    }
    let picks = samples.clamp(2, generators.len());
    let idx: Vec<usize> = (0..picks).map(|i| i * (generators.len() - 1) / (picks - 1)).collect();
    let mut commutator = 0.0_f64;
    for (n, &i) in idx.iter().enumerate() {
        for &j in &idx[n + 1..] {
            commutator = commutator.max(max_abs(&matlib::commutator(&generators[i], &generators[j])));
        }
    }
    let scale = generators.iter().map(|g| max_abs(g).powi(2)).fold(0.0, f64::max);
    let forward = ordered_exponential(generators, dt, false)?;
    let backward = ordered_exponential(generators, dt, true)?;
    Ok(NonAbelianWitness { commutator, scale, reversal_gap: max_abs_diff(&forward, &backward) })
}

/// Witness of the connection alone.
pub fn connection_witness(a: &ConnectionSeries, samples: usize) -> Result<NonAbelianWitness> {
    non_abelian_witness(&a.samples, a.grid.dt(), samples)
}
