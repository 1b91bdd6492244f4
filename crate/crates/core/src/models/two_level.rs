//! Two-level atom decaying into a zero-temperature reservoir.
//!
//! Basis order is `(e, g)`, so `sigma_z = diag(1, -1)` and `sigma_- = |g><e|`
//! sits at row 1, column 0. With `H0 = w0 sigma_z / 2`, `G_1 = sigma_-` and
//! `g_11 = gamma / 2`, the excited population decays as `exp(-gamma t)`.
//!
//! The invariant starts at `I(0) = r0 n.sigma` for the Bloch direction
//! `n(theta0, phi0)`, and the initial state is `rho(0) = (1 + I(0)) / 2`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{LindbladModel, TimeGrid};
use crate::error::{Error, Result};
use crate::frames::{self, FrameTrajectory};
use crate::holonomy;
use crate::matlib::{self, c, pauli_z, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelDecayParams {
    pub omega0: f64,
    pub gamma: f64,
    pub r0: f64,
    pub theta0: f64,
    pub phi0: f64,
}

impl TwoLevelDecayParams {
    pub fn new(omega0: f64, gamma: f64, r0: f64, theta0: f64, phi0: f64) -> Result<Self> {
        let p = Self { omega0, gamma, r0, theta0, phi0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega0, self.gamma, self.r0, self.theta0, self.phi0].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::param("params", "all values must be finite"));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::param("omega0", "must be positive"));
        }
        if self.gamma < 0.0 {
            return Err(Error::param("gamma", "must be non-negative"));
        }
        if !(self.r0 > 0.0 && self.r0 <= 1.0) {
            return Err(Error::param("r0", "must lie in (0, 1]"));
        }
        if !(0.0..=PI).contains(&self.theta0) {
            return Err(Error::param("theta0", "must lie in [0, pi]"));
        }
        Ok(())
    }

    /// One free precession period `2 pi / w0`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega0
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_theta0(mut self, theta0: f64) -> Self {
        self.theta0 = theta0;
        self
    }
}

pub fn sigma_minus() -> CMatrix {
    let mut m = matlib::zeros(2);
    m[(1, 0)] = c(1.0, 0.0);
    m
}

pub fn two_level_model(p: &TwoLevelDecayParams) -> Result<LindbladModel> {
    p.validate()?;
    let h = pauli_z().scale(p.omega0 / 2.0);
    let g11 = p.gamma / 2.0;
    LindbladModel::new(
        2,
        Arc::new(move |_| h.clone()),
        vec![sigma_minus()],
        Arc::new(move |_| DMatrix::from_element(1, 1, g11)),
    )
}

/// `I(t) = sum chi_ab(t) |a><b|`.
pub fn chi_closed_form(p: &TwoLevelDecayParams, t: f64) -> CMatrix {
    let (s, co) = p.theta0.sin_cos();
    let r = p.r0;
    let eg = Complex64::from_polar(r * s * (p.gamma * t / 2.0).exp(), -(p.omega0 * t + p.phi0));
    CMatrix::from_row_slice(
        2,
        2,
        &[c((2.0 * (p.gamma * t).exp() - 1.0) * r * co, 0.0), eg, eg.conj(), c(-r * co, 0.0)],
    )
}

/// Exact time derivative of [`chi_closed_form`].
pub fn chi_derivative(p: &TwoLevelDecayParams, t: f64) -> CMatrix {
    let chi = chi_closed_form(p, t);
    let ee = 2.0 * p.gamma * (p.gamma * t).exp() * p.r0 * p.theta0.cos();
    let eg = chi[(0, 1)] * Complex64::new(p.gamma / 2.0, -p.omega0);
    CMatrix::from_row_slice(2, 2, &[c(ee, 0.0), eg, eg.conj(), c(0.0, 0.0)])
}

/// `rho(0) = (1 + r0 n.sigma) / 2`.
pub fn initial_density(p: &TwoLevelDecayParams) -> CMatrix {
    (matlib::identity(2) + chi_closed_form(p, 0.0)) * c(0.5, 0.0)
}

#[derive(Debug, Clone)]
pub struct TwoLevelEigenData {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub f: f64,
    pub f_dot: f64,
    pub n: f64,
    pub n_dot: f64,
    /// `|+;t>` and `|-;t>` as `(e, g)` components.
    pub vec_plus: [Complex64; 2],
    pub vec_minus: [Complex64; 2],
    pub dvec_plus: [Complex64; 2],
    pub dvec_minus: [Complex64; 2],
}

/// `lambda_+-`, `f`, `N` and the eigenvectors
/// `|+;t> = N (r0 sin(theta0) e^{-i Theta} |e> + f |g>)`,
/// `|-;t> = -N (f |e> - r0 sin(theta0) e^{i Theta} |g>)`, `Theta = w0 t + phi0`,
/// with their exact time derivatives.
pub fn eigen_closed_form(p: &TwoLevelDecayParams, t: f64) -> Result<TwoLevelEigenData> {
    let (s, co) = p.theta0.sin_cos();
    let r = p.r0;
    let big = (p.gamma * t).exp();
    let half = (p.gamma * t / 2.0).exp();
    let q = (1.0 - (1.0 - big) * co * co).sqrt();
    let q_dot = p.gamma * big * co * co / (2.0 * q);
    let f = -r * (half * co - q);
    let f_dot = -r * (p.gamma / 2.0 * half * co - q_dot);
    let denom = f * f + r * r * s * s;
    if denom < 1e-24 {
        return Err(Error::Singular(format!("f^2 + r0^2 sin^2(theta0) = {denom:.3e}")));
    }
    let n = denom.powf(-0.5);
    let n_dot = -n.powi(3) * f * f_dot;
    let phase = Complex64::from_polar(r * s, -(p.omega0 * t + p.phi0));
    let w = c(0.0, p.omega0);
    let rc = |x: f64| c(x, 0.0);
    Ok(TwoLevelEigenData {
        lambda_plus: -r * ((1.0 - big) * co - half * q),
        lambda_minus: -r * ((1.0 - big) * co + half * q),
        f,
        f_dot,
        n,
        n_dot,
        vec_plus: [phase * n, rc(n * f)],
        vec_minus: [rc(-n * f), phase.conj() * n],
        dvec_plus: [phase * (n_dot - n * w), rc(n_dot * f + n * f_dot)],
        dvec_minus: [rc(-(n_dot * f + n * f_dot)), phase.conj() * (n_dot + n * w)],
    })
}

/// Closed-form frames with columns `(|+;t>, |-;t>)` and exact derivatives.
pub fn analytic_frames(p: &TwoLevelDecayParams, grid: &TimeGrid) -> Result<FrameTrajectory> {
    p.validate()?;
    let mut values = Vec::with_capacity(grid.len());
    let mut vectors = Vec::with_capacity(grid.len());
    let mut derivs = Vec::with_capacity(grid.len());
    for t in grid.times() {
        let e = eigen_closed_form(p, t)?;
        values.push(vec![e.lambda_plus, e.lambda_minus]);
        vectors.push(CMatrix::from_column_slice(2, 2, &[e.vec_plus[0], e.vec_plus[1], e.vec_minus[0], e.vec_minus[1]]));
        derivs.push(CMatrix::from_column_slice(2, 2, &[e.dvec_plus[0], e.dvec_plus[1], e.dvec_minus[0], e.dvec_minus[1]]));
    }
    FrameTrajectory::from_analytic(*grid, values, vec![0..1, 1..2], vectors, Some(derivs))
}

/// The overlap matrix `[[U_D, -U_OD*], [U_OD, U_D*]]` in `(+, -)` order.
pub fn overlap_closed_form(p: &TwoLevelDecayParams, t: f64) -> Result<CMatrix> {
    let e = eigen_closed_form(p, t)?;
    let (sh, ch) = (p.theta0 / 2.0).sin_cos();
    let rot = Complex64::from_polar(1.0, -p.omega0 * t);
    let u_d = (rot * (2.0 * p.r0 * ch * ch) + e.f) * (e.n * sh);
    let u_od = (rot * (-2.0 * p.r0 * sh * sh) + e.f) * Complex64::from_polar(e.n * ch, -p.phi0);
    Ok(CMatrix::from_row_slice(2, 2, &[u_d, -u_od.conj(), u_od, u_d.conj()]))
}

/// Right-hand side of the rotating-frame angle equations, `(d eta/dt, d zeta/dt)`,
/// with `Theta = w0 t + phi0 - zeta`.
pub fn eta_zeta_rhs(p: &TwoLevelDecayParams, eta: f64, zeta: f64, t: f64) -> Result<(f64, f64)> {
    if eta.sin().abs() < 1e-10 {
        return Err(Error::Singular(format!("sin(eta) = {:.3e}", eta.sin())));
    }
    let e = eigen_closed_form(p, t)?;
    let rs = p.r0 * p.theta0.sin();
    let (st, ct) = (p.omega0 * t + p.phi0 - zeta).sin_cos();
    let pre = 2.0 * e.n * e.n * rs;
    let w = p.omega0;
    let eta_dot = pre * (w * e.f * st + e.f_dot * ct);
    let zeta_dot = pre * (w * rs + (-w * e.f * ct + e.f_dot * st) / eta.tan());
    Ok((eta_dot, zeta_dot))
}

/// RK4 solution of the angle equations from `eta(t0) = theta0`, `zeta(t0) = phi0`.
pub fn integrate_eta_zeta(p: &TwoLevelDecayParams, grid: &TimeGrid) -> Result<Vec<(f64, f64)>> {
    let dt = grid.dt();
    let mut out = Vec::with_capacity(grid.len());
    out.push((p.theta0, p.phi0));
    for k in 0..grid.len() - 1 {
        let t = grid.time(k);
        let (y0, z0) = out[k];
        let (a1, b1) = eta_zeta_rhs(p, y0, z0, t)?;
        let (a2, b2) = eta_zeta_rhs(p, y0 + a1 * dt / 2.0, z0 + b1 * dt / 2.0, t + dt / 2.0)?;
        let (a3, b3) = eta_zeta_rhs(p, y0 + a2 * dt / 2.0, z0 + b2 * dt / 2.0, t + dt / 2.0)?;
        let (a4, b4) = eta_zeta_rhs(p, y0 + a3 * dt, z0 + b3 * dt, t + dt)?;
        let next = (y0 + dt * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0, z0 + dt * (b1 + 2.0 * b2 + 2.0 * b3 + b4) / 6.0);
        if !(next.0.is_finite() && next.1.is_finite()) {
            return Err(Error::IntegrationFailure { last_valid_time: t });
        }
        out.push(next);
    }
    Ok(out)
}

/// How the `gamma cos(theta0) / 2 w0` correction in `zeta` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaReading {
    /// `zeta = w0 t + phi0 - gamma cos(theta0) / (2 w0)`.
    ConstantOffset,
    /// `zeta = w0 t + phi0 - gamma cos(theta0) t / 2`.
    GrowingOffset,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaZetaApprox {
    pub eta: f64,
    pub zeta: f64,
    /// False outside `pi/7 <= theta0 <= pi`.
    pub in_window: bool,
}

/// Weak-coupling approximation of the angles near one period.
pub fn eta_zeta_approx(p: &TwoLevelDecayParams, t: f64) -> EtaZetaApprox {
    eta_zeta_approx_with(p, t, ZetaReading::ConstantOffset)
}

pub fn eta_zeta_approx_with(p: &TwoLevelDecayParams, t: f64, reading: ZetaReading) -> EtaZetaApprox {
    let co = p.theta0.cos();
    let eta = if co == 0.0 || (p.theta0 - PI / 2.0).abs() < 1e-15 {
        PI / 2.0
    } else {
        let cot = co / p.theta0.sin() * (1.0 + (1.0 - co / 2.0) / (1.0 - co) * p.gamma * t);
        // arccot into (0, pi)
        (1.0 / cot).atan().rem_euclid(PI)
    };
    let correction = match reading {
        ZetaReading::ConstantOffset => p.gamma * co / (2.0 * p.omega0),
        ZetaReading::GrowingOffset => p.gamma * co * t / 2.0,
    };
    EtaZetaApprox {
        eta,
        zeta: p.omega0 * t + p.phi0 - correction,
        in_window: p.theta0 >= PI / 7.0 && p.theta0 <= PI,
    }
}

/// `S(theta0) = -cos(theta0) (1/2 - cos(theta0) + 3 cos^2(theta0) / 8) / (1 - cos(theta0))`.
pub fn s_factor(theta0: f64) -> Result<f64> {
    let co = theta0.cos();
    if (1.0 - co).abs() < 1e-14 {
        return Err(Error::Singular("S(theta0) needs theta0 != 0".into()));
    }
    Ok(-co * (0.5 - co + 3.0 * co * co / 8.0) / (1.0 - co))
}

/// `(Omega, S)` with `Omega = w0 t (1 + gamma S t / 2)`.
pub fn omega_approx(p: &TwoLevelDecayParams, t: f64) -> Result<(f64, f64)> {
    let s = s_factor(p.theta0)?;
    Ok((p.omega0 * t * (1.0 + p.gamma * s * t / 2.0), s))
}

/// `R(eta, zeta) = exp[eta (e^{-i zeta} sigma_- - e^{i zeta} sigma_+) / 2]`.
pub fn rotating_frame(eta: f64, zeta: f64) -> CMatrix {
    let (s, co) = (eta / 2.0).sin_cos();
    CMatrix::from_row_slice(
        2,
        2,
        &[c(co, 0.0), -Complex64::from_polar(s, zeta), Complex64::from_polar(s, -zeta), c(co, 0.0)],
    )
}

/// `Omega(t)` recovered from the transitional transporter of the analytic
/// frame: `R(t) V(t) R(0)^dag = exp(i Omega sigma_z)`, with `R` from the
/// integrated angle equations. The phase of the `(0, 0)` entry is unwrapped
/// along the grid. Also returns the largest off-diagonal magnitude of that
/// product, which measures how diagonal it really is.
pub fn omega_numeric(p: &TwoLevelDecayParams, grid: &TimeGrid) -> Result<(Vec<f64>, f64)> {
    let frames = analytic_frames(p, grid)?;
    let a = frames::connection(&frames)?;
    let v = holonomy::transporter_series(&a)?;
    let angles = integrate_eta_zeta(p, grid)?;
    let r0_dag = rotating_frame(angles[0].0, angles[0].1).adjoint();
    let mut out = Vec::with_capacity(grid.len());
    let mut off = 0.0_f64;
    let mut prev = 0.0;
    for (k, (eta, zeta)) in angles.iter().enumerate() {
        let x = rotating_frame(*eta, *zeta) * &v[k] * &r0_dag;
        off = off.max(x[(0, 1)].norm()).max(x[(1, 0)].norm());
        let raw = x[(0, 0)].arg();
        let value = if k == 0 { raw } else { prev + matlib::wrap_phase(raw - prev) };
        out.push(value);
        prev = value;
    }
    Ok((out, off))
}

/// Cyclic phases `(+pi(1 - cos theta0), -pi(1 - cos theta0))` wrapped to
/// `(-pi, pi]`. Values within `1e-12` of `-pi` are reported as `pi`, so
/// `theta0 = pi/2` gives `(pi, pi)`.
pub fn berry_reference(theta0: f64) -> (f64, f64) {
    let g = PI * (1.0 - theta0.cos());
    let canon = |x: f64| {
        let w = matlib::wrap_phase(x);
        if (w + PI).abs() < 1e-12 {
            PI
        } else {
            w
        }
    };
    (canon(g), canon(-g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{invariant_rhs, propagate, TrajectoryKind};
    use crate::holonomy::{geometric_phase, CaseTag};
    use crate::matlib::{max_abs, max_abs_diff, phase_set_distance};

    fn params(gamma: f64, theta0: f64) -> TwoLevelDecayParams {
        TwoLevelDecayParams::new(1.0, gamma, 1.0, theta0, 0.3).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(TwoLevelDecayParams::new(1.0, 0.0, 1.0, -1.0, 0.0).is_err());
        assert!(TwoLevelDecayParams::new(0.0, 0.0, 1.0, 1.0, 0.0).is_err());
        assert!(TwoLevelDecayParams::new(1.0, -0.1, 1.0, 1.0, 0.0).is_err());
        assert!(TwoLevelDecayParams::new(1.0, 0.1, 1.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn chi_at_zero_and_closed_limit() {
        let p = params(0.0, 1.1);
        let chi = chi_closed_form(&p, 0.0);
        assert!((chi[(1, 1)].re + 1.1f64.cos()).abs() < 1e-15);
        assert!((chi[(0, 0)].re - 1.1f64.cos()).abs() < 1e-15);
        assert!((chi[(0, 1)] - Complex64::from_polar(1.1f64.sin(), -0.3)).norm() < 1e-15);
        let later = chi_closed_form(&p, 2.0);
        assert_eq!(later[(0, 0)], chi[(0, 0)]);
        assert!((later[(0, 1)] - chi[(0, 1)] * Complex64::from_polar(1.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn chi_solves_the_invariant_equation() {
        for &gamma in &[0.0, 0.01, 0.3] {
            for &theta in &[0.4, 1.3, 2.9] {
                let p = params(gamma, theta);
                let model = two_level_model(&p).unwrap();
                for &t in &[0.0, 0.7, 3.1] {
                    let rhs = invariant_rhs(&model, &chi_closed_form(&p, t), t).unwrap();
                    let scale = max_abs(&chi_closed_form(&p, t)).max(1.0);
                    assert!(max_abs_diff(&rhs, &chi_derivative(&p, t)) < 1e-12 * scale);
                    let h = 1e-5;
                    let fd = (chi_closed_form(&p, t + h) - chi_closed_form(&p, t - h)) / c(2.0 * h, 0.0);
                    assert!(max_abs_diff(&rhs, &fd) < 1e-8 * scale);
                }
            }
        }
    }

    #[test]
    fn propagated_invariant_matches_closed_form() {
        let p = params(1e-3, 2.0);
        let model = two_level_model(&p).unwrap();
        let grid = TimeGrid::new(0.0, p.period(), 1001).unwrap();
        let traj = propagate(&model, &chi_closed_form(&p, 0.0), &grid, TrajectoryKind::Invariant, 1e-10).unwrap();
        for (k, t) in grid.times().enumerate() {
            assert!(max_abs_diff(&traj.samples[k], &chi_closed_form(&p, t)) < 1e-7);
        }
    }

    #[test]
    fn excited_population_decays_at_gamma() {
        let gamma = 0.2;
        let p = TwoLevelDecayParams::new(1.0, gamma, 1.0, 0.0, 0.0).unwrap();
        let model = two_level_model(&p).unwrap();
        let grid = TimeGrid::new(0.0, 5.0, 1001).unwrap();
        let traj = propagate(&model, &matlib::diag_real(&[1.0, 0.0]), &grid, TrajectoryKind::Density, 1e-10).unwrap();
        let rate = -traj.last()[(0, 0)].re.ln() / 5.0;
        assert!((rate - gamma).abs() < 1e-9, "rate {rate}");
    }

    #[test]
    fn mixed_state_relaxes_to_ground() {
        let p = params(0.5, 1.0);
        let model = two_level_model(&p).unwrap();
        let grid = TimeGrid::new(0.0, 40.0, 4001).unwrap();
        let rho0 = matlib::diag_real(&[0.5, 0.5]);
        let traj = propagate(&model, &rho0, &grid, TrajectoryKind::Density, 1e-10).unwrap();
        assert!(max_abs_diff(traj.last(), &matlib::diag_real(&[0.0, 1.0])) < 1e-8);
    }

    #[test]
    fn eigen_data_matches_numeric_eigensolver() {
        for &gamma in &[0.0, 0.05, 0.4] {
            for &theta in &[0.3, PI / 2.0, 2.5, PI] {
                let p = params(gamma, theta);
                for &t in &[0.0, 0.9, 4.0] {
                    let e = eigen_closed_form(&p, t).unwrap();
                    let num = matlib::hermitian_eig(&chi_closed_form(&p, t), 1e-12).unwrap();
                    assert!((num.eigenvalues[1] - e.lambda_plus).abs() < 1e-10);
                    assert!((num.eigenvalues[0] - e.lambda_minus).abs() < 1e-10);
                    let vp = CMatrix::from_column_slice(2, 1, &e.vec_plus);
                    let vm = CMatrix::from_column_slice(2, 1, &e.vec_minus);
                    assert!(((vp.adjoint() * num.vectors.column(1))[(0, 0)].norm() - 1.0).abs() < 1e-9);
                    assert!(((vm.adjoint() * num.vectors.column(0))[(0, 0)].norm() - 1.0).abs() < 1e-9);
                    assert!((vp.adjoint() * &vm)[(0, 0)].norm() < 1e-12);
                    assert!((e.n.powi(-2) - (e.f * e.f + theta.sin().powi(2))).abs() < 1e-12);
                }
            }
        }
        let e = eigen_closed_form(&params(0.0, 0.7), 0.0).unwrap();
        assert!((e.lambda_plus - 1.0).abs() < 1e-15 && (e.lambda_minus + 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let p = params(0.2, 2.1);
        let (t, h) = (1.3, 1e-5);
        let e = eigen_closed_form(&p, t).unwrap();
        let (a, b) = (eigen_closed_form(&p, t + h).unwrap(), eigen_closed_form(&p, t - h).unwrap());
        for i in 0..2 {
            assert!(((a.vec_plus[i] - b.vec_plus[i]) / (2.0 * h) - e.dvec_plus[i]).norm() < 1e-8);
            assert!(((a.vec_minus[i] - b.vec_minus[i]) / (2.0 * h) - e.dvec_minus[i]).norm() < 1e-8);
        }
    }

    #[test]
    fn theta_zero_is_singular() {
        assert!(matches!(eigen_closed_form(&params(0.1, 0.0), 0.0), Err(Error::Singular(_))));
    }

    #[test]
    fn overlap_closed_form_matches_frames() {
        let grid = TimeGrid::new(0.0, 7.0, 71).unwrap();
        for &theta in &[0.5, 1.6, 2.7] {
            let p = params(0.05, theta);
            let frames = analytic_frames(&p, &grid).unwrap();
            for k in [0, 30, 70] {
                let closed = overlap_closed_form(&p, grid.time(k)).unwrap();
                assert!(max_abs_diff(&closed, &frames::overlap(&frames, k).unwrap()) < 1e-12);
                let norm = closed[(0, 0)].norm_sqr() + closed[(1, 0)].norm_sqr();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
        let p = params(0.0, 1.2);
        let cyc = overlap_closed_form(&p, p.period()).unwrap();
        assert!(cyc[(1, 0)].norm() < 1e-10);
        assert!(max_abs_diff(&overlap_closed_form(&p, 0.0).unwrap(), &matlib::identity(2)) < 1e-15);
    }

    #[test]
    fn closed_system_angles_are_stationary() {
        let p = params(0.0, 1.0);
        let (eta_dot, zeta_dot) = eta_zeta_rhs(&p, 1.0, 0.7 + 0.3, 0.7).unwrap();
        assert!(eta_dot.abs() < 1e-14 && (zeta_dot - 1.0).abs() < 1e-14);
        assert!(eta_zeta_rhs(&p, 0.0, 0.0, 0.0).is_err());
        let slow = eta_zeta_rhs(&params(1e-3, PI / 2.0), PI / 2.0, 0.3, 0.0).unwrap();
        assert!(slow.0.abs() < 1e-2);
    }

    #[test]
    fn approximations_special_cases() {
        let p = params(1e-3, PI / 2.0);
        let a = eta_zeta_approx(&p, 3.0);
        assert_eq!(a.eta, PI / 2.0);
        assert!((a.zeta - (3.0 + 0.3)).abs() < 1e-15);
        let a = eta_zeta_approx(&params(0.0, 1.0), 2.0);
        assert!((a.eta - 1.0).abs() < 1e-14 && (a.zeta - 2.3).abs() < 1e-15);
        assert!(!eta_zeta_approx(&params(0.0, 0.2), 1.0).in_window);
        assert_eq!(omega_approx(&params(0.3, PI / 2.0), 2.0).unwrap().0, 2.0);
        assert!((s_factor(PI).unwrap() - 15.0 / 16.0).abs() < 1e-15);
        assert_eq!(omega_approx(&params(0.0, 1.0), 2.0).unwrap().0, 2.0);
        assert!(omega_approx(&params(0.1, 0.0), 1.0).is_err());
    }

    #[test]
    fn berry_reference_values() {
        assert_eq!(berry_reference(0.0), (0.0, 0.0));
        let (a, b) = berry_reference(PI / 3.0);
        assert!((a - PI / 2.0).abs() < 1e-12 && (b + PI / 2.0).abs() < 1e-12);
        let (a, b) = berry_reference(PI / 2.0);
        assert!((a - PI).abs() < 1e-12 && (b - PI).abs() < 1e-12);
    }

    #[test]
    fn closed_frame_reproduces_berry_phases() {
        let p = params(0.0, PI / 3.0);
        let grid = TimeGrid::new(0.0, p.period(), 2001).unwrap();
        let frames = analytic_frames(&p, &grid).unwrap();
        let res = geometric_phase(&frames, grid.len() - 1, CaseTag::NTND).unwrap();
        let (a, b) = berry_reference(p.theta0);
        assert!(phase_set_distance(&res.eigenphases, &[a, b]) < 1e-6);
    }

    #[test]
    fn omega_numeric_closed_limit_is_linear() {
        let p = params(0.0, 2.0);
        let grid = TimeGrid::new(0.0, p.period(), 2001).unwrap();
        let (omega, off) = omega_numeric(&p, &grid).unwrap();
        assert!(off < 1e-6);
        assert!((omega.last().unwrap() - p.period()).abs() < 1e-5);
    }
}
