//! Dense complex linear algebra used throughout the crate.
//!
//! Hermitian eigendecomposition with degeneracy grouping, SVD-based polar
//! decomposition, the exponential `exp(i s A)` of a Hermitian generator and
//! eigenphases of unitary matrices. Everything operates on [`CMatrix`], a
//! dense `nalgebra` matrix of `Complex64`.

use std::f64::consts::PI;
use std::ops::Range;

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance on `H - H^dag` accepted by the eigensolver, relative to `max(1, |H|_max)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on `U^dag U - 1` accepted by [`unitary_eigenphases`].
pub const UNITARY_TOL: f64 = 1e-8;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitary_deviation(m: &CMatrix) -> f64 {
    let n = m.ncols();
    max_abs_diff(&(m.adjoint() * m), &identity(n))
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && hermitian_deviation(m) <= tol
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && unitary_deviation(m) <= tol
}

/// `(M + M^dag) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() })
    }
}

fn ensure_hermitian(m: &CMatrix) -> Result<()> {
    ensure_square(m)?;
    if !is_finite(m) {
        return Err(Error::NonFinite { context: "Hermitian input" });
    }
    let tolerance = HERMITIAN_TOL * max_abs(m).max(1.0);
    let deviation = hermitian_deviation(m);
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok(())
}

/// Eigenvalues in ascending order, orthonormal eigenvector columns and the
/// partition of indices into degenerate groups.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMatrix,
    pub blocks: Vec<Range<usize>>,
}

impl EigenDecomposition {
    pub fn spectral_range(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }
}

/// Groups ascending eigenvalues: consecutive values share a block iff their
/// gap is at most `deg_tol * max(1, spectral range)`.
pub fn group_degenerate(eigenvalues: &[f64], deg_tol: f64) -> Vec<Range<usize>> {
    if eigenvalues.is_empty() {
        return Vec::new();
    }
    let range = eigenvalues[eigenvalues.len() - 1] - eigenvalues[0];
    let threshold = deg_tol * range.max(1.0);
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..eigenvalues.len() {
        if eigenvalues[i] - eigenvalues[i - 1] > threshold {
            blocks.push(start..i);
            start = i;
        }
    }
    blocks.push(start..eigenvalues.len());
    blocks
}

pub fn hermitian_eig(h: &CMatrix, deg_tol: f64) -> Result<EigenDecomposition> {
    if !(deg_tol > 0.0) {
        return Err(Error::param("deg_tol", "must be positive"));
    }
    ensure_hermitian(h)?;
    let n = h.nrows();
    let eig = SymmetricEigen::try_new(hermitize(h), f64::EPSILON, 0).ok_or(Error::NoConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    let blocks = group_degenerate(&eigenvalues, deg_tol);
    Ok(EigenDecomposition { eigenvalues, vectors, blocks })
}

/// Left polar factors `W = R U` of a square matrix.
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    /// Unitary factor `U = P Q^dag`.
    pub u: CMatrix,
    /// Positive-semidefinite factor `R = P Sigma P^dag`.
    pub r: CMatrix,
    /// Number of singular values above `rank_tol * sigma_max`.
    pub rank: usize,
}

/// SVD-based polar decomposition. With `W = P Sigma Q^dag` this returns
/// `R = P Sigma P^dag` and `U = P Q^dag`; for rank-deficient `W` the unitary
/// factor is the Moore-Penrose branch, with the null-space columns fixed by
/// the SVD's choice of singular vectors.
pub fn polar_unitary(w: &CMatrix, rank_tol: f64) -> Result<PolarDecomposition> {
    ensure_square(w)?;
    if !(rank_tol > 0.0) {
        return Err(Error::param("rank_tol", "must be positive"));
    }
    if !is_finite(w) {
        return Err(Error::NonFinite { context: "polar decomposition input" });
    }
    let n = w.nrows();
    let svd = SVD::try_new(w.clone(), true, true, f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let p = svd.u.ok_or(Error::NoConvergence)?;
    let q_dag = svd.v_t.ok_or(Error::NoConvergence)?;
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rank_tol * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let sigma = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let s = svd.singular_values[i];
            if s > cutoff {
                Complex64::new(s, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let r = hermitize(&(&p * sigma * p.adjoint()));
    let u = &p * q_dag;
    Ok(PolarDecomposition { u, r, rank })
}

/// `exp(i s A)` for Hermitian `A`, through the eigendecomposition of `A`.
pub fn unitary_exp(a: &CMatrix, s: f64) -> Result<CMatrix> {
    ensure_hermitian(a)?;
    let n = a.nrows();
    if max_abs(a) == 0.0 {
        return Ok(identity(n));
    }
    let eig = SymmetricEigen::try_new(hermitize(a), f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let v = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&lam| Complex64::from_polar(1.0, s * lam)),
    ));
    Ok(v * phases * v.adjoint())
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Largest circular distance between two phase multisets under the best
/// pairing. Returns `f64::INFINITY` for lists of different length.
///
/// Sorted lists are not enough near the branch cut: `pi - 1e-9` and
/// `-pi + 1e-9` are neighbours on the circle but sit at opposite ends of a
/// sorted list.
pub fn phase_set_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    if n <= 7 {
        let mut best = f64::INFINITY;
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| {
            let d = a.iter().zip(p).fold(0.0, |acc, (&x, &j)| f64::max(acc, circular_distance(x, b[j])));
            best = best.min(d);
        });
        best
    } else {
        // rotate both onto a common cut and compare sorted
        let mut sa: Vec<f64> = a.iter().map(|&x| wrap_phase(x)).collect();
        let mut sb: Vec<f64> = b.iter().map(|&x| wrap_phase(x)).collect();
        sa.sort_by(f64::total_cmp);
        sb.sort_by(f64::total_cmp);
        (0..n)
            .map(|shift| (0..n).fold(0.0, |acc, i| f64::max(acc, circular_distance(sa[i], sb[(i + shift) % n]))))
            .fold(f64::INFINITY, f64::min)
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Arguments of the eigenvalues of a unitary matrix, in `(-pi, pi]`, sorted
/// ascending.
pub fn unitary_eigenphases(u: &CMatrix) -> Result<Vec<f64>> {
    ensure_square(u)?;
    if !is_finite(u) {
        return Err(Error::NonFinite { context: "unitary input" });
    }
    let deviation = unitary_deviation(u);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation, tolerance: UNITARY_TOL });
    }
    let schur = Schur::try_new(u.clone(), f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let values = schur.eigenvalues().ok_or(Error::NoConvergence)?;
    let mut phases: Vec<f64> = values.iter().map(|z| wrap_phase(z.arg())).collect();
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

/// Pauli matrices in the `(|0>, |1>)` ordering.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn diag(values: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| Complex64::new(x, 0.0)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_hermitian(n: usize, entries: &[(f64, f64)]) -> CMatrix {
        let m = CMatrix::from_fn(n, n, |i, j| {
            let (re, im) = entries[(i * n + j) % entries.len()];
            c(re, im)
        });
        hermitize(&m)
    }

    fn random_unitary(n: usize, entries: &[(f64, f64)]) -> CMatrix {
        let h = random_hermitian(n, entries);
        unitary_exp(&h, 1.3).unwrap()
    }

    #[test]
    fn eig_diagonal_groups_degenerate_pair() {
        let h = diag_real(&[1.0, 1.0, 2.0]);
        let e = hermitian_eig(&h, 1e-8).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 2.0]);
        assert_eq!(e.blocks, vec![0..2, 2..3]);
    }

    #[test]
    fn eig_zero_matrix_is_one_block() {
        let e = hermitian_eig(&zeros(2), 1e-8).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0, 0.0]);
        assert_eq!(e.blocks, vec![0..2]);
    }

    #[test]
    fn eig_bloch_vector_on_equator() {
        // r0 = 1, theta0 = pi/2, phi0 = 0.4: I(0) = cos(phi0) sigma_x + sin(phi0) sigma_y
        let phi: f64 = 0.4;
        let h = pauli_x().scale(phi.cos()) + pauli_y().scale(phi.sin());
        let e = hermitian_eig(&h, 1e-8).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert_eq!(e.blocks.len(), 2);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut h = diag_real(&[1.0, 2.0]);
        h[(0, 1)] = c(1e-3, 0.0);
        match hermitian_eig(&h, 1e-8) {
            Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 1e-3).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn relative_grouping_scales_with_range() {
        let blocks = group_degenerate(&[0.0, 1e-7, 1000.0], 1e-9);
        assert_eq!(blocks, vec![0..2, 2..3]);
        let blocks = group_degenerate(&[0.0, 1e-7, 1.0], 1e-9);
        assert_eq!(blocks, vec![0..1, 1..2, 2..3]);
    }

    #[test]
    fn polar_of_identity_and_unitary() {
        let p = polar_unitary(&identity(3), 1e-12).unwrap();
        assert!(max_abs_diff(&p.u, &identity(3)) < 1e-14);
        assert!(max_abs_diff(&p.r, &identity(3)) < 1e-14);

        let u = random_unitary(3, &[(0.3, 0.1), (-0.7, 0.4), (1.1, -0.2), (0.5, 0.9)]);
        let p = polar_unitary(&u, 1e-12).unwrap();
        assert!(max_abs_diff(&p.u, &u) < 1e-12);
        assert!(max_abs_diff(&p.r, &identity(3)) < 1e-12);
    }

    #[test]
    fn polar_rank_deficient_diagonal() {
        let w = diag_real(&[2.0, 0.0]);
        let p = polar_unitary(&w, 1e-12).unwrap();
        assert_eq!(p.rank, 1);
        assert!(max_abs_diff(&p.r, &w) < 1e-14);
        assert!(is_unitary(&p.u, 1e-12));
        // first column is e1; the second is only fixed up to a phase
        assert!((p.u[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(p.u[(1, 0)].norm() < 1e-14);
        assert!(p.u[(0, 1)].norm() < 1e-14);
        assert!((p.u[(1, 1)].norm() - 1.0).abs() < 1e-14);
        assert!(max_abs_diff(&(&p.r * &p.u), &w) < 1e-14);
    }

    #[test]
    fn polar_rejects_nan() {
        let mut w = identity(2);
        w[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(polar_unitary(&w, 1e-12), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        assert!(max_abs_diff(&unitary_exp(&zeros(3), 2.5).unwrap(), &identity(3)) == 0.0);
        let a = diag_real(&[0.3, -1.2]);
        let u = unitary_exp(&a, 0.7).unwrap();
        let expected = diag(&[Complex64::from_polar(1.0, 0.7 * 0.3), Complex64::from_polar(1.0, -0.7 * 1.2)]);
        assert!(max_abs_diff(&u, &expected) < 1e-14);
    }

    #[test]
    fn exp_pauli_x_pi_is_minus_identity() {
        // exp(i pi sigma_x) = cos(pi) + i sin(pi) sigma_x
        let u = unitary_exp(&pauli_x(), PI).unwrap();
        assert!(max_abs_diff(&u, &identity(2).scale(-1.0)) < 1e-14);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let mut a = zeros(2);
        a[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(unitary_exp(&a, 1.0), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigenphases_examples() {
        assert_eq!(unitary_eigenphases(&identity(4)).unwrap(), vec![0.0; 4]);

        let u = diag(&[Complex64::from_polar(1.0, PI / 3.0), Complex64::from_polar(1.0, -PI / 3.0)]);
        let p = unitary_eigenphases(&u).unwrap();
        assert!((p[0] + PI / 3.0).abs() < 1e-14 && (p[1] - PI / 3.0).abs() < 1e-14);

        // exp(i pi sigma_x / 2) = i sigma_x, eigenvalues +-i
        let u = unitary_exp(&pauli_x(), PI / 2.0).unwrap();
        let p = unitary_eigenphases(&u).unwrap();
        assert!((p[0] + PI / 2.0).abs() < 1e-12 && (p[1] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigenphases_rejects_non_unitary() {
        let u = diag_real(&[1.0, 1.1]);
        assert!(matches!(unitary_eigenphases(&u), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn wrap_phase_half_open_interval() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!(circular_distance(PI - 1e-9, -PI + 1e-9) < 3e-9);
        assert!(phase_set_distance(&[PI - 1e-9, 0.5], &[0.5, -PI + 1e-9]) < 3e-9);
    }

    fn entries() -> impl Strategy<Value = Vec<(f64, f64)>> {
        proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 16)
    }

    proptest! {
        #[test]
        fn eig_diagonalizes(e in entries(), n in 2usize..5) {
            let h = random_hermitian(n, &e);
            let d = hermitian_eig(&h, 1e-9).unwrap();
            let v = &d.vectors;
            prop_assert!(max_abs_diff(&(v.adjoint() * v), &identity(n)) < 1e-10);
            let lam = v.adjoint() * &h * v;
            let scale = d.spectral_range().max(1.0);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        prop_assert!(lam[(i, j)].norm() <= 1e-9 * scale);
                    }
                }
                prop_assert!((lam[(i, i)].re - d.eigenvalues[i]).abs() <= 1e-9 * scale);
            }
            for w in d.eigenvalues.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
        }

        #[test]
        fn polar_reconstructs(e in entries(), n in 2usize..5) {
            let w = CMatrix::from_fn(n, n, |i, j| { let (re, im) = e[(i * n + j) % e.len()]; c(re, im) });
            let p = polar_unitary(&w, 1e-12).unwrap();
            prop_assert!(unitary_deviation(&p.u) <= 1e-10);
            prop_assert!(hermitian_deviation(&p.r) <= 1e-12);
            if p.rank == n {
                prop_assert!(max_abs_diff(&(&p.r * &p.u), &w) <= 1e-10 * max_abs(&w));
            }
            let r_eig = hermitian_eig(&p.r, 1e-9).unwrap();
            prop_assert!(r_eig.eigenvalues[0] >= -1e-12);
        }

        #[test]
        fn exp_inverse(e in entries(), n in 2usize..5, s in -3.0..3.0f64) {
            let a = random_hermitian(n, &e);
            let prod = unitary_exp(&a, s).unwrap() * unitary_exp(&a, -s).unwrap();
            prop_assert!(max_abs_diff(&prod, &identity(n)) <= 1e-12);
            prop_assert!(unitary_deviation(&unitary_exp(&a, s).unwrap()) <= 1e-10);
        }

        #[test]
        fn eigenphases_conjugation_invariant(e in entries(), f in entries(), n in 2usize..5) {
            let u = random_unitary(n, &e);
            let m = random_unitary(n, &f);
            let conj = m.adjoint() * &u * &m;
            let a = unitary_eigenphases(&u).unwrap();
            let b = unitary_eigenphases(&conj).unwrap();
            prop_assert!(phase_set_distance(&a, &b) <= 1e-9);
        }
    }
}
