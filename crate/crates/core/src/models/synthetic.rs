//! Rigid rotation with known eigenvectors: `H = w sigma_y` carries
//! `I(0) = diag(1, 2)` into `R(t) diag(1, 2) R(t)^dag` with
//! `R(t) = exp(-i w t sigma_y)`, and the connection is `w sigma_y`.

use std::sync::Arc;

use crate::dynamics::LindbladModel;
use crate::error::Result;
use crate::matlib::{diag_real, pauli_y, CMatrix};

pub use crate::frames::rotation_frames;

pub fn rotation_model(omega: f64) -> Result<LindbladModel> {
    let h = pauli_y().scale(omega);
    LindbladModel::closed(2, Arc::new(move |_| h.clone()))
}

pub fn rotation_invariant0() -> CMatrix {
    diag_real(&[1.0, 2.0])
}
