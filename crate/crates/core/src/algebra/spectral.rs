use nalgebra::DMatrix;

use super::linalg::{hermitian_eigen, singular_values};
use super::AlgElement;
use crate::error::{Error, Result};
use crate::C64;

fn hermitian_checked(x: &AlgElement, tol: f64) -> Result<()> {
    let r = x.hermitian_residual();
    if r > tol * x.norm().max(1.0) {
        Err(Error::NotHermitian(r))
    } else {
        Ok(())
    }
}

/// Eigenvalues with multiplicity, blockwise, sorted ascending. The input must
/// be Hermitian within `tol`; it is symmetrized before diagonalization.
pub fn spectrum(x: &AlgElement, tol: f64) -> Result<Vec<f64>> {
    hermitian_checked(x, tol)?;
    let mut vals: Vec<f64> = x.blocks().iter().flat_map(|m| hermitian_eigen(m).0).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

pub fn min_eigenvalue(x: &AlgElement, tol: f64) -> Result<f64> {
    Ok(spectrum(x, tol)?.first().copied().unwrap_or(0.0))
}

/// Hermitian with spectrum ≥ −tol.
pub fn is_positive(x: &AlgElement, tol: f64) -> bool {
    let scale = x.norm().max(1.0);
    min_eigenvalue(x, tol).map(|m| m >= -tol * scale).unwrap_or(false)
}

/// Hermitian with spectrum > tol (hence invertible).
pub fn is_strictly_positive(x: &AlgElement, tol: f64) -> bool {
    min_eigenvalue(x, tol).map(|m| m > tol).unwrap_or(false)
}

/// Apply a real function to a Hermitian element through its spectral
/// decomposition.
pub fn hermitian_function(x: &AlgElement, tol: f64, f: impl Fn(f64) -> f64) -> Result<AlgElement> {
    hermitian_checked(x, tol)?;
    let mats = x
        .blocks()
        .iter()
        .map(|m| {
            let (vals, vecs) = hermitian_eigen(m);
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                vals.len(),
                vals.iter().map(|&v| C64::new(f(v), 0.0)),
            ));
            &vecs * d * vecs.adjoint()
        })
        .collect();
    AlgElement::from_blocks(mats)
}

/// Principal square root of a positive element.
pub fn sqrt_positive(x: &AlgElement, tol: f64) -> Result<AlgElement> {
    let m = min_eigenvalue(x, tol)?;
    if m < -tol * x.norm().max(1.0) {
        return Err(Error::NotPositive(m));
    }
    hermitian_function(x, tol, |v| v.max(0.0).sqrt())
}

/// Inverse of a strictly positive element via its spectrum.
pub fn inverse_positive(x: &AlgElement, tol: f64) -> Result<AlgElement> {
    let m = min_eigenvalue(x, tol)?;
    if m <= tol {
        return Err(Error::NotPositive(m));
    }
    hermitian_function(x, tol, |v| 1.0 / v)
}

/// General inverse; fails when some block has min singular value < tol.
pub fn invert(x: &AlgElement, tol: f64) -> Result<AlgElement> {
    let mats = x
        .blocks()
        .iter()
        .map(|m| {
            let smin = singular_values(m).last().copied().unwrap_or(0.0);
            if smin < tol {
                return Err(Error::Singular(smin));
            }
            m.clone().try_inverse().ok_or(Error::Singular(smin))
        })
        .collect::<Result<Vec<_>>>()?;
    AlgElement::from_blocks(mats)
}

/// Smallest singular value over all blocks.
pub fn min_singular_value(x: &AlgElement) -> f64 {
    x.blocks().iter().filter_map(|m| singular_values(m).last().copied()).fold(f64::INFINITY, f64::min)
}
