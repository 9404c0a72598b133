use nalgebra::{DMatrix, DVector};

use super::{AlgElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::C64;

/// A linear map between block algebras, stored as a dense matrix over the
/// canonical matrix-unit bases: column `a` holds the coordinates of the image
/// of `e_a`. Functionals use [`BlockAlgebra::scalars`] as codomain.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    domain: BlockAlgebra,
    codomain: BlockAlgebra,
    matrix: DMatrix<C64>,
}

impl LinearMap {
    pub fn new(domain: BlockAlgebra, codomain: BlockAlgebra, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "matrix {:?} for map of shape {}x{}",
                matrix.shape(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(Self { domain, codomain, matrix })
    }

    pub fn identity(alg: &BlockAlgebra) -> Self {
        Self { domain: alg.clone(), codomain: alg.clone(), matrix: DMatrix::identity(alg.dim(), alg.dim()) }
    }

    /// Tabulate a map from its values on the canonical basis.
    pub fn from_fn(domain: &BlockAlgebra, codomain: &BlockAlgebra, mut f: impl FnMut(usize) -> DVector<C64>) -> Self {
        let cols: Vec<DVector<C64>> = (0..domain.dim()).map(&mut f).collect();
        let matrix = DMatrix::from_columns(&cols);
        debug_assert_eq!(matrix.nrows(), codomain.dim());
        Self { domain: domain.clone(), codomain: codomain.clone(), matrix }
    }

    /// A linear functional given by its values on the canonical basis.
    pub fn functional(domain: &BlockAlgebra, values: &[C64]) -> Result<Self> {
        Self::new(domain.clone(), BlockAlgebra::scalars(), DMatrix::from_row_slice(1, values.len(), values))
    }

    /// `x ↦ a x`.
    pub fn left_mul(alg: &BlockAlgebra, a: &AlgElement) -> Self {
        Self::from_fn(alg, alg, |k| (a * &alg.unit(k)).coords())
    }

    /// `x ↦ x a`.
    pub fn right_mul(alg: &BlockAlgebra, a: &AlgElement) -> Self {
        Self::from_fn(alg, alg, |k| (&alg.unit(k) * a).coords())
    }

    /// `x ↦ a x b`.
    pub fn sandwich(alg: &BlockAlgebra, a: &AlgElement, b: &AlgElement) -> Self {
        Self::from_fn(alg, alg, |k| (&(a * &alg.unit(k)) * b).coords())
    }

    pub fn domain(&self) -> &BlockAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &BlockAlgebra {
        &self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn apply(&self, x: &AlgElement) -> AlgElement {
        AlgElement::from_coords(&self.codomain, &(&self.matrix * x.coords())).expect("codomain shape")
    }

    pub fn try_apply(&self, x: &AlgElement) -> Result<AlgElement> {
        self.domain.check_element(x)?;
        Ok(self.apply(x))
    }

    pub fn apply_coords(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }

    /// Value of a functional.
    pub fn eval(&self, x: &AlgElement) -> C64 {
        debug_assert_eq!(self.codomain.dim(), 1);
        (self.matrix.row(0) * x.coords())[(0, 0)]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if !other.codomain.same_shape(&self.domain) {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.domain, self.codomain, other.domain, other.codomain
            )));
        }
        Ok(LinearMap {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn distance(&self, other: &LinearMap) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn try_inverse(&self) -> Result<LinearMap> {
        let n = self.matrix.nrows();
        if n != self.matrix.ncols() {
            return Err(Error::ShapeMismatch("non-square map has no inverse".into()));
        }
        let sv = super::linalg::singular_values(&self.matrix);
        let smin = sv.last().copied().unwrap_or(0.0);
        if smin <= 1e-12 * sv.first().copied().unwrap_or(1.0).max(1.0) {
            return Err(Error::Singular(smin));
        }
        let inv = self.matrix.clone().try_inverse().ok_or(Error::Singular(smin))?;
        Ok(LinearMap { domain: self.codomain.clone(), codomain: self.domain.clone(), matrix: inv })
    }
}
