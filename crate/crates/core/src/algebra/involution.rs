use super::spectral::{inverse_positive, is_strictly_positive, min_eigenvalue, sqrt_positive};
use super::{AlgElement, BlockAlgebra, LinearMap};
use crate::error::{Error, Result};

/// The involution `x ↦ g x* g⁻¹` for a strictly positive gauge `g`.
/// `g = 1` is the standard involution.
#[derive(Clone, Debug)]
pub struct GaugedInvolution {
    algebra: BlockAlgebra,
    gauge: AlgElement,
    gauge_inv: AlgElement,
    standard: bool,
}

impl GaugedInvolution {
    pub fn standard(alg: &BlockAlgebra) -> Self {
        Self { algebra: alg.clone(), gauge: alg.one(), gauge_inv: alg.one(), standard: true }
    }

    pub fn new(alg: &BlockAlgebra, gauge: AlgElement, tol: f64) -> Result<Self> {
        alg.check_element(&gauge)?;
        if !is_strictly_positive(&gauge, tol) {
            return Err(Error::NotPositive(min_eigenvalue(&gauge, tol).unwrap_or(f64::NAN)));
        }
        let gauge = gauge.hermitian_part();
        let gauge_inv = inverse_positive(&gauge, tol)?;
        let standard = gauge.distance(&alg.one()) == 0.0;
        Ok(Self { algebra: alg.clone(), gauge, gauge_inv, standard })
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn gauge(&self) -> &AlgElement {
        &self.gauge
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn adjoint(&self, x: &AlgElement) -> AlgElement {
        if self.standard {
            x.adjoint()
        } else {
            &(&self.gauge * &x.adjoint()) * &self.gauge_inv
        }
    }

    /// The isomorphism onto the standard structure.
    pub fn standardize(&self, tol: f64) -> Result<Standardization> {
        Standardization::new(&self.algebra, &self.gauge, tol)
    }
}

/// `Φ(x) = g^{-1/2} x g^{1/2}`: a unital algebra automorphism carrying the
/// gauged involution to the standard one, `Φ(x^{*_g}) = Φ(x)^*`.
#[derive(Clone, Debug)]
pub struct Standardization {
    pub forward: LinearMap,
    pub backward: LinearMap,
    pub half: AlgElement,
    pub half_inv: AlgElement,
}

impl Standardization {
    pub fn new(alg: &BlockAlgebra, gauge: &AlgElement, tol: f64) -> Result<Self> {
        if !is_strictly_positive(gauge, tol) {
            return Err(Error::NotPositive(min_eigenvalue(gauge, tol).unwrap_or(f64::NAN)));
        }
        let half = sqrt_positive(gauge, tol)?;
        let half_inv = inverse_positive(&half, tol)?;
        Ok(Self {
            forward: LinearMap::sandwich(alg, &half_inv, &half),
            backward: LinearMap::sandwich(alg, &half, &half_inv),
            half,
            half_inv,
        })
    }

    pub fn identity(alg: &BlockAlgebra) -> Self {
        Self {
            forward: LinearMap::identity(alg),
            backward: LinearMap::identity(alg),
            half: alg.one(),
            half_inv: alg.one(),
        }
    }

    pub fn apply(&self, x: &AlgElement) -> AlgElement {
        &(&self.half_inv * x) * &self.half
    }

    pub fn unapply(&self, x: &AlgElement) -> AlgElement {
        &(&self.half * x) * &self.half_inv
    }
}
