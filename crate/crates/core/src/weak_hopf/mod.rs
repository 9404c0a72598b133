//! Weak Hopf C*-algebras: the structure itself, the axiom checker, Cartan
//! subalgebras, target and source counits, and Haar structures.

mod axioms;
mod base;
mod cartan;
mod haar;
mod report;

use nalgebra::{DMatrix, DVector};

use crate::algebra::{AlgElement, BlockAlgebra, GaugedInvolution, LinearMap, Standardization, TensorLayout};
use crate::error::{Error, Result};
use crate::C64;

pub use axioms::{check_axioms, AXIOM_NAMES};
pub use base::{base_separating_element, check_f_separating, BaseSeparating};
pub use cartan::{cartan_source, cartan_subspace, cartan_target, counit_source, counit_target, CartanData, Side};
pub use haar::{antipode_inverse, haar_measure, haar_projection, is_weak_kac, HaarMeasure, HaarProjection, WeakKac};
pub use report::{Residual, StructureReport};

/// A finite-dimensional algebra with coproduct `delta`, antipode `kappa`,
/// counit `eps` and an involution `x ↦ g x* g⁻¹`.
///
/// Construction only checks shapes; [`check_axioms`] decides whether the
/// data is a weak Hopf C*-algebra.
#[derive(Clone, Debug)]
pub struct WeakHopf {
    algebra: BlockAlgebra,
    involution: GaugedInvolution,
    standardization: Standardization,
    layout: TensorLayout,
    delta: LinearMap,
    kappa: LinearMap,
    eps: LinearMap,
}

impl WeakHopf {
    /// Structure with the standard involution.
    pub fn new(algebra: BlockAlgebra, delta: DMatrix<C64>, kappa: DMatrix<C64>, eps: DVector<C64>) -> Result<Self> {
        let involution = GaugedInvolution::standard(&algebra);
        let standardization = Standardization::identity(&algebra);
        Self::assemble(algebra, involution, standardization, delta, kappa, eps)
    }

    /// Structure with the involution `x ↦ g x* g⁻¹`.
    pub fn with_gauge(
        algebra: BlockAlgebra,
        gauge: AlgElement,
        delta: DMatrix<C64>,
        kappa: DMatrix<C64>,
        eps: DVector<C64>,
        tol: f64,
    ) -> Result<Self> {
        let involution = GaugedInvolution::new(&algebra, gauge, tol)?;
        let standardization =
            if involution.is_standard() { Standardization::identity(&algebra) } else { involution.standardize(tol)? };
        Self::assemble(algebra, involution, standardization, delta, kappa, eps)
    }

    fn assemble(
        algebra: BlockAlgebra,
        involution: GaugedInvolution,
        standardization: Standardization,
        delta: DMatrix<C64>,
        kappa: DMatrix<C64>,
        eps: DVector<C64>,
    ) -> Result<Self> {
        let layout = TensorLayout::square(&algebra);
        if eps.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!(
                "counit of length {} for dimension {}",
                eps.len(),
                algebra.dim()
            )));
        }
        let delta = LinearMap::new(algebra.clone(), layout.product().clone(), delta)?;
        let kappa = LinearMap::new(algebra.clone(), algebra.clone(), kappa)?;
        let eps = LinearMap::new(
            algebra.clone(),
            BlockAlgebra::scalars(),
            DMatrix::from_row_slice(1, eps.len(), eps.as_slice()),
        )?;
        Ok(Self { algebra, involution, standardization, layout, delta, kappa, eps })
    }

    /// Same algebra and involution, new structure maps.
    pub fn with_maps(&self, delta: DMatrix<C64>, kappa: DMatrix<C64>, eps: DVector<C64>) -> Result<Self> {
        Self::assemble(self.algebra.clone(), self.involution.clone(), self.standardization.clone(), delta, kappa, eps)
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn involution(&self) -> &GaugedInvolution {
        &self.involution
    }

    pub fn gauge(&self) -> &AlgElement {
        self.involution.gauge()
    }

    pub fn is_standard(&self) -> bool {
        self.involution.is_standard()
    }

    /// The isomorphism `x ↦ g^{-1/2} x g^{1/2}` onto the standard structure.
    pub fn standardization(&self) -> &Standardization {
        &self.standardization
    }

    pub fn layout(&self) -> &TensorLayout {
        &self.layout
    }

    pub fn delta(&self) -> &LinearMap {
        &self.delta
    }

    pub fn kappa(&self) -> &LinearMap {
        &self.kappa
    }

    pub fn eps(&self) -> &LinearMap {
        &self.eps
    }

    /// Counit values on the canonical basis.
    pub fn eps_vector(&self) -> DVector<C64> {
        self.eps.matrix().row(0).transpose()
    }

    pub fn adjoint(&self, x: &AlgElement) -> AlgElement {
        self.involution.adjoint(x)
    }

    pub fn coproduct(&self, x: &AlgElement) -> AlgElement {
        self.delta.apply(x)
    }

    pub fn antipode(&self, x: &AlgElement) -> AlgElement {
        self.kappa.apply(x)
    }

    pub fn counit(&self, x: &AlgElement) -> C64 {
        self.eps.eval(x)
    }

    /// Pair-coefficient matrix of `Δ(e_c)`.
    pub fn delta_pairs(&self, c: usize) -> DMatrix<C64> {
        self.layout.to_pairs(&self.delta.matrix().column(c).into_owned())
    }

    /// Pair-coefficient matrix of `Δ(1)`.
    pub fn delta_one_pairs(&self) -> DMatrix<C64> {
        self.layout.to_pairs(&(self.delta.matrix() * self.algebra.one().coords()))
    }

    /// `Δ(1)` as an element of `A ⊗ A`.
    pub fn delta_one(&self) -> AlgElement {
        self.coproduct(&self.algebra.one())
    }

    /// The same structure transported by the standardization, so that its
    /// involution is the standard one. Returns a clone when already standard.
    pub fn standard_form(&self) -> WeakHopf {
        if self.is_standard() {
            return self.clone();
        }
        let fwd = self.standardization.forward.matrix();
        let bwd = self.standardization.backward.matrix();
        let d = self.dim();
        let pulled = self.delta.matrix() * bwd;
        let mut delta = DMatrix::zeros(self.layout.product().dim(), d);
        for c in 0..d {
            let pairs = self.layout.to_pairs(&pulled.column(c).into_owned());
            delta.set_column(c, &self.layout.from_pairs(&(fwd * pairs * fwd.transpose())));
        }
        let kappa = fwd * self.kappa.matrix() * bwd;
        let eps = (self.eps.matrix() * bwd).row(0).transpose();
        WeakHopf::new(self.algebra.clone(), delta, kappa, eps).expect("shapes preserved")
    }

    /// Left multiplication by `x` as a matrix.
    pub(crate) fn left_mul(&self, x: &AlgElement) -> DMatrix<C64> {
        LinearMap::left_mul(&self.algebra, x).into_matrix()
    }

    /// Right multiplication by `x` as a matrix.
    pub(crate) fn right_mul(&self, x: &AlgElement) -> DMatrix<C64> {
        LinearMap::right_mul(&self.algebra, x).into_matrix()
    }

    /// `d × d²` matrix sending `e_a ⊗ e_b` (canonical product index) to
    /// `f(e_a) e_b` when `on_left` and `e_a f(e_b)` otherwise.
    pub(crate) fn twisted_mult(&self, map: &LinearMap, on_left: bool) -> DMatrix<C64> {
        let d = self.dim();
        let images: Vec<AlgElement> = (0..d).map(|a| map.apply(&self.algebra.unit(a))).collect();
        let mut m = DMatrix::zeros(d, d * d);
        for a in 0..d {
            for b in 0..d {
                let v = if on_left { &images[a] * &self.algebra.unit(b) } else { &self.algebra.unit(a) * &images[b] };
                m.set_column(self.layout.index(a, b), &v.coords());
            }
        }
        m
    }
}

/// `diff / max(1, reference)`.
pub(crate) fn rel(diff: f64, reference: f64) -> f64 {
    diff / reference.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::pair_groupoid_wha;

    #[test]
    fn shape_mismatch_rejected() {
        let m2 = BlockAlgebra::matrix(2);
        let r = WeakHopf::new(m2.clone(), DMatrix::zeros(16, 4), DMatrix::zeros(4, 4), DVector::zeros(3));
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
        let r = WeakHopf::new(m2, DMatrix::zeros(15, 4), DMatrix::zeros(4, 4), DVector::zeros(4));
        assert!(r.is_err());
    }

    #[test]
    fn standard_form_of_standard_is_identity() {
        let w = pair_groupoid_wha(2).unwrap();
        let s = w.standard_form();
        assert_eq!(s.delta().matrix(), w.delta().matrix());
    }

    #[test]
    fn pair_coefficients_of_delta() {
        let w = pair_groupoid_wha(2).unwrap();
        let c = w.delta_pairs(1);
        assert_eq!(c[(1, 1)], C64::new(1.0, 0.0));
        assert_eq!(c.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }
}
