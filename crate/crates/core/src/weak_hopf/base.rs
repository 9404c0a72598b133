use nalgebra::DMatrix;

use super::cartan::{cartan_target, CartanData};
use super::{rel, StructureReport, WeakHopf};
use crate::algebra::{AlgElement, TensorLayout};
use crate::error::Result;
use crate::separating::separating_residuals;
use crate::C64;

/// `f = (κ ⊗ i)Δ(1)` written in the abstract coordinates of the recovered
/// target Cartan subalgebra.
#[derive(Clone, Debug)]
pub struct BaseSeparating {
    /// Element of `N ⊗ N`, `N` the abstract block structure of `A_t`.
    pub f: AlgElement,
    /// How far `f` is from `A_t ⊗ A_t` before the coordinate change.
    pub outside_residual: f64,
}

/// Pair matrix of `(κ ⊗ i)Δ(1)` in the coordinates of the standard form.
pub(crate) fn f_pairs(s: &WeakHopf) -> DMatrix<C64> {
    s.kappa().matrix() * s.delta_one_pairs()
}

/// Express `(κ ⊗ i)Δ(1)` in `A_t ⊗ A_t` coordinates. `base` must come from
/// `cartan_target(w)`.
pub fn base_separating_element(w: &WeakHopf, base: &CartanData) -> BaseSeparating {
    let s = w.standard_form();
    let full = f_pairs(&s);
    let p = base.sub.coordinate_map();
    let e = base.sub.embedding();
    let ft = p * &full * p.transpose();
    let back = e * &ft * e.transpose();
    let outside_residual = rel((&full - back).norm(), full.norm());
    let f = TensorLayout::square(base.sub.structure()).element_from_pairs(&ft);
    BaseSeparating { f, outside_residual }
}

/// Check that `(κ ⊗ i)Δ(1)` is a separating element of `A_t`.
pub fn check_f_separating(w: &WeakHopf, tol: f64) -> Result<StructureReport> {
    let base = cartan_target(w, tol)?;
    let bs = base_separating_element(w, &base);
    let sep = separating_residuals(base.sub.structure(), &bs.f, tol);
    Ok(StructureReport::new(tol)
        .with("f_in_base", bs.outside_residual)
        .with("flip_relation", sep.flip_relation)
        .with("unit", sep.unit))
}
