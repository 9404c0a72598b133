use nalgebra::DMatrix;
use serde::Serialize;

use super::WeakHopf;
use crate::algebra::linalg::null_space;
use crate::algebra::recover::{recover_matrix_units, Subalgebra, DEFAULT_SEED};
use crate::algebra::{AlgElement, LinearMap, Standardization};
use crate::error::{Error, Result};
use crate::C64;

/// Which Cartan subalgebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Target,
    Source,
}

/// `ε_t = m(i ⊗ κ)Δ`.
pub fn counit_target(w: &WeakHopf) -> LinearMap {
    let m = w.twisted_mult(w.kappa(), false) * w.delta().matrix();
    LinearMap::new(w.algebra().clone(), w.algebra().clone(), m).expect("square")
}

/// `ε_s = m(κ ⊗ i)Δ`.
pub fn counit_source(w: &WeakHopf) -> LinearMap {
    let m = w.twisted_mult(w.kappa(), true) * w.delta().matrix();
    LinearMap::new(w.algebra().clone(), w.algebra().clone(), m).expect("square")
}

/// Orthonormal basis (columns) of `A_t` or `A_s`, in the coordinates of `w`,
/// as the null space of the two defining linear conditions.
pub fn cartan_subspace(w: &WeakHopf, side: Side, tol: f64) -> DMatrix<C64> {
    let d = w.dim();
    let alg = w.algebra();
    let c1 = w.delta_one_pairs();
    let mut sys = DMatrix::zeros(2 * d * d, d);
    for c in 0..d {
        let dc = w.delta_pairs(c);
        let u = alg.unit(c);
        let (first, second) = match side {
            // Δ(1)(x⊗1) = R_x C1, (x⊗1)Δ(1) = L_x C1
            Side::Target => (w.right_mul(&u) * &c1, w.left_mul(&u) * &c1),
            // Δ(1)(1⊗x) = C1 R_xᵀ, (1⊗x)Δ(1) = C1 L_xᵀ
            Side::Source => (&c1 * w.right_mul(&u).transpose(), &c1 * w.left_mul(&u).transpose()),
        };
        let r1 = &dc - first;
        let r2 = &dc - second;
        for (k, z) in r1.iter().chain(r2.iter()).enumerate() {
            sys[(k, c)] = *z;
        }
    }
    null_space(&sys, tol)
}

/// A Cartan subalgebra with its matrix units.
///
/// `basis` is in the coordinates of the structure it was computed from;
/// `sub` lives in the standard form of that structure and is carried back
/// by `standardization.unapply`.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub side: Side,
    pub basis: DMatrix<C64>,
    pub sub: Subalgebra,
    pub standardization: Standardization,
    /// Largest distance from `ε_t(e_a)` (resp. `ε_s(e_a)`) to the subspace.
    pub counit_range_residual: f64,
}

impl CartanData {
    /// Block sizes of the recovered structure.
    pub fn blocks(&self) -> &[usize] {
        self.sub.structure().blocks()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Basis elements in the coordinates of the original structure.
    pub fn elements(&self, w: &WeakHopf) -> Vec<AlgElement> {
        (0..self.basis.ncols())
            .map(|k| AlgElement::from_coords(w.algebra(), &self.basis.column(k).into_owned()).expect("shape"))
            .collect()
    }

    /// Matrix units in the coordinates of the original structure.
    pub fn units(&self) -> Vec<AlgElement> {
        self.sub.units().iter().map(|u| self.standardization.unapply(u)).collect()
    }

    /// Distance of `x` (original coordinates) to the subspace.
    pub fn membership_residual(&self, x: &AlgElement) -> f64 {
        self.sub.membership_residual(&self.standardization.apply(x))
    }
}

fn cartan(w: &WeakHopf, side: Side, tol: f64) -> Result<CartanData> {
    let basis = cartan_subspace(w, side, tol);
    if basis.ncols() == 0 {
        return Err(Error::StructureRecoveryFailed(format!("{side:?} Cartan subalgebra is zero")));
    }
    let st = w.standardization().clone();
    let span: Vec<AlgElement> = (0..basis.ncols())
        .map(|k| st.apply(&AlgElement::from_coords(w.algebra(), &basis.column(k).into_owned()).expect("shape")))
        .collect();
    let sub = recover_matrix_units(w.algebra(), &span, tol, DEFAULT_SEED)
        .map_err(|e| Error::StructureRecoveryFailed(format!("{side:?} Cartan subalgebra: {e}")))?;
    let counit = match side {
        Side::Target => counit_target(w),
        Side::Source => counit_source(w),
    };
    let counit_range_residual = (0..w.dim())
        .map(|a| sub.membership_residual(&st.apply(&counit.apply(&w.algebra().unit(a)))))
        .fold(0.0, f64::max);
    if counit_range_residual > tol {
        return Err(Error::StructureRecoveryFailed(format!(
            "{side:?} counit leaves the Cartan subalgebra (residual {counit_range_residual:.3e})"
        )));
    }
    Ok(CartanData { side, basis, sub, standardization: st, counit_range_residual })
}

/// `A_t = {x : Δ(x) = Δ(1)(x⊗1) = (x⊗1)Δ(1)}` with its matrix units.
pub fn cartan_target(w: &WeakHopf, tol: f64) -> Result<CartanData> {
    cartan(w, Side::Target, tol)
}

/// `A_s = {x : Δ(x) = Δ(1)(1⊗x) = (1⊗x)Δ(1)}` with its matrix units.
pub fn cartan_source(w: &WeakHopf, tol: f64) -> Result<CartanData> {
    cartan(w, Side::Source, tol)
}
