//! Separating elements of a finite-dimensional C*-algebra `N`.
//!
//! Elements of `N ⊗ N` live in the block algebra `tensor(N, N)`. Products
//! "in `Nᵒ ⊗ N`" transpose the first leg, multiply, and transpose back
//! ([`TensorLayout::opposite_mul`]).

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::spectral::{inverse_positive, is_strictly_positive, min_eigenvalue, sqrt_positive};
use crate::algebra::{AlgElement, BlockAlgebra, LinearMap, TensorLayout};
use crate::error::{Error, Result};
use crate::C64;

fn rel(diff: f64, reference: f64) -> f64 {
    diff / reference.max(1.0)
}

/// The multiplication map `m: N ⊗ N → N`, `x ⊗ y ↦ xy`.
pub fn mult_map(n: &BlockAlgebra) -> LinearMap {
    let l = TensorLayout::square(n);
    let mut m = DMatrix::zeros(n.dim(), l.product().dim());
    for a in 0..n.dim() {
        for b in 0..n.dim() {
            if let Some(c) = n.unit_product(a, b) {
                m[(c, l.index(a, b))] = C64::new(1.0, 0.0);
            }
        }
    }
    LinearMap::new(l.product().clone(), n.clone(), m).expect("shape")
}

/// `m(x)` computed from the pair coefficients of `x`.
pub fn multiply(n: &BlockAlgebra, x: &AlgElement) -> AlgElement {
    let l = TensorLayout::square(n);
    let c = l.element_to_pairs(x);
    let mut out = n.zero();
    for a in 0..n.dim() {
        for b in 0..n.dim() {
            if let Some(k) = n.unit_product(a, b) {
                let (g, i, j) = n.unit_position(k);
                out.mats[g][(i, j)] += c[(a, b)];
            }
        }
    }
    out
}

/// A separating element `f` of `N` together with its gauge `g`, so that
/// `f = (1 ⊗ g)e` in `Nᵒ ⊗ N`.
#[derive(Clone, Debug)]
pub struct SeparatingElement {
    pub algebra: BlockAlgebra,
    pub value: AlgElement,
    pub gauge: AlgElement,
}

/// `e = Σ_γ Σ_{i,j} (1/n_γ) e^γ_{i,j}ᵒ ⊗ e^γ_{j,i}`.
pub fn symmetric_e_value(n: &BlockAlgebra) -> AlgElement {
    let l = TensorLayout::square(n);
    let mut c = DMatrix::zeros(n.dim(), n.dim());
    for (g, &size) in n.blocks().iter().enumerate() {
        for i in 0..size {
            for j in 0..size {
                c[(n.index(g, i, j), n.index(g, j, i))] = C64::new(1.0 / size as f64, 0.0);
            }
        }
    }
    l.element_from_pairs(&c)
}

/// The symmetric separating element, gauge 1.
pub fn symmetric_e(n: &BlockAlgebra) -> SeparatingElement {
    SeparatingElement { algebra: n.clone(), value: symmetric_e_value(n), gauge: n.one() }
}

/// Residuals of the two defining conditions of a separating element.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatingReport {
    /// `max_a ‖f(aᵒ ⊗ 1) − f(1 ⊗ a)‖` over matrix units `a`.
    pub flip_relation: f64,
    /// `‖m(f) − 1‖`.
    pub unit: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn separating_residuals(n: &BlockAlgebra, f: &AlgElement, tol: f64) -> SeparatingReport {
    let l = TensorLayout::square(n);
    let one = n.one();
    let scale = f.norm();
    let flip_relation = (0..n.dim())
        .map(|a| {
            let u = n.unit(a);
            let left = l.opposite_mul(f, &l.element(&u, &one));
            let right = l.opposite_mul(f, &l.element(&one, &u));
            rel(left.distance(&right), scale)
        })
        .fold(0.0, f64::max);
    let unit = rel(multiply(n, f).distance(&one), one.norm());
    SeparatingReport { flip_relation, unit, tol, pass: flip_relation <= tol && unit <= tol }
}

pub fn is_separating(n: &BlockAlgebra, f: &AlgElement, tol: f64) -> bool {
    separating_residuals(n, f, tol).pass
}

/// `(1 ⊗ g)e` without checking the normalization of `g`.
pub fn gauge_times_e(n: &BlockAlgebra, g: &AlgElement) -> AlgElement {
    let l = TensorLayout::square(n);
    l.opposite_mul(&l.element(&n.one(), g), &symmetric_e_value(n))
}

/// `‖E_Z(g) − 1‖`.
pub fn gauge_normalization_residual(n: &BlockAlgebra, g: &AlgElement) -> f64 {
    g.center_expectation().distance(&n.one())
}

/// `f = (1 ⊗ g)e` for a gauge with `E_Z(g) = 1`.
pub fn separating_from_gauge(n: &BlockAlgebra, g: &AlgElement, tol: f64) -> Result<SeparatingElement> {
    n.check_element(g)?;
    let r = gauge_normalization_residual(n, g);
    if r > tol * n.one().norm().max(1.0) {
        return Err(Error::GaugeNotNormalized(r));
    }
    Ok(SeparatingElement { algebra: n.clone(), value: gauge_times_e(n, g), gauge: g.clone() })
}

/// `Σ f′_i f_i` for `f = Σ f_i ⊗ f′_i` read off the canonical expansion.
pub fn gauge_formula(n: &BlockAlgebra, f: &AlgElement) -> AlgElement {
    let l = TensorLayout::square(n);
    let c = l.element_to_pairs(f);
    let mut g = n.zero();
    for a in 0..n.dim() {
        for b in 0..n.dim() {
            if let Some(k) = n.unit_product(b, a) {
                let (blk, i, j) = n.unit_position(k);
                g.mats[blk][(i, j)] += c[(a, b)];
            }
        }
    }
    g
}

/// Recover the gauge of a separating element.
pub fn gauge_from_separating(n: &BlockAlgebra, f: &AlgElement, tol: f64) -> Result<AlgElement> {
    let report = separating_residuals(n, f, tol);
    if !report.pass {
        return Err(Error::NotSeparating(format!(
            "flip relation residual {:.3e}, m(f) residual {:.3e}",
            report.flip_relation, report.unit
        )));
    }
    Ok(gauge_formula(n, f))
}

/// Residuals of the projection characterizations, all in `Nᵒ ⊗ N`.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionReport {
    /// `‖fe − f‖`
    pub fe_equals_f: f64,
    /// `‖ef − e‖`
    pub ef_equals_e: f64,
    /// `‖f² − f‖`
    pub idempotent: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn check_projection_characterizations(n: &BlockAlgebra, f: &AlgElement, tol: f64) -> ProjectionReport {
    let l = TensorLayout::square(n);
    let e = symmetric_e_value(n);
    let fe_equals_f = rel(l.opposite_mul(f, &e).distance(f), f.norm());
    let ef_equals_e = rel(l.opposite_mul(&e, f).distance(&e), e.norm());
    let idempotent = rel(l.opposite_mul(f, f).distance(f), f.norm());
    let pass = fe_equals_f <= tol && ef_equals_e <= tol && idempotent <= tol;
    ProjectionReport { fe_equals_f, ef_equals_e, idempotent, tol, pass }
}

/// Is `f` an orthogonal projection, with the direction of `e`, of the
/// gauged algebra `(Nᵒ)_{(g^{1/2})ᵒ} ⊗ N_{g^{1/2}}`?
///
/// Under the transpose on the first leg this algebra is `N ⊗ N` with the
/// gauge `θ(g^{1/2}) ⊗ g^{1/2}`, where `θ` is the blockwise transpose.
pub fn is_orthogonal_in_gauged(n: &BlockAlgebra, f: &AlgElement, g: &AlgElement, tol: f64) -> Result<bool> {
    n.check_element(g)?;
    if !is_strictly_positive(g, tol) {
        return Err(Error::NotPositive(min_eigenvalue(g, tol).unwrap_or(f64::NAN)));
    }
    let r = gauge_normalization_residual(n, g);
    if r > tol * n.one().norm().max(1.0) {
        return Err(Error::GaugeNotNormalized(r));
    }
    if !check_projection_characterizations(n, f, tol).pass {
        return Ok(false);
    }
    Ok(gauged_adjoint_residual(n, f, g, tol)? <= tol)
}

/// `‖f^{*_h} − f‖ / max(1, ‖f‖)` for the gauge `h` of
/// [`is_orthogonal_in_gauged`].
pub fn gauged_adjoint_residual(n: &BlockAlgebra, f: &AlgElement, g: &AlgElement, tol: f64) -> Result<f64> {
    let l = TensorLayout::square(n);
    let half = sqrt_positive(g, tol)?;
    let half_inv = inverse_positive(&half, tol)?;
    let h = l.element(&half.opposite_embed(), &half);
    let h_inv = l.element(&half_inv.opposite_embed(), &half_inv);
    let ft = l.opposite_left(f);
    let adj = &(&h * &ft.adjoint()) * &h_inv;
    Ok(rel(adj.distance(&ft), f.norm()))
}

/// Norm of the map `x ↦ e(1 ⊗ x)` restricted to the unit sphere, reported
/// as its smallest singular value (positive iff the map is injective).
pub fn e_injectivity_margin(n: &BlockAlgebra) -> f64 {
    let l = TensorLayout::square(n);
    let e = symmetric_e_value(n);
    let cols: Vec<_> = (0..n.dim()).map(|a| l.opposite_mul(&e, &l.element(&n.one(), &n.unit(a))).coords()).collect();
    let m = DMatrix::from_columns(&cols);
    crate::algebra::linalg::singular_values(&m).last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> BlockAlgebra {
        BlockAlgebra::matrix(2)
    }

    #[test]
    fn mult_map_examples() {
        let n = m2();
        let l = TensorLayout::square(&n);
        let one = l.element(&n.one(), &n.one());
        assert_eq!(mult_map(&n).apply(&one), n.one());
        let x = &l.element(&n.unit(0), &n.unit(1)) + &l.element(&n.unit(3), &n.unit(2));
        assert_eq!(mult_map(&n).apply(&x), &n.unit(1) + &n.unit(2));
        assert_eq!(multiply(&n, &x), mult_map(&n).apply(&x));
    }

    #[test]
    fn e_in_m2_matches_explicit_sum() {
        let n = m2();
        let l = TensorLayout::square(&n);
        let u = |i: usize, j: usize| n.unit(n.index(0, i, j));
        let expect = (&(&l.element(&u(0, 0), &u(0, 0)) + &l.element(&u(0, 1), &u(1, 0)))
            + &(&l.element(&u(1, 0), &u(0, 1)) + &l.element(&u(1, 1), &u(1, 1))))
            .scale_re(0.5);
        assert!(symmetric_e_value(&n).distance(&expect) < 1e-15);
        let c = BlockAlgebra::scalars();
        assert_eq!(symmetric_e_value(&c), TensorLayout::square(&c).element(&c.one(), &c.one()));
    }

    #[test]
    fn one_tensor_one_is_not_separating() {
        let n = m2();
        let l = TensorLayout::square(&n);
        let r = separating_residuals(&n, &l.element(&n.one(), &n.one()), 1e-10);
        assert!(!r.pass);
        assert!(r.flip_relation > 0.1);
        assert!(r.unit < 1e-15);
    }

    #[test]
    fn non_invertible_gauge() {
        let n = m2();
        let l = TensorLayout::square(&n);
        let g = n.unit(0).scale_re(2.0);
        let f = separating_from_gauge(&n, &g, 1e-10).unwrap().value;
        let expect = &l.element(&n.unit(0), &n.unit(0)) + &l.element(&n.unit(2), &n.unit(1));
        assert!(f.distance(&expect) < 1e-15);
        assert!(is_separating(&n, &f, 1e-10));
        assert!(gauge_from_separating(&n, &f, 1e-10).unwrap().distance(&g) < 1e-15);
        let p = check_projection_characterizations(&n, &f, 1e-10);
        assert!(p.pass);
        assert!(f.adjoint().distance(&f) > 0.1);
    }

    #[test]
    fn half_e_fails_idempotence() {
        let n = m2();
        let f = symmetric_e_value(&n).scale_re(0.5);
        let p = check_projection_characterizations(&n, &f, 1e-10);
        assert!(!p.pass);
        assert!(p.idempotent > 0.1);
    }

    #[test]
    fn unnormalized_gauge_rejected() {
        let n = m2();
        assert!(matches!(separating_from_gauge(&n, &n.unit(0), 1e-10), Err(Error::GaugeNotNormalized(_))));
        let l = TensorLayout::square(&n);
        assert!(matches!(
            gauge_from_separating(&n, &l.element(&n.one(), &n.one()), 1e-10),
            Err(Error::NotSeparating(_))
        ));
    }

    #[test]
    fn orthogonality_under_gauge() {
        let n = m2();
        let g = AlgElement::from_real_diagonal(&n, &[1.5, 0.5]).unwrap();
        let f = separating_from_gauge(&n, &g, 1e-10).unwrap().value;
        assert!(is_orthogonal_in_gauged(&n, &f, &g, 1e-10).unwrap());
        assert!(!is_orthogonal_in_gauged(&n, &symmetric_e_value(&n), &g, 1e-10).unwrap());
        assert!(is_orthogonal_in_gauged(&n, &symmetric_e_value(&n), &n.one(), 1e-10).unwrap());
        let bad = AlgElement::from_real_diagonal(&n, &[2.0, 0.0]).unwrap();
        assert!(matches!(is_orthogonal_in_gauged(&n, &f, &bad, 1e-10), Err(Error::NotPositive(_))));
    }

    #[test]
    fn e_injective() {
        for blocks in [vec![1], vec![2], vec![2, 1], vec![1, 1]] {
            let n = BlockAlgebra::new(blocks, "N").unwrap();
            assert!(e_injectivity_margin(&n) > 1e-3);
        }
    }
}
