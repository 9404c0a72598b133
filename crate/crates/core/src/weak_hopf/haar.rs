use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::cartan::counit_target;
use super::{rel, StructureReport, WeakHopf};
use crate::algebra::linalg::{hermitian_eigen, lstsq, LstsqSolution};
use crate::algebra::{AlgElement, LinearMap};
use crate::error::{Error, Result};
use crate::C64;

/// Solve an affine system whose solution must be unique.
fn unique_solution(a: &DMatrix<C64>, b: &DVector<C64>, tol: f64) -> Result<LstsqSolution> {
    let sol = lstsq(a, b, tol);
    if sol.nullity() > 0 {
        return Err(Error::NonUniqueSolution(sol.nullity()));
    }
    if sol.residual > tol * b.norm().max(1.0) {
        return Err(Error::NoSolution(sol.residual));
    }
    Ok(sol)
}

fn stack(blocks: &[DMatrix<C64>], cols: usize) -> DMatrix<C64> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        m.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    m
}

/// The Haar projection with the residuals of its characterization.
#[derive(Clone, Debug)]
pub struct HaarProjection {
    pub p: AlgElement,
    pub report: StructureReport,
}

/// Solve `κ(p) = p`, `ap = ε_t(a)p` for every basis `a`, `ε_t(p) = 1`.
///
/// Fails with `NonUniqueSolution` or `NoSolution` when the system is not
/// uniquely solvable, and with `PostconditionViolated` when the solution is
/// not a projection for the structure's involution.
pub fn haar_projection(w: &WeakHopf, tol: f64) -> Result<HaarProjection> {
    let alg = w.algebra();
    let d = alg.dim();
    let k = w.kappa().matrix();
    let et = counit_target(w);
    let eye = DMatrix::<C64>::identity(d, d);
    let mut blocks = vec![k - &eye];
    for a in 0..d {
        let u = alg.unit(a);
        blocks.push(w.left_mul(&u) - w.left_mul(&et.apply(&u)));
    }
    blocks.push(et.matrix().clone());
    let sys = stack(&blocks, d);
    let mut rhs = DVector::zeros(sys.nrows());
    let one = alg.one().coords();
    rhs.rows_mut(sys.nrows() - d, d).copy_from(&one);
    let sol = unique_solution(&sys, &rhs, tol)?;
    let p = AlgElement::from_coords(alg, &sol.x)?;

    let mut report = StructureReport::new(tol);
    report.push("kappa_fixed", rel(w.antipode(&p).distance(&p), p.norm()));
    let absorb = (0..d)
        .map(|a| {
            let u = alg.unit(a);
            let lhs = &u * &p;
            rel(lhs.distance(&(&et.apply(&u) * &p)), p.norm())
        })
        .fold(0.0, f64::max);
    report.push("left_absorption", absorb);
    report.push("target_counit_unit", rel(et.apply(&p).distance(&alg.one()), alg.one().norm()));
    report.push("idempotent", rel((&p * &p).distance(&p), p.norm()));
    report.push("self_adjoint", rel(w.adjoint(&p).distance(&p), p.norm()));
    if !report.pass {
        return Err(Error::PostconditionViolated(format!("Haar projection fails {:?}", report.failing())));
    }
    Ok(HaarProjection { p, report })
}

/// The normalized Haar measure with the residuals of its characterization.
#[derive(Clone, Debug)]
pub struct HaarMeasure {
    pub phi: LinearMap,
    pub report: StructureReport,
    /// Smallest eigenvalue of the Gram form `φ(x* y)` in standardized
    /// coordinates; faithfulness means this is positive.
    pub gram_min_eigenvalue: f64,
}

/// Solve `φ∘κ = φ`, `(i⊗φ)Δ(1) = 1` and
/// `(i⊗φ)((1⊗y)Δ(x)) = κ((i⊗φ)(Δ(y)(1⊗x)))` for basis pairs, then verify
/// that `φ` is faithful and positive.
pub fn haar_measure(w: &WeakHopf, tol: f64) -> Result<HaarMeasure> {
    let alg = w.algebra();
    let d = alg.dim();
    let k = w.kappa().matrix();
    let c1 = w.delta_one_pairs();
    let pairs: Vec<DMatrix<C64>> = (0..d).map(|c| w.delta_pairs(c)).collect();
    let lt: Vec<DMatrix<C64>> = alg.basis().map(|u| w.left_mul(&u).transpose()).collect();
    let rt: Vec<DMatrix<C64>> = alg.basis().map(|u| w.right_mul(&u).transpose()).collect();
    let eye = DMatrix::<C64>::identity(d, d);
    let mut blocks = vec![k.transpose() - &eye, c1.clone()];
    for x in 0..d {
        for y in 0..d {
            blocks.push(&pairs[x] * &lt[y] - k * &pairs[y] * &rt[x]);
        }
    }
    let sys = stack(&blocks, d);
    let mut rhs = DVector::zeros(sys.nrows());
    rhs.rows_mut(d, d).copy_from(&alg.one().coords());
    let sol = unique_solution(&sys, &rhs, tol)?;
    let values = sol.x;
    let phi =
        LinearMap::new(alg.clone(), crate::BlockAlgebra::scalars(), DMatrix::from_row_slice(1, d, values.as_slice()))?;

    let mut report = StructureReport::new(tol);
    report.push("kappa_invariant", rel((k.transpose() * &values - &values).norm(), values.norm()));
    report.push("delta_one_normalized", (&c1 * &values - alg.one().coords()).norm());
    let mut worst = 0.0f64;
    for x in 0..d {
        for y in 0..d {
            let r = (&pairs[x] * &lt[y] - k * &pairs[y] * &rt[x]) * &values;
            worst = worst.max(rel(r.norm(), values.norm()));
        }
    }
    report.push("strong_invariance", worst);

    // Positivity and faithfulness for the structure's own involution.
    let std_values = w.standardization().backward.matrix().transpose() * &values;
    let gram = DMatrix::from_fn(d, d, |x, y| match alg.unit_product(alg.adjoint_index(x), y) {
        Some(c) => std_values[c],
        None => C64::new(0.0, 0.0),
    });
    let herm = (&gram - gram.adjoint()).norm();
    let (vals, _) = hermitian_eigen(&gram);
    let gram_min_eigenvalue = vals.first().copied().unwrap_or(0.0);
    report.push("gram_hermitian", rel(herm, gram.norm()));
    report.push("positive", (-gram_min_eigenvalue).max(0.0));
    if !report.pass {
        return Err(Error::PostconditionViolated(format!("Haar measure fails {:?}", report.failing())));
    }
    if gram_min_eigenvalue <= tol {
        return Err(Error::PostconditionViolated(format!(
            "Haar measure is not faithful (min Gram eigenvalue {gram_min_eigenvalue:.3e})"
        )));
    }
    Ok(HaarMeasure { phi, report, gram_min_eigenvalue })
}

/// `κ⁻¹` as a matrix inverse.
pub fn antipode_inverse(w: &WeakHopf) -> Result<LinearMap> {
    w.kappa().try_inverse()
}

/// The two weak Kac criteria: involutive antipode and tracial Haar measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakKac {
    pub kappa_involutive: bool,
    pub phi_tracial: bool,
    pub kappa_squared_residual: f64,
    pub trace_residual: f64,
}

impl WeakKac {
    pub fn flags(&self) -> (bool, bool) {
        (self.kappa_involutive, self.phi_tracial)
    }

    pub fn agree(&self) -> bool {
        self.kappa_involutive == self.phi_tracial
    }
}

pub fn is_weak_kac(w: &WeakHopf, tol: f64) -> Result<WeakKac> {
    let d = w.dim();
    let k = w.kappa().matrix();
    let eye = DMatrix::<C64>::identity(d, d);
    let kappa_squared_residual = rel((k * k - &eye).norm(), eye.norm());
    let phi = haar_measure(w, tol)?.phi;
    let alg = w.algebra();
    let val = |c: Option<usize>| c.map_or(C64::new(0.0, 0.0), |c| phi.matrix()[(0, c)]);
    let mut trace_residual = 0.0f64;
    for x in 0..d {
        for y in 0..d {
            trace_residual = trace_residual.max((val(alg.unit_product(x, y)) - val(alg.unit_product(y, x))).norm());
        }
    }
    Ok(WeakKac {
        kappa_involutive: kappa_squared_residual <= tol,
        phi_tracial: trace_residual <= tol,
        kappa_squared_residual,
        trace_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{function_algebra_wha, pair_groupoid_wha, FiniteGroupoid};

    #[test]
    fn pair_groupoid_haar_projection_is_uniform() {
        let w = pair_groupoid_wha(2).unwrap();
        let h = haar_projection(&w, 1e-10).unwrap();
        let expect = AlgElement::from_coords(w.algebra(), &DVector::from_element(4, C64::new(0.5, 0.0))).unwrap();
        assert!(h.p.distance(&expect) < 1e-12);
    }

    #[test]
    fn pair_groupoid_haar_measure_is_trace() {
        let w = pair_groupoid_wha(3).unwrap();
        let m = haar_measure(&w, 1e-10).unwrap();
        let a = w.algebra();
        for idx in 0..a.dim() {
            let u = a.unit(idx);
            assert!((m.phi.eval(&u) - u.trace()).norm() < 1e-12);
        }
        assert_eq!(is_weak_kac(&w, 1e-10).unwrap().flags(), (true, true));
    }

    #[test]
    fn z2_haar_projection_is_average() {
        let w = function_algebra_wha(&FiniteGroupoid::cyclic(2)).unwrap();
        let p = haar_projection(&w, 1e-10).unwrap().p;
        // In ℂ^{Z/2} the Haar projection is δ_0.
        let expect = AlgElement::from_real_diagonal(w.algebra(), &[1.0, 0.0]).unwrap();
        assert!(p.distance(&expect) < 1e-12);
    }

    #[test]
    fn perturbed_projection_breaks_characterization() {
        let w = pair_groupoid_wha(2).unwrap();
        let p = haar_projection(&w, 1e-10).unwrap().p;
        let q = &p + &w.algebra().unit(0).scale_re(0.01);
        let et = counit_target(&w);
        let a = w.algebra().unit(1);
        let r = (&a * &q).distance(&(&et.apply(&a) * &q));
        assert!(r > 1e-4);
    }

    #[test]
    fn antipode_inverse_of_involutive() {
        let w = pair_groupoid_wha(3).unwrap();
        let inv = antipode_inverse(&w).unwrap();
        assert!(inv.distance(w.kappa()) < 1e-12);
    }
}
