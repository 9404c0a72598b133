//! The canonical element `q` of a weak Hopf C*-algebra, admissible base
//! elements `k`, and the deformation `W ↦ W_k`.
//!
//! All purely algebraic identities are evaluated in the coordinates of the
//! structure itself. Positivity and membership in `A_t` go through the
//! standardization of the involution.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::algebra::linalg::{column_basis, hermitian_eigen, lstsq, max_principal_angle_sin};
use crate::algebra::spectral::{invert, min_eigenvalue, min_singular_value, spectrum};
use crate::algebra::{AlgElement, BlockAlgebra, LinearMap};
use crate::error::{Error, Result};
use crate::separating::{gauge_formula, gauge_times_e, separating_residuals};
use crate::weak_hopf::{
    antipode_inverse, base_separating_element, cartan_source, cartan_subspace, cartan_target, check_axioms, CartanData,
    Side, StructureReport, WeakHopf,
};
use crate::C64;

/// Lower clamp for the sampler's simplex weights.
pub const WEIGHT_FLOOR: f64 = 1e-3;

fn rel(diff: f64, reference: f64) -> f64 {
    diff / reference.max(1.0)
}

/// The canonical element `q ∈ A_t` with `(κ ⊗ i)Δ(1) = (1 ⊗ q)e`.
#[derive(Clone, Debug)]
pub struct CanonicalElement {
    /// `q` in the coordinates of the structure.
    pub q: AlgElement,
    /// `q` in the recovered block structure of `A_t`.
    pub q_t: AlgElement,
    /// Eigenvalues of `q` with multiplicity, ascending.
    pub spectrum: Vec<f64>,
    /// Difference between the two algorithms, relative to `max(1, ‖q‖)`.
    pub cross_check: f64,
    pub report: StructureReport,
    pub base: CartanData,
}

/// Solve `f = (1 ⊗ q)e` for `q ∈ N`.
fn solve_gauge(n: &BlockAlgebra, f: &AlgElement, tol: f64) -> Result<AlgElement> {
    let d = n.dim();
    let cols: Vec<DVector<C64>> = n.basis().map(|u| gauge_times_e(n, &u).coords()).collect();
    let a = DMatrix::from_columns(&cols);
    let b = f.coords();
    let sol = lstsq(&a, &b, tol);
    if sol.nullity() > 0 {
        return Err(Error::NonUniqueSolution(sol.nullity()));
    }
    if sol.residual > tol * b.norm().max(1.0) {
        return Err(Error::NoSolution(sol.residual));
    }
    debug_assert_eq!(sol.x.len(), d);
    AlgElement::from_coords(n, &sol.x)
}

/// Orthonormal basis of the algebra generated by the columns of `gens`,
/// closed under products until the dimension stops growing.
pub fn generated_subalgebra(alg: &BlockAlgebra, gens: &DMatrix<C64>, tol: f64) -> DMatrix<C64> {
    let elem = |v: DVector<C64>| AlgElement::from_coords(alg, &v).expect("shape");
    let mut basis = column_basis(gens, tol);
    loop {
        let elems: Vec<AlgElement> = basis.column_iter().map(|c| elem(c.into_owned())).collect();
        let mut cols: Vec<DVector<C64>> = basis.column_iter().map(|c| c.into_owned()).collect();
        for x in &elems {
            for y in &elems {
                cols.push((x * y).coords());
            }
        }
        let next = column_basis(&DMatrix::from_columns(&cols), tol);
        if next.ncols() == basis.ncols() {
            return basis;
        }
        basis = next;
    }
}

fn kappa_squared_inner_residual(w: &WeakHopf, q: &AlgElement, span: &DMatrix<C64>, tol: f64) -> Result<f64> {
    let alg = w.algebra();
    let q_inv = invert(q, tol).map_err(|_| Error::NotInvertible(min_singular_value(q)))?;
    let left = &q_inv * &w.antipode(q);
    let right = q * &w.antipode(&q_inv);
    let mut worst = 0.0f64;
    for c in span.column_iter() {
        let x = AlgElement::from_coords(alg, &c.into_owned())?;
        let lhs = w.antipode(&w.antipode(&x));
        let rhs = &(&left * &x) * &right;
        // Both sides carry the conditioning of q; scale by the factors.
        let scale = (left.norm() * x.norm() * right.norm()).max(lhs.norm());
        worst = worst.max(rel(lhs.distance(&rhs), scale));
    }
    Ok(worst)
}

/// Residual of `κ²(x) = q⁻¹κ(q) x q κ(q⁻¹)` over a basis of the algebra
/// generated by `A_t ∪ A_s`.
pub fn check_kappa_squared_inner(w: &WeakHopf, q: &AlgElement, tol: f64) -> Result<StructureReport> {
    let at = cartan_target(w, tol)?;
    let as_ = cartan_source(w, tol)?;
    let span = generated_subalgebra(w.algebra(), &concat(&at.basis, &as_.basis), tol);
    Ok(StructureReport::new(tol).with("kappa_squared_inner", kappa_squared_inner_residual(w, q, &span, tol)?))
}

fn concat(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}

/// Compute `q` by reading the gauge off `(κ ⊗ i)Δ(1)` and, independently,
/// by solving `f = (1 ⊗ q)e`; cross-check and verify its properties.
pub fn canonical_element(w: &WeakHopf, tol: f64) -> Result<CanonicalElement> {
    let base = cartan_target(w, tol)?;
    let n = base.sub.structure().clone();
    let bs = base_separating_element(w, &base);
    let sep = separating_residuals(&n, &bs.f, tol);

    let q_a = gauge_formula(&n, &bs.f);
    let q_b = solve_gauge(&n, &bs.f, tol)?;
    let cross_check = rel(q_a.distance(&q_b), q_b.norm());
    if cross_check > 10.0 * tol {
        return Err(Error::CrossCheckMismatch(cross_check));
    }
    let q_t = q_b;
    let smin = min_singular_value(&q_t);
    if smin <= tol {
        return Err(Error::NotInvertible(smin));
    }
    let herm = rel(q_t.hermitian_residual(), q_t.norm());
    if herm > tol {
        return Err(Error::NotHermitian(herm));
    }
    let q_t = q_t.hermitian_part();
    let lmin = min_eigenvalue(&q_t, tol)?;
    if lmin <= tol {
        return Err(Error::NotPositive(lmin));
    }
    let q = base.standardization.unapply(&base.sub.embed(&q_t));

    let mut report = StructureReport::new(tol);
    report.push("f_in_base", bs.outside_residual);
    report.push("f_separating", sep.flip_relation.max(sep.unit));
    report.push("hermitian", herm);

    // Δ(1) = Σ (1/n_γ) κ⁻¹(e_ij q) ⊗ e_ji with the matrix units of A_t.
    let kinv = antipode_inverse(w)?;
    let units = base.units();
    let mut formula = DMatrix::zeros(w.dim(), w.dim());
    for (g, &size) in n.blocks().iter().enumerate() {
        for i in 0..size {
            for j in 0..size {
                let left = kinv.apply(&(&units[n.index(g, i, j)] * &q)).coords();
                let right = units[n.index(g, j, i)].coords();
                formula += left * right.transpose() * C64::new(1.0 / size as f64, 0.0);
            }
        }
    }
    let c1 = w.delta_one_pairs();
    report.push("delta_one_formula", rel((&formula - &c1).norm(), c1.norm()));

    let k2q = w.antipode(&w.antipode(&q));
    report.push("kappa_squared_fixed", rel(k2q.distance(&q), q.norm()));
    report.push("center_normalized", rel(q_t.center_expectation().distance(&n.one()), n.one().norm()));

    let source = cartan_source(w, tol)?;
    let span = generated_subalgebra(w.algebra(), &concat(&base.basis, &source.basis), tol);
    report.push("kappa_squared_inner", kappa_squared_inner_residual(w, &q, &span, tol)?);

    if !report.pass {
        return Err(Error::PostconditionViolated(format!("canonical element fails {:?}", report.failing())));
    }
    let spectrum = spectrum(&q_t, tol)?;
    Ok(CanonicalElement { q, q_t, spectrum, cross_check, report, base })
}

/// The admissibility residuals of a candidate `k`.
#[derive(Clone, Debug)]
pub struct Admissibility {
    pub report: StructureReport,
    /// Smallest eigenvalue of `k` in standardized coordinates.
    pub min_eigenvalue: f64,
    pub admissible: bool,
}

/// Evaluate the admissibility conditions for `k` (coordinates of `w`):
/// `k ∈ A_t` strictly positive, `[k, q] = 0`, `E_{Z(A_t)}(k⁻¹q) = 1`.
pub fn admissibility(w: &WeakHopf, canon: &CanonicalElement, k: &AlgElement, tol: f64) -> Admissibility {
    let base = &canon.base;
    let mut report = StructureReport::new(tol);
    let ks = base.standardization.apply(k);
    report.push("in_base", base.membership_residual(k));
    report.push("hermitian", rel(ks.hermitian_residual(), ks.norm()));
    let min_eigenvalue = min_eigenvalue(&ks.hermitian_part(), tol).unwrap_or(f64::NEG_INFINITY);
    report.push("commutes_with_q", rel(k.commutator(&canon.q).norm(), k.norm() * canon.q.norm()));
    report.push("kappa_squared_fixed", rel(w.antipode(&w.antipode(k)).distance(k), k.norm()));
    let n = base.sub.structure();
    let k_t = base.sub.to_abstract(&ks);
    let normalized = match invert(&k_t, tol) {
        Ok(kinv) => rel((&kinv * &canon.q_t).center_expectation().distance(&n.one()), n.one().norm()),
        Err(_) => f64::INFINITY,
    };
    report.push("center_normalized", normalized);
    let admissible = report.pass && min_eigenvalue > tol;
    Admissibility { report, min_eigenvalue, admissible }
}

/// `true` iff `k` satisfies every admissibility condition.
pub fn is_admissible(w: &WeakHopf, k: &AlgElement, tol: f64) -> Result<bool> {
    let canon = canonical_element(w, tol)?;
    Ok(admissibility(w, &canon, k, tol).admissible)
}

/// A verified admissible deformation parameter.
#[derive(Clone, Debug)]
pub struct AdmissibleK {
    /// `k` in the coordinates of the structure.
    pub k: AlgElement,
    /// `k` in the recovered block structure of `A_t`.
    pub k_t: AlgElement,
    /// Eigenvalues of `k⁻¹q`, ascending.
    pub spectrum: Vec<f64>,
}

impl AdmissibleK {
    /// Validate `k` given in the coordinates of `w`.
    pub fn new(w: &WeakHopf, canon: &CanonicalElement, k: AlgElement, tol: f64) -> Result<Self> {
        w.algebra().check_element(&k)?;
        let adm = admissibility(w, canon, &k, tol);
        if !adm.admissible {
            let mut why: Vec<String> = adm.report.failing().iter().map(|s| s.to_string()).collect();
            if adm.min_eigenvalue <= tol {
                why.push(format!("min eigenvalue {:.3e}", adm.min_eigenvalue));
            }
            return Err(Error::NotAdmissible(why.join(", ")));
        }
        let base = &canon.base;
        let k_t = base.sub.to_abstract(&base.standardization.apply(&k));
        let kinv = invert(&k_t, tol)?;
        let spectrum = spectrum(&(&kinv * &canon.q_t).hermitian_part(), tol)?;
        Ok(Self { k, k_t, spectrum })
    }

    /// Validate `k` given in the recovered block coordinates of `A_t`.
    pub fn from_base_coords(w: &WeakHopf, canon: &CanonicalElement, k_t: &AlgElement, tol: f64) -> Result<Self> {
        let base = &canon.base;
        if !base.sub.structure().same_shape(&BlockAlgebra::new(k_t.shape(), "")?) {
            return Err(Error::ShapeMismatch(format!(
                "base element with blocks {:?}, base has {:?}",
                k_t.shape(),
                base.blocks()
            )));
        }
        let k = base.standardization.unapply(&base.sub.embed(k_t));
        Self::new(w, canon, k, tol)
    }
}

/// Draw an admissible `k` commuting with `q`: per block of `A_t`, in an
/// eigenbasis of `q`, `k_i = q_i / r_i` with weights `r_i ≥ 10⁻³` uniform on
/// the simplex scaled to the block size.
pub fn sample_admissible(w: &WeakHopf, seed: u64, tol: f64) -> Result<AdmissibleK> {
    let canon = canonical_element(w, tol)?;
    sample_admissible_with(w, &canon, seed, tol)
}

/// [`sample_admissible`] with a precomputed canonical element.
pub fn sample_admissible_with(w: &WeakHopf, canon: &CanonicalElement, seed: u64, tol: f64) -> Result<AdmissibleK> {
    let n = canon.base.sub.structure();
    if n.is_abelian() {
        return Err(Error::AbelianBaseOnlyTrivial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mats = Vec::with_capacity(n.num_blocks());
    for qg in canon.q_t.blocks() {
        let size = qg.nrows();
        let (vals, vecs) = hermitian_eigen(qg);
        let draws: Vec<f64> = (0..size).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        let s = size as f64;
        let weights = draws.iter().map(|x| WEIGHT_FLOOR + (s - s * WEIGHT_FLOOR) * x / total);
        let diag = DVector::from_iterator(size, vals.iter().zip(weights).map(|(qi, ri)| C64::new(qi / ri, 0.0)));
        mats.push(&vecs * DMatrix::from_diagonal(&diag) * vecs.adjoint());
    }
    let k_t = AlgElement::from_blocks(mats)?.hermitian_part();
    AdmissibleK::from_base_coords(w, canon, &k_t, tol)
}

/// A deformed structure with its verification.
#[derive(Clone, Debug)]
pub struct Deformation {
    pub structure: WeakHopf,
    pub report: StructureReport,
    pub canonical: CanonicalElement,
}

/// Build `W_k` without verification: gauge `k·g`, `Δ_k(a) = Δ(a)(1 ⊗ k⁻¹)`,
/// `κ_k(a) = kκ(a)k⁻¹`, `ε_k(a) = ε(ak)`.
pub fn deform_unchecked(w: &WeakHopf, k: &AlgElement, tol: f64) -> Result<WeakHopf> {
    let alg = w.algebra();
    let kinv = invert(k, tol)?;
    let l = w.layout();
    let r_kinv_t = LinearMap::right_mul(alg, &kinv).into_matrix().transpose();
    let mut delta = DMatrix::zeros(l.product().dim(), w.dim());
    for c in 0..w.dim() {
        delta.set_column(c, &l.from_pairs(&(w.delta_pairs(c) * &r_kinv_t)));
    }
    let kappa =
        LinearMap::left_mul(alg, k).into_matrix() * LinearMap::right_mul(alg, &kinv).into_matrix() * w.kappa().matrix();
    let eps = (w.eps().matrix() * LinearMap::right_mul(alg, k).into_matrix()).row(0).transpose();
    let gauge = k * w.gauge();
    WeakHopf::with_gauge(alg.clone(), gauge, delta, kappa, eps, tol)
}

/// Deform by an admissible `k` and verify: the axioms hold, the Cartan
/// subspaces are unchanged, and the new canonical element is `k⁻¹q`.
pub fn deform_verified(w: &WeakHopf, k: &AdmissibleK, tol: f64) -> Result<Deformation> {
    let canon = canonical_element(w, tol)?;
    let adm = admissibility(w, &canon, &k.k, tol);
    if !adm.admissible {
        return Err(Error::NotAdmissible(format!("{:?}", adm.report.failing())));
    }
    let structure = deform_unchecked(w, &k.k, tol)?;
    let mut report = check_axioms(&structure, tol);
    for side in [Side::Target, Side::Source] {
        let before = cartan_subspace(w, side, tol);
        let after = cartan_subspace(&structure, side, tol);
        let name = match side {
            Side::Target => "cartan_target_angle",
            Side::Source => "cartan_source_angle",
        };
        report.push(name, max_principal_angle_sin(&before, &after));
    }
    if !report.pass {
        return Err(Error::PostconditionViolated(format!("deformation fails {:?}", report.failing())));
    }
    let canonical = canonical_element(&structure, tol)?;
    let expect = &invert(&k.k, tol)? * &canon.q;
    report.push("canonical_element", rel(canonical.q.distance(&expect), expect.norm()));
    if !report.pass {
        return Err(Error::PostconditionViolated(format!("deformation fails {:?}", report.failing())));
    }
    Ok(Deformation { structure, report, canonical })
}

/// [`deform_verified`] returning only the structure.
pub fn deform(w: &WeakHopf, k: &AdmissibleK, tol: f64) -> Result<WeakHopf> {
    deform_verified(w, k, tol).map(|d| d.structure)
}

/// Deform by `k = q`, making the antipode involutive on `A_t` and `A_s`.
pub fn deform_to_involutive_base(w: &WeakHopf, tol: f64) -> Result<Deformation> {
    let canon = canonical_element(w, tol)?;
    let k = AdmissibleK::new(w, &canon, canon.q.clone(), tol)?;
    deform_verified(w, &k, tol)
}

/// `max ‖κ²(x) − x‖` over orthonormal bases of `A_t` and `A_s`.
pub fn kappa_squared_on_base(w: &WeakHopf, tol: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for side in [Side::Target, Side::Source] {
        for c in cartan_subspace(w, side, tol).column_iter() {
            let x = AlgElement::from_coords(w.algebra(), &c.into_owned())?;
            worst = worst.max(rel(w.antipode(&w.antipode(&x)).distance(&x), x.norm()));
        }
    }
    Ok(worst)
}

/// Eigenvalues of the canonical element, ascending: an isomorphism
/// invariant.
pub fn spectrum_invariant(w: &WeakHopf, tol: f64) -> Result<Vec<f64>> {
    Ok(canonical_element(w, tol)?.spectrum)
}

/// Largest difference between sorted multisets; infinite if the sizes
/// differ.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Outcome of comparing two spectrum invariants.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantComparison {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub distance: f64,
    /// Distinct invariants certify non-isomorphic structures.
    pub non_isomorphic: bool,
}

pub fn compare_invariants(a: &WeakHopf, b: &WeakHopf, tol: f64, separation: f64) -> Result<InvariantComparison> {
    let left = spectrum_invariant(a, tol)?;
    let right = spectrum_invariant(b, tol)?;
    let distance = multiset_distance(&left, &right);
    Ok(InvariantComparison { left, right, distance, non_isomorphic: distance > separation })
}

/// Recovered base block structure of `A_t` of a tensor-layout-compatible
/// structure; helper for callers that only need the shape.
pub fn base_blocks(w: &WeakHopf, tol: f64) -> Result<Vec<usize>> {
    Ok(cartan_target(w, tol)?.blocks().to_vec())
}
