//! Artin–Wedderburn decomposition of a *-subalgebra given by a spanning set:
//! recovers block sizes and a concrete system of matrix units.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{column_basis, hermitian_eigen, lstsq, null_space};
use super::{AlgElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::C64;

/// Attempts after the first one before giving up on a randomized split.
pub const MAX_RETRIES: u64 = 8;

/// Seed used when callers do not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A *-subalgebra of an ambient block algebra together with an isomorphism
/// from an abstract block algebra: `units[a]` is the image of the `a`-th
/// canonical matrix unit of `structure`.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    ambient: BlockAlgebra,
    structure: BlockAlgebra,
    units: Vec<AlgElement>,
    embedding: DMatrix<C64>,
    coords: DMatrix<C64>,
    basis: DMatrix<C64>,
}

impl Subalgebra {
    pub fn ambient(&self) -> &BlockAlgebra {
        &self.ambient
    }

    /// The abstract block structure.
    pub fn structure(&self) -> &BlockAlgebra {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn units(&self) -> &[AlgElement] {
        &self.units
    }

    /// `ambient.dim × dim` matrix whose columns are the embedded units.
    pub fn embedding(&self) -> &DMatrix<C64> {
        &self.embedding
    }

    /// Left inverse of [`embedding`](Self::embedding).
    pub fn coordinate_map(&self) -> &DMatrix<C64> {
        &self.coords
    }

    /// Orthonormal (Hilbert–Schmidt) basis of the subspace, as columns of
    /// ambient coordinates.
    pub fn orthonormal_basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    /// Embed an element of the abstract structure.
    pub fn embed(&self, x: &AlgElement) -> AlgElement {
        AlgElement::from_coords(&self.ambient, &(&self.embedding * x.coords())).expect("ambient shape")
    }

    /// Abstract coordinates of an ambient element assumed to lie in the
    /// subalgebra.
    pub fn to_abstract(&self, x: &AlgElement) -> AlgElement {
        AlgElement::from_coords(&self.structure, &(&self.coords * x.coords())).expect("structure shape")
    }

    /// Distance from `x` to the subspace, relative to `max(1, ‖x‖)`.
    pub fn membership_residual(&self, x: &AlgElement) -> f64 {
        let v = x.coords();
        let r = &v - &self.basis * (self.basis.adjoint() * &v);
        r.norm() / v.norm().max(1.0)
    }

    /// The unit of the subalgebra.
    pub fn one(&self) -> AlgElement {
        self.embed(&self.structure.one())
    }

    /// Center conditional expectation computed inside the subalgebra.
    pub fn center_expectation(&self, x: &AlgElement) -> AlgElement {
        self.embed(&self.to_abstract(x).center_expectation())
    }
}

/// Structure constants of a span in an orthonormal basis.
struct SpanTables {
    basis: DMatrix<C64>,
    elems: Vec<AlgElement>,
    /// `prods[j * d + i]` = span coordinates of `b_j b_i`.
    prods: Vec<DVector<C64>>,
    /// Column `j` = span coordinates of `b_j*`.
    star: DMatrix<C64>,
}

impl SpanTables {
    fn dim(&self) -> usize {
        self.elems.len()
    }

    fn prod(&self, j: usize, i: usize) -> &DVector<C64> {
        &self.prods[j * self.dim() + i]
    }

    /// Span coordinates of `x*` for `x` given in span coordinates.
    fn star(&self, x: &DVector<C64>) -> DVector<C64> {
        &self.star * x.conjugate()
    }

    /// Matrix of `y ↦ x y` on the span.
    fn left_mul(&self, x: &DVector<C64>) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for j in 0..d {
            if x[j] == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..d {
                m.column_mut(i).axpy(x[j], self.prod(j, i), C64::new(1.0, 0.0));
            }
        }
        m
    }

    fn element(&self, ambient: &BlockAlgebra, x: &DVector<C64>) -> AlgElement {
        AlgElement::from_coords(ambient, &(&self.basis * x)).expect("ambient shape")
    }
}

fn tables(ambient: &BlockAlgebra, span: &[AlgElement], tol: f64) -> Result<SpanTables> {
    for x in span {
        ambient.check_element(x)?;
    }
    if span.is_empty() {
        return Err(Error::StructureRecoveryFailed("empty span".into()));
    }
    let cols: Vec<DVector<C64>> = span.iter().map(|x| x.coords()).collect();
    let basis = column_basis(&DMatrix::from_columns(&cols), tol);
    let d = basis.ncols();
    if d == 0 {
        return Err(Error::StructureRecoveryFailed("span is zero".into()));
    }
    let elems: Vec<AlgElement> =
        (0..d).map(|k| AlgElement::from_coords(ambient, &basis.column(k).into_owned()).expect("shape")).collect();
    let bh = basis.adjoint();
    let mut worst = 0.0f64;
    let mut project = |v: DVector<C64>| {
        let p = &bh * &v;
        worst = worst.max((&v - &basis * &p).norm());
        p
    };
    let mut prods = Vec::with_capacity(d * d);
    for j in 0..d {
        for i in 0..d {
            prods.push(project((&elems[j] * &elems[i]).coords()));
        }
    }
    let star_cols: Vec<DVector<C64>> = elems.iter().map(|b| project(b.adjoint().coords())).collect();
    if worst > tol {
        return Err(Error::NotAnAlgebra(worst));
    }
    Ok(SpanTables { basis, elems, prods, star: DMatrix::from_columns(&star_cols) })
}

/// Group sorted eigenvalues into clusters separated by more than `gap`.
fn clusters(vals: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=vals.len() {
        if k == vals.len() || vals[k] - vals[k - 1] > gap {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Smallest distance between consecutive cluster means.
fn cluster_separation(vals: &[f64], cl: &[std::ops::Range<usize>]) -> f64 {
    let means: Vec<f64> = cl.iter().map(|r| vals[r.clone()].iter().sum::<f64>() / r.len() as f64).collect();
    means.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

fn perfect_square_root(m: usize) -> Option<usize> {
    let r = (m as f64).sqrt().round() as usize;
    (r * r == m).then_some(r)
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> DVector<C64> {
    DVector::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Split the span into minimal central blocks and build matrix units.
/// Returns `None` when the random draw was degenerate.
fn attempt(
    t: &SpanTables,
    ambient: &BlockAlgebra,
    unit: &DVector<C64>,
    center: &DMatrix<C64>,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<usize>, Vec<AlgElement>)> {
    let coeffs = DVector::from_fn(center.ncols(), |_, _| C64::new(rng.random_range(-1.0..1.0), 0.0));
    let z = center * coeffs;
    let h = (&z + t.star(&z)) * C64::new(0.5, 0.0);
    let (vals, vecs) = hermitian_eigen(&t.left_mul(&h));
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let cl = clusters(&vals, 1e-6 * scale);
    if cl.len() != center.ncols() || cluster_separation(&vals, &cl) < 1e-3 * scale {
        return None;
    }
    let mut sizes = Vec::new();
    let mut units = Vec::new();
    for r in &cl {
        let n = perfect_square_root(r.len())?;
        let v = vecs.columns(r.start, r.len()).into_owned();
        let p = &v * (v.adjoint() * unit);
        // Random Hermitian element of the block; its left multiplication
        // has n eigenvalues of multiplicity n whose eigenspaces are e_ii·block.
        let y = &v * random_complex(rng, r.len());
        let hb = (&y + t.star(&y)) * C64::new(0.5, 0.0);
        let lh = v.adjoint() * t.left_mul(&hb) * &v;
        let (bvals, bvecs) = hermitian_eigen(&lh);
        let bscale = bvals.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        let bcl = clusters(&bvals, 1e-6 * bscale);
        if bcl.len() != n || bcl.iter().any(|c| c.len() != n) || cluster_separation(&bvals, &bcl) < 1e-3 * bscale {
            return None;
        }
        let diag: Vec<AlgElement> = bcl
            .iter()
            .map(|c| {
                let w = &v * bvecs.columns(c.start, c.len());
                t.element(ambient, &(&w * (w.adjoint() * &p)))
            })
            .collect();
        let b = t.element(ambient, &(&v * random_complex(rng, r.len())));
        let mut col0 = vec![diag[0].clone()];
        for e in diag.iter().skip(1) {
            let yv = &(e * &b) * &diag[0];
            let c = (&yv.adjoint() * &yv).trace().re / diag[0].trace().re;
            if c.is_nan() || c <= 1e-6 {
                return None;
            }
            col0.push(yv.scale_re(1.0 / c.sqrt()));
        }
        for i in 0..n {
            for j in 0..n {
                units.push(&col0[i] * &col0[j].adjoint());
            }
        }
        sizes.push(n);
    }
    Some((sizes, units))
}

fn relation_residual(structure: &BlockAlgebra, units: &[AlgElement], unit: &AlgElement) -> f64 {
    let mut worst = 0.0f64;
    let zero = AlgElement::zeros_like(unit);
    for a in 0..units.len() {
        worst = worst.max(units[a].adjoint().distance(&units[structure.adjoint_index(a)]));
        for b in 0..units.len() {
            let p = &units[a] * &units[b];
            let expect = structure.unit_product(a, b).map_or(&zero, |c| &units[c]);
            worst = worst.max(p.distance(expect));
        }
    }
    let diag_sum = (0..structure.num_blocks())
        .flat_map(|g| (0..structure.blocks()[g]).map(move |i| (g, i)))
        .fold(zero.clone(), |acc, (g, i)| &acc + &units[structure.index(g, i, i)]);
    worst.max(diag_sum.distance(unit))
}

/// Recover block sizes and matrix units of the *-algebra spanned by `span`
/// inside `ambient`.
///
/// Randomized steps draw from a ChaCha stream seeded by `seed`; a degenerate
/// draw is retried with `seed + 1`, up to [`MAX_RETRIES`] times.
pub fn recover_matrix_units(ambient: &BlockAlgebra, span: &[AlgElement], tol: f64, seed: u64) -> Result<Subalgebra> {
    let t = tables(ambient, span, tol)?;
    let d = t.dim();

    // Unit and center of the span, in span coordinates.
    let mut unit_rows = DMatrix::zeros(2 * d * d, d);
    let mut unit_rhs = DVector::zeros(2 * d * d);
    let mut center_rows = DMatrix::zeros(d * d, d);
    for i in 0..d {
        for j in 0..d {
            let left = t.prod(j, i);
            let right = t.prod(i, j);
            unit_rows.view_mut((i * d, j), (d, 1)).copy_from(left);
            unit_rows.view_mut((d * d + i * d, j), (d, 1)).copy_from(right);
            center_rows.view_mut((i * d, j), (d, 1)).copy_from(&(left - right));
        }
        unit_rhs[i * d + i] = C64::new(1.0, 0.0);
        unit_rhs[d * d + i * d + i] = C64::new(1.0, 0.0);
    }
    let sol = lstsq(&unit_rows, &unit_rhs, tol);
    if sol.residual > tol * (d as f64).sqrt().max(1.0) {
        return Err(Error::StructureRecoveryFailed(format!("span has no unit (residual {:.3e})", sol.residual)));
    }
    let unit = sol.x;
    let center = null_space(&center_rows, tol);
    if center.ncols() == 0 {
        return Err(Error::StructureRecoveryFailed("trivial center".into()));
    }
    let unit_elem = t.element(ambient, &unit);

    for k in 0..=MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
        let Some((sizes, units)) = attempt(&t, ambient, &unit, &center, &mut rng) else {
            continue;
        };
        let structure = BlockAlgebra::new(sizes, format!("{}:sub", ambient.label()))?;
        if structure.dim() != d || relation_residual(&structure, &units, &unit_elem) > tol {
            continue;
        }
        let cols: Vec<DVector<C64>> = units.iter().map(|u| u.coords()).collect();
        let embedding = DMatrix::from_columns(&cols);
        // Units are Hilbert–Schmidt orthogonal, so the left inverse only
        // rescales by the traces of the diagonal units.
        let mut coords = embedding.adjoint();
        for (a, u) in units.iter().enumerate() {
            let w = u.norm().powi(2);
            coords.row_mut(a).unscale_mut(w);
        }
        return Ok(Subalgebra { ambient: ambient.clone(), structure, units, embedding, coords, basis: t.basis });
    }
    Err(Error::DegenerateRandomization(MAX_RETRIES as usize + 1))
}
