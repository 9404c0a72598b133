use nalgebra::{DMatrix, DVector};

use super::{AlgElement, BlockAlgebra, LinearMap};
use crate::error::{Error, Result};
use crate::C64;

/// `A ⊗ B` as a block algebra: blocks indexed by pairs `(γ, δ)` in
/// lexicographic order, of size `n_γ · n_δ`.
pub fn tensor(a: &BlockAlgebra, b: &BlockAlgebra) -> BlockAlgebra {
    let blocks = a.blocks().iter().flat_map(|&n| b.blocks().iter().map(move |&m| n * m)).collect();
    BlockAlgebra::new(blocks, format!("({})⊗({})", a.label(), b.label())).expect("nonempty positive blocks")
}

/// Index bookkeeping between the product basis `e_a ⊗ e_b` and the canonical
/// matrix-unit basis of [`tensor(A, B)`](tensor).
///
/// Elements of `A ⊗ B` are often handled as *pair-coefficient matrices*
/// `C[a, b]` (so `x = Σ C[a,b] e_a ⊗ e_b`); then `(S ⊗ T)x` is `S C Tᵀ`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    left: BlockAlgebra,
    right: BlockAlgebra,
    product: BlockAlgebra,
    pair_to_canon: Vec<usize>,
}

impl TensorLayout {
    pub fn new(left: &BlockAlgebra, right: &BlockAlgebra) -> Self {
        let product = tensor(left, right);
        let nb = right.num_blocks();
        let mut pair_to_canon = vec![0; left.dim() * right.dim()];
        for a in 0..left.dim() {
            let (g, i, j) = left.unit_position(a);
            for b in 0..right.dim() {
                let (d, k, l) = right.unit_position(b);
                let m = right.blocks()[d];
                let beta = g * nb + d;
                pair_to_canon[a * right.dim() + b] = product.index(beta, i * m + k, j * m + l);
            }
        }
        Self { left: left.clone(), right: right.clone(), product, pair_to_canon }
    }

    pub fn square(alg: &BlockAlgebra) -> Self {
        Self::new(alg, alg)
    }

    pub fn left(&self) -> &BlockAlgebra {
        &self.left
    }

    pub fn right(&self) -> &BlockAlgebra {
        &self.right
    }

    pub fn product(&self) -> &BlockAlgebra {
        &self.product
    }

    /// Canonical index of `e_a ⊗ e_b`.
    pub fn index(&self, a: usize, b: usize) -> usize {
        self.pair_to_canon[a * self.right.dim() + b]
    }

    pub fn to_pairs(&self, v: &DVector<C64>) -> DMatrix<C64> {
        DMatrix::from_fn(self.left.dim(), self.right.dim(), |a, b| v[self.index(a, b)])
    }

    pub fn from_pairs(&self, c: &DMatrix<C64>) -> DVector<C64> {
        let mut v = DVector::zeros(self.product.dim());
        for a in 0..self.left.dim() {
            for b in 0..self.right.dim() {
                v[self.index(a, b)] = c[(a, b)];
            }
        }
        v
    }

    pub fn element_to_pairs(&self, x: &AlgElement) -> DMatrix<C64> {
        self.to_pairs(&x.coords())
    }

    pub fn element_from_pairs(&self, c: &DMatrix<C64>) -> AlgElement {
        AlgElement::from_coords(&self.product, &self.from_pairs(c)).expect("product shape")
    }

    /// `x ⊗ y` by Kronecker products of blocks.
    pub fn element(&self, x: &AlgElement, y: &AlgElement) -> AlgElement {
        let mats = x.blocks().iter().flat_map(|xm| y.blocks().iter().map(move |ym| xm.kronecker(ym))).collect();
        AlgElement { mats }
    }

    pub fn try_element(&self, x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
        self.left.check_element(x)?;
        self.right.check_element(y)?;
        Ok(self.element(x, y))
    }

    /// Apply `S ⊗ T` to an element of this tensor product, landing in `out`.
    pub fn apply_maps(&self, s: &DMatrix<C64>, t: &DMatrix<C64>, out: &TensorLayout, x: &AlgElement) -> AlgElement {
        let c = self.element_to_pairs(x);
        out.element_from_pairs(&(s * c * t.transpose()))
    }

    /// `θ ⊗ i`, where θ is the blockwise transpose on the left factor. This
    /// is an algebra isomorphism `Aᵒ ⊗ B → A ⊗ B`, and its own inverse.
    pub fn opposite_left(&self, x: &AlgElement) -> AlgElement {
        let c = self.element_to_pairs(x);
        let mut out = DMatrix::zeros(c.nrows(), c.ncols());
        for a in 0..self.left.dim() {
            out.row_mut(self.left.adjoint_index(a)).copy_from(&c.row(a));
        }
        self.element_from_pairs(&out)
    }

    /// Product in `Aᵒ ⊗ B`: `(a ⊗ b)(c ⊗ d) = ca ⊗ bd`.
    pub fn opposite_mul(&self, x: &AlgElement, y: &AlgElement) -> AlgElement {
        self.opposite_left(&(&self.opposite_left(x) * &self.opposite_left(y)))
    }

    /// The flip `x ⊗ y ↦ y ⊗ x` from this product to `B ⊗ A`.
    pub fn flip_element(&self, x: &AlgElement) -> AlgElement {
        let swapped = TensorLayout::new(&self.right, &self.left);
        swapped.element_from_pairs(&self.element_to_pairs(x).transpose())
    }
}

/// The flip `ς` on `A ⊗ A` as a linear map.
pub fn flip(alg: &BlockAlgebra) -> LinearMap {
    let layout = TensorLayout::square(alg);
    let p = layout.product().clone();
    let mut m = DMatrix::zeros(p.dim(), p.dim());
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            m[(layout.index(b, a), layout.index(a, b))] = C64::new(1.0, 0.0);
        }
    }
    LinearMap::new(p.clone(), p, m).expect("square")
}

/// `S ⊗ T` as a dense map. Intended for small algebras; larger computations
/// go through [`TensorLayout::apply_maps`].
pub fn tensor_map(s: &LinearMap, t: &LinearMap) -> Result<LinearMap> {
    let lin = TensorLayout::new(s.domain(), t.domain());
    let lout = TensorLayout::new(s.codomain(), t.codomain());
    if lin.product().dim() > 4096 || lout.product().dim() > 4096 {
        return Err(Error::ShapeMismatch("tensor_map is limited to dense maps of dimension <= 4096".into()));
    }
    let sm = s.matrix();
    let tm = t.matrix();
    let mut m = DMatrix::zeros(lout.product().dim(), lin.product().dim());
    for a in 0..s.domain().dim() {
        for b in 0..t.domain().dim() {
            let col = lin.index(a, b);
            for c in 0..s.codomain().dim() {
                let sca = sm[(c, a)];
                if sca == C64::new(0.0, 0.0) {
                    continue;
                }
                for d in 0..t.codomain().dim() {
                    m[(lout.index(c, d), col)] += sca * tm[(d, b)];
                }
            }
        }
    }
    LinearMap::new(lin.product().clone(), lout.product().clone(), m)
}
