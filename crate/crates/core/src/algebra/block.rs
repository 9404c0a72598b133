use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// A finite-dimensional C*-algebra presented as a direct sum of full matrix
/// blocks `M_{n_1} ⊕ ... ⊕ M_{n_r}`.
///
/// The canonical basis is the family of matrix units `e^γ_{i,j}`, enumerated
/// block by block in the given order and row-major inside each block. Every
/// [`LinearMap`](super::LinearMap) and every serialized matrix uses this order.
#[derive(Clone, Debug)]
pub struct BlockAlgebra {
    blocks: Vec<usize>,
    label: String,
    offsets: Vec<usize>,
    dim: usize,
}

impl BlockAlgebra {
    pub fn new(blocks: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidBlocks("no blocks".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidBlocks(format!("zero-sized block in {blocks:?}")));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for &n in &blocks {
            offsets.push(dim);
            dim += n * n;
        }
        Ok(Self { blocks, label: label.into(), offsets, dim })
    }

    /// `M_n(ℂ)`.
    pub fn matrix(n: usize) -> Self {
        Self::new(vec![n], format!("M{n}")).expect("n >= 1")
    }

    /// The one-dimensional algebra ℂ, used as codomain of functionals.
    pub fn scalars() -> Self {
        Self::new(vec![1], "C").expect("static")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.blocks.iter().all(|&n| n == 1)
    }

    /// Same block structure (labels are ignored).
    pub fn same_shape(&self, other: &BlockAlgebra) -> bool {
        self.blocks == other.blocks
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    /// Canonical index of `e^γ_{i,j}`.
    pub fn index(&self, block: usize, i: usize, j: usize) -> usize {
        let n = self.blocks[block];
        debug_assert!(i < n && j < n);
        self.offsets[block] + i * n + j
    }

    /// Inverse of [`index`](Self::index).
    pub fn unit_position(&self, idx: usize) -> (usize, usize, usize) {
        assert!(idx < self.dim, "basis index {idx} out of range");
        let block = match self.offsets.binary_search(&idx) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        let n = self.blocks[block];
        let r = idx - self.offsets[block];
        (block, r / n, r % n)
    }

    /// Index of `(e_a)^*`, which is again a matrix unit.
    pub fn adjoint_index(&self, idx: usize) -> usize {
        let (b, i, j) = self.unit_position(idx);
        self.index(b, j, i)
    }

    /// Index of `e_a e_b`, or `None` when the product vanishes.
    pub fn unit_product(&self, a: usize, b: usize) -> Option<usize> {
        let (ga, i, j) = self.unit_position(a);
        let (gb, k, l) = self.unit_position(b);
        (ga == gb && j == k).then(|| self.index(ga, i, l))
    }

    pub fn unit(&self, idx: usize) -> AlgElement {
        let mut x = AlgElement::zeros(self);
        let (b, i, j) = self.unit_position(idx);
        x.mats[b][(i, j)] = C64::new(1.0, 0.0);
        x
    }

    pub fn basis(&self) -> impl Iterator<Item = AlgElement> + '_ {
        (0..self.dim).map(move |a| self.unit(a))
    }

    pub fn one(&self) -> AlgElement {
        AlgElement::identity(self)
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement::zeros(self)
    }

    /// Minimal central projection of block `γ`.
    pub fn central_projection(&self, block: usize) -> AlgElement {
        let mut x = AlgElement::zeros(self);
        x.mats[block] = DMatrix::identity(self.blocks[block], self.blocks[block]);
        x
    }

    pub fn check_element(&self, x: &AlgElement) -> Result<()> {
        if x.mats.len() != self.blocks.len()
            || x.mats.iter().zip(&self.blocks).any(|(m, &n)| m.nrows() != n || m.ncols() != n)
        {
            return Err(Error::ShapeMismatch(format!("element of shape {:?} in algebra {:?}", x.shape(), self.blocks)));
        }
        Ok(())
    }
}

impl PartialEq for BlockAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl fmt::Display for BlockAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|n| format!("M{n}")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

/// An element of a [`BlockAlgebra`]: one square complex matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElement {
    pub(crate) mats: Vec<DMatrix<C64>>,
}

impl AlgElement {
    pub fn from_blocks(mats: Vec<DMatrix<C64>>) -> Result<Self> {
        if mats.is_empty() || mats.iter().any(|m| m.nrows() != m.ncols() || m.nrows() == 0) {
            return Err(Error::ShapeMismatch("blocks must be nonempty square matrices".into()));
        }
        Ok(Self { mats })
    }

    pub fn zeros(alg: &BlockAlgebra) -> Self {
        Self { mats: alg.blocks.iter().map(|&n| DMatrix::zeros(n, n)).collect() }
    }

    /// Zero element with the same block shape as `x`.
    pub fn zeros_like(x: &AlgElement) -> Self {
        Self { mats: x.mats.iter().map(|m| DMatrix::zeros(m.nrows(), m.ncols())).collect() }
    }

    pub fn identity(alg: &BlockAlgebra) -> Self {
        Self { mats: alg.blocks.iter().map(|&n| DMatrix::identity(n, n)).collect() }
    }

    /// Build from canonical coordinates.
    pub fn from_coords(alg: &BlockAlgebra, v: &DVector<C64>) -> Result<Self> {
        if v.len() != alg.dim {
            return Err(Error::ShapeMismatch(format!(
                "coordinate vector of length {} for algebra of dimension {}",
                v.len(),
                alg.dim
            )));
        }
        let mats = alg
            .blocks
            .iter()
            .zip(&alg.offsets)
            .map(|(&n, &off)| DMatrix::from_fn(n, n, |i, j| v[off + i * n + j]))
            .collect();
        Ok(Self { mats })
    }

    pub fn from_real_diagonal(alg: &BlockAlgebra, diag: &[f64]) -> Result<Self> {
        let total: usize = alg.blocks.iter().sum();
        if diag.len() != total {
            return Err(Error::ShapeMismatch(format!("{} diagonal entries for {total} rows", diag.len())));
        }
        let mut x = Self::zeros(alg);
        let mut k = 0;
        for m in &mut x.mats {
            for i in 0..m.nrows() {
                m[(i, i)] = C64::new(diag[k], 0.0);
                k += 1;
            }
        }
        Ok(x)
    }

    pub fn coords(&self) -> DVector<C64> {
        let dim: usize = self.mats.iter().map(|m| m.len()).sum();
        let mut v = DVector::zeros(dim);
        let mut k = 0;
        for m in &self.mats {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    v[k] = m[(i, j)];
                    k += 1;
                }
            }
        }
        v
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.mats
    }

    pub fn block(&self, gamma: usize) -> &DMatrix<C64> {
        &self.mats[gamma]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.mats.iter().map(|m| m.nrows()).collect()
    }

    pub fn same_shape(&self, other: &AlgElement) -> bool {
        self.mats.len() == other.mats.len() && self.mats.iter().zip(&other.mats).all(|(a, b)| a.nrows() == b.nrows())
    }

    fn ensure_same(&self, other: &AlgElement) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())))
        }
    }

    pub fn try_mul(&self, other: &AlgElement) -> Result<AlgElement> {
        self.ensure_same(other)?;
        Ok(self.zip_with(other, |a, b| a * b))
    }

    pub fn try_add(&self, other: &AlgElement) -> Result<AlgElement> {
        self.ensure_same(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    fn zip_with(&self, other: &AlgElement, f: impl Fn(&DMatrix<C64>, &DMatrix<C64>) -> DMatrix<C64>) -> Self {
        Self { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect() }
    }

    fn map(&self, f: impl Fn(&DMatrix<C64>) -> DMatrix<C64>) -> Self {
        Self { mats: self.mats.iter().map(f).collect() }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|m| m * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Standard involution: blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.map(|m| m.adjoint())
    }

    /// Blockwise transpose. Realizes the opposite algebra inside the same
    /// block algebra: `(xy)ᵀ = yᵀxᵀ`.
    pub fn opposite_embed(&self) -> Self {
        self.map(|m| m.transpose())
    }

    pub fn conj(&self) -> Self {
        self.map(|m| m.map(|z| z.conj()))
    }

    /// Sum of the unnormalized matrix traces over all blocks.
    pub fn trace(&self) -> C64 {
        self.mats.iter().map(|m| m.trace()).sum()
    }

    /// Frobenius (Hilbert–Schmidt) norm.
    pub fn norm(&self) -> f64 {
        self.mats.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }

    /// Hilbert–Schmidt pairing `tr(x^* y)`.
    pub fn hs_inner(&self, other: &AlgElement) -> C64 {
        self.mats.iter().zip(&other.mats).map(|(a, b)| a.dotc(b)).sum()
    }

    pub fn commutator(&self, other: &AlgElement) -> AlgElement {
        &(self * other) - &(other * self)
    }

    pub fn hermitian_residual(&self) -> f64 {
        (self - &self.adjoint()).norm()
    }

    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_re(0.5)
    }

    /// Center conditional expectation
    /// `E_Z(x) = Σ_γ (1/n_γ) tr(x p^γ) p^γ`.
    pub fn center_expectation(&self) -> Self {
        self.map(|m| {
            let n = m.nrows();
            DMatrix::identity(n, n) * (m.trace() / n as f64)
        })
    }

    /// `Σ_{γ,i,j} (1/n_γ) e^γ_{i,j} x e^γ_{j,i}`; equals
    /// [`center_expectation`](Self::center_expectation) but is evaluated from
    /// the matrix-unit sum, for cross-checking.
    pub fn center_expectation_by_units(&self) -> Self {
        self.map(|m| {
            let n = m.nrows();
            let mut out = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    // e_{ij} m e_{ji} = m_{jj} e_{ii}
                    out[(i, i)] += m[(j, j)] / n as f64;
                }
            }
            out
        })
    }

    pub fn is_central(&self, tol: f64) -> bool {
        self.mats.iter().all(|m| {
            let n = m.nrows();
            let d = m - DMatrix::identity(n, n) * (m.trace() / n as f64);
            d.norm() <= tol * m.norm().max(1.0)
        })
    }

    pub fn distance(&self, other: &AlgElement) -> f64 {
        (self - other).norm()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&AlgElement> for &AlgElement {
            type Output = AlgElement;
            /// Panics when the operands have different block shapes.
            fn $method(self, rhs: &AlgElement) -> AlgElement {
                assert!(self.same_shape(rhs), "shape mismatch {:?} vs {:?}", self.shape(), rhs.shape());
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
        impl $tr<AlgElement> for AlgElement {
            type Output = AlgElement;
            fn $method(self, rhs: AlgElement) -> AlgElement {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        self.scale_re(-1.0)
    }
}
