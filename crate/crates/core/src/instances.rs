//! Concrete weak Hopf C*-algebras: function algebras of finite groupoids,
//! the pair-groupoid algebra `M_n`, and the `Bᵒ ⊗ B` construction.
//!
//! Every constructor runs the axiom checker before returning.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{BlockAlgebra, TensorLayout};
use crate::error::{Error, Result};
use crate::weak_hopf::{check_axioms, WeakHopf};
use crate::{default_tol, C64};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A finite groupoid given by its arrows. Arrow `g` goes from
/// `source[g]` to `target[g]`; `compose[h][k]` is `h ∘ k` (defined when
/// `source[h] == target[k]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: usize,
    source: Vec<usize>,
    target: Vec<usize>,
    compose: Vec<Vec<Option<usize>>>,
    inverse: Vec<usize>,
    identity: Vec<usize>,
    label: String,
}

impl FiniteGroupoid {
    /// Build and validate. `identity[o]` is the identity arrow at object `o`.
    pub fn new(
        objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        compose: Vec<Vec<Option<usize>>>,
        inverse: Vec<usize>,
        identity: Vec<usize>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let g = Self { objects, source, target, compose, inverse, identity, label: label.into() };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.source.len();
        let bad = |m: String| Err(Error::InvalidGroupoid(m));
        if n == 0 || self.objects == 0 {
            return bad("empty groupoid".into());
        }
        if self.target.len() != n
            || self.inverse.len() != n
            || self.compose.len() != n
            || self.identity.len() != self.objects
        {
            return bad("inconsistent table sizes".into());
        }
        if self.source.iter().chain(&self.target).any(|&o| o >= self.objects) {
            return bad("arrow endpoint out of range".into());
        }
        for (o, &i) in self.identity.iter().enumerate() {
            if i >= n || self.source[i] != o || self.target[i] != o {
                return bad(format!("identity of object {o} is not a loop at {o}"));
            }
        }
        for h in 0..n {
            if self.compose[h].len() != n {
                return bad("composition table is not square".into());
            }
            for k in 0..n {
                let c = self.compose[h][k];
                match (self.source[h] == self.target[k], c) {
                    (true, Some(c)) if c < n => {
                        if self.source[c] != self.source[k] || self.target[c] != self.target[h] {
                            return bad(format!("{h}∘{k} has wrong endpoints"));
                        }
                    }
                    (false, None) => {}
                    _ => return bad(format!("composition of {h} and {k} defined incorrectly")),
                }
            }
        }
        for g in 0..n {
            let inv = self.inverse[g];
            if inv >= n || self.source[inv] != self.target[g] {
                return bad(format!("inverse of {g} has wrong endpoints"));
            }
            if self.compose[g][inv] != Some(self.identity[self.target[g]])
                || self.compose[inv][g] != Some(self.identity[self.source[g]])
            {
                return bad(format!("inverse of {g} does not compose to an identity"));
            }
            if self.compose[self.identity[self.target[g]]][g] != Some(g)
                || self.compose[g][self.identity[self.source[g]]] != Some(g)
            {
                return bad(format!("identities do not act neutrally on {g}"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.compose[a][b].and_then(|ab| self.compose[ab][c]);
                    let right = self.compose[b][c].and_then(|bc| self.compose[a][bc]);
                    if left != right {
                        return bad(format!("composition of {a}, {b}, {c} is not associative"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The cyclic group `ℤ/n` as a one-object groupoid.
    pub fn cyclic(n: usize) -> Self {
        let compose = (0..n).map(|h| (0..n).map(|k| Some((h + k) % n)).collect()).collect();
        let inverse = (0..n).map(|g| (n - g) % n).collect();
        Self::new(1, vec![0; n], vec![0; n], compose, inverse, vec![0], format!("Z{n}")).expect("cyclic group")
    }

    /// The pair groupoid on `n` objects: one arrow `i ← j` for every pair,
    /// numbered `i * n + j`.
    pub fn pair(n: usize) -> Self {
        let arrows = n * n;
        let target = (0..arrows).map(|g| g / n).collect();
        let source = (0..arrows).map(|g| g % n).collect();
        let compose = (0..arrows)
            .map(|h| (0..arrows).map(|k| (h % n == k / n).then_some((h / n) * n + k % n)).collect())
            .collect();
        let inverse = (0..arrows).map(|g| (g % n) * n + g / n).collect();
        let identity = (0..n).map(|i| i * n + i).collect();
        Self::new(n, source, target, compose, inverse, identity, format!("pair{n}")).expect("pair groupoid")
    }

    /// `n` objects and only identity arrows.
    pub fn discrete(n: usize) -> Self {
        let compose = (0..n).map(|h| (0..n).map(|k| (h == k).then_some(h)).collect()).collect();
        let ids: Vec<usize> = (0..n).collect();
        Self::new(n, ids.clone(), ids.clone(), compose, ids.clone(), ids, format!("discrete{n}")).expect("discrete")
    }

    /// Direct product; arrow `(g, h)` is numbered `g * |H| + h`.
    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Self {
        let (na, nb) = (a.arrows(), b.arrows());
        let pair = |g: usize, h: usize| g * nb + h;
        let obj = |o: usize, p: usize| o * b.objects + p;
        let arrows = na * nb;
        let source = (0..arrows).map(|x| obj(a.source[x / nb], b.source[x % nb])).collect();
        let target = (0..arrows).map(|x| obj(a.target[x / nb], b.target[x % nb])).collect();
        let compose = (0..arrows)
            .map(|x| {
                (0..arrows)
                    .map(|y| {
                        let g = a.compose[x / nb][y / nb]?;
                        let h = b.compose[x % nb][y % nb]?;
                        Some(pair(g, h))
                    })
                    .collect()
            })
            .collect();
        let inverse = (0..arrows).map(|x| pair(a.inverse[x / nb], b.inverse[x % nb])).collect();
        let identity =
            (0..a.objects * b.objects).map(|o| pair(a.identity[o / b.objects], b.identity[o % b.objects])).collect();
        Self::new(a.objects * b.objects, source, target, compose, inverse, identity, format!("{}*{}", a.label, b.label))
            .expect("product of groupoids")
    }

    /// Parse `cyclic:N`, `pair:N`, `discrete:N`, and products joined by `*`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut parts = spec.split('*').map(|p| Self::parse_factor(p.trim()));
        let first = parts.next().ok_or_else(|| Error::InvalidGroupoid("empty specification".into()))??;
        parts.try_fold(first, |acc, g| Ok(Self::product(&acc, &g?)))
    }

    fn parse_factor(s: &str) -> Result<Self> {
        let (kind, n) =
            s.split_once(':').ok_or_else(|| Error::InvalidGroupoid(format!("expected kind:N, got {s:?}")))?;
        let n: usize = n.parse().map_err(|_| Error::InvalidGroupoid(format!("bad size in {s:?}")))?;
        if n == 0 {
            return Err(Error::InvalidGroupoid(format!("size must be positive in {s:?}")));
        }
        match kind {
            "cyclic" => Ok(Self::cyclic(n)),
            "pair" => Ok(Self::pair(n)),
            "discrete" => Ok(Self::discrete(n)),
            _ => Err(Error::InvalidGroupoid(format!("unknown groupoid kind {kind:?}"))),
        }
    }

    pub fn arrows(&self) -> usize {
        self.source.len()
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_identity(&self, g: usize) -> bool {
        self.identity.contains(&g)
    }

    pub fn compose(&self, h: usize, k: usize) -> Option<usize> {
        self.compose[h][k]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }
}

fn checked(w: WeakHopf) -> Result<WeakHopf> {
    let report = check_axioms(&w, default_tol(w.dim()));
    if report.pass {
        Ok(w)
    } else {
        Err(Error::PostconditionViolated(format!("generated structure fails {:?}", report.failing())))
    }
}

/// `M_n` with `Δ(e_ij) = e_ij ⊗ e_ij`, `κ(e_ij) = e_ji`, `ε(e_ij) = 1`.
pub fn pair_groupoid_wha(n: usize) -> Result<WeakHopf> {
    if n == 0 {
        return Err(Error::InvalidBlocks("pair groupoid needs n >= 1".into()));
    }
    let alg = BlockAlgebra::matrix(n).with_label(format!("pair-groupoid({n})"));
    let l = TensorLayout::square(&alg);
    let d = alg.dim();
    let mut delta = DMatrix::zeros(l.product().dim(), d);
    let mut kappa = DMatrix::zeros(d, d);
    for a in 0..d {
        delta[(l.index(a, a), a)] = ONE;
        kappa[(alg.adjoint_index(a), a)] = ONE;
    }
    checked(WeakHopf::new(alg, delta, kappa, DVector::from_element(d, ONE))?)
}

/// `ℂ^{arrows}` with `Δ(δ_g) = Σ_{hk = g} δ_h ⊗ δ_k`, `κ(δ_g) = δ_{g⁻¹}`,
/// `ε(δ_g) = [g is an identity]`.
pub fn function_algebra_wha(g: &FiniteGroupoid) -> Result<WeakHopf> {
    g.validate()?;
    let n = g.arrows();
    let alg = BlockAlgebra::new(vec![1; n], format!("C^{}", g.label()))?;
    let l = TensorLayout::square(&alg);
    let mut delta = DMatrix::zeros(l.product().dim(), n);
    for h in 0..n {
        for k in 0..n {
            if let Some(c) = g.compose(h, k) {
                delta[(l.index(h, k), c)] = ONE;
            }
        }
    }
    let mut kappa = DMatrix::zeros(n, n);
    for a in 0..n {
        kappa[(g.inverse(a), a)] = ONE;
    }
    let eps = DVector::from_fn(n, |a, _| if g.is_identity(a) { ONE } else { C64::new(0.0, 0.0) });
    checked(WeakHopf::new(alg, delta, kappa, eps)?)
}

/// `Bᵒ ⊗ B` with
/// `Δ(xᵒ⊗y) = Σ_γ Σ_{i,j} (1/n_γ) (xᵒ⊗e^γ_{ij}) ⊗ ((e^γ_{ji})ᵒ⊗y)`,
/// `κ(xᵒ⊗y) = yᵒ⊗x` and `ε(xᵒ⊗y) = Σ_γ n_γ Tr(xy p^γ)`.
///
/// `Bᵒ` is realized by the transpose, so `xᵒ⊗y` is stored as `xᵀ ⊗ y` in
/// the block algebra `B ⊗ B`.
pub fn op_tensor_wha(b: &BlockAlgebra) -> Result<WeakHopf> {
    let lb = TensorLayout::square(b);
    let alg = lb.product().clone().with_label(format!("op-tensor({b})"));
    let la = TensorLayout::square(&alg);
    let d = alg.dim();
    let db = b.dim();
    // Canonical index of xᵒ⊗y for matrix units x = e_a, y = e_c of B.
    let rep = |a: usize, c: usize| lb.index(b.adjoint_index(a), c);
    let mut delta = DMatrix::zeros(la.product().dim(), d);
    let mut kappa = DMatrix::zeros(d, d);
    let mut eps = DVector::zeros(d);
    for x in 0..db {
        for y in 0..db {
            let col = rep(x, y);
            for (g, &n) in b.blocks().iter().enumerate() {
                for i in 0..n {
                    for j in 0..n {
                        let left = rep(x, b.index(g, i, j));
                        let right = rep(b.index(g, j, i), y);
                        delta[(la.index(left, right), col)] += C64::new(1.0 / n as f64, 0.0);
                    }
                }
            }
            kappa[(rep(y, x), col)] = ONE;
            if let Some(c) = b.unit_product(x, y) {
                let (g, i, j) = b.unit_position(c);
                if i == j {
                    eps[col] = C64::new(b.blocks()[g] as f64, 0.0);
                }
            }
        }
    }
    checked(WeakHopf::new(alg, delta, kappa, eps)?)
}
