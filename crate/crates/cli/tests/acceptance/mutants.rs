//! Deliberately broken structures, one per axiom.

use nalgebra::{DMatrix, DVector};
use wha_core::algebra::{LinearMap, TensorLayout};
use wha_core::instances::{function_algebra_wha, op_tensor_wha, pair_groupoid_wha, FiniteGroupoid};
use wha_core::weak_hopf::AXIOM_NAMES;
use wha_core::{AlgElement, BlockAlgebra, WeakHopf, C64};

pub struct Mutant {
    pub axiom: &'static str,
    pub description: &'static str,
    pub structure: WeakHopf,
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Assemble a structure from the pair matrices of `Δ(e_a)`.
pub fn from_pairs(alg: BlockAlgebra, pairs: &[DMatrix<C64>], kappa: DMatrix<C64>, eps: DVector<C64>) -> WeakHopf {
    let l = TensorLayout::square(&alg);
    let mut delta = DMatrix::zeros(alg.dim() * alg.dim(), alg.dim());
    for (a, c) in pairs.iter().enumerate() {
        delta.set_column(a, &l.from_pairs(c));
    }
    WeakHopf::new(alg, delta, kappa, eps).expect("shapes")
}

fn z3() -> WeakHopf {
    function_algebra_wha(&FiniteGroupoid::cyclic(3)).unwrap()
}

/// Function algebra of a finite magma with two-sided inverses; a Hopf
/// algebra exactly when the table is associative.
pub fn magma_function_algebra(table: &[Vec<usize>], inverse: &[usize], unit: usize) -> WeakHopf {
    let n = table.len();
    let alg = BlockAlgebra::new(vec![1; n], "magma").unwrap();
    let mut pairs = vec![DMatrix::zeros(n, n); n];
    for h in 0..n {
        for k in 0..n {
            pairs[table[h][k]][(h, k)] += re(1.0);
        }
    }
    let mut kappa = DMatrix::zeros(n, n);
    for g in 0..n {
        kappa[(inverse[g], g)] = re(1.0);
    }
    let mut eps = DVector::zeros(n);
    eps[unit] = re(1.0);
    from_pairs(alg, &pairs, kappa, eps)
}

/// The smallest loop that is not a group and still has the automorphic
/// inverse property `(xy)⁻¹ = y⁻¹x⁻¹`.
pub fn nonassociative_loop() -> (Vec<Vec<usize>>, Vec<usize>) {
    let table = vec![
        vec![0, 1, 2, 3, 4, 5],
        vec![1, 0, 3, 2, 5, 4],
        vec![2, 4, 0, 5, 3, 1],
        vec![3, 5, 4, 1, 0, 2],
        vec![4, 2, 5, 0, 1, 3],
        vec![5, 3, 1, 4, 2, 0],
    ];
    (table, vec![0, 1, 2, 4, 3, 5])
}

fn permutations3() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

fn sign(p: &[usize; 3]) -> f64 {
    let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Group algebra of `S₃` in its Fourier picture `ℂ ⊕ ℂ ⊕ M₂`: trivial,
/// sign and the real orthogonal two-dimensional representation.
pub fn s3_group_algebra() -> WeakHopf {
    let perms = permutations3();
    let b = DMatrix::from_row_slice(
        2,
        3,
        &[1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0, 1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()],
    );
    let mut u = DMatrix::<f64>::zeros(6, 6);
    for (g, p) in perms.iter().enumerate() {
        let mut pm = DMatrix::<f64>::zeros(3, 3);
        for i in 0..3 {
            pm[(p[i], i)] = 1.0;
        }
        let rho = &b * pm * b.transpose();
        u[(0, g)] = 1.0;
        u[(1, g)] = sign(p);
        for (k, v) in [rho[(0, 0)], rho[(0, 1)], rho[(1, 0)], rho[(1, 1)]].into_iter().enumerate() {
            u[(2 + k, g)] = v;
        }
    }
    let ui = u.clone().try_inverse().expect("Fourier matrix is invertible");
    let pairs: Vec<DMatrix<C64>> = (0..6)
        .map(|a| {
            let mut c = DMatrix::<f64>::zeros(6, 6);
            for g in 0..6 {
                c += ui[(g, a)] * u.column(g) * u.column(g).transpose();
            }
            c.map(re)
        })
        .collect();
    let mut inv = DMatrix::<f64>::zeros(6, 6);
    for (g, p) in perms.iter().enumerate() {
        let mut q = [0; 3];
        for i in 0..3 {
            q[p[i]] = i;
        }
        let h = perms.iter().position(|r| *r == q).unwrap();
        inv[(h, g)] = 1.0;
    }
    let kappa = (&u * inv * &ui).map(re);
    let eps = DVector::from_iterator(6, (0..6).map(|a| re(ui.column(a).sum())));
    from_pairs(BlockAlgebra::new(vec![1, 1, 2], "C[S3]").unwrap(), &pairs, kappa, eps)
}

/// `Δ ↦ JΔ(·)J⁻¹` with `J = exp(t(iσ ⊗ z + z ⊗ iσ))`, where `σ = e₁₂ − e₂₁`
/// in the `M₂` block and `z` is that block's central projection. `J` is
/// positive rather than unitary, so only `Δ(x*) = Δ(x)*` breaks.
pub fn nonunitary_twist(w: &WeakHopf, t: f64) -> WeakHopf {
    let alg = w.algebra().clone();
    let l = w.layout().clone();
    let z = alg.central_projection(2);
    let isigma = (&alg.unit(alg.index(2, 0, 1)) - &alg.unit(alg.index(2, 1, 0))).scale(C64::new(0.0, 1.0));
    let one = l.element(&alg.one(), &alg.one());
    let p = l.element(&z, &z);
    let exp = |y: &AlgElement, s: f64| &(&(&one - &p) + &p.scale_re(s.cosh())) + &y.scale_re(s.sinh());
    let y = l.element(&isigma, &z);
    let x = l.element(&z, &isigma);
    let j = &exp(&y, t) * &exp(&x, t);
    let j_inv = &exp(&x, -t) * &exp(&y, -t);
    let mut delta = DMatrix::zeros(l.product().dim(), alg.dim());
    for (a, u) in alg.basis().enumerate() {
        delta.set_column(a, &(&(&j * &w.coproduct(&u)) * &j_inv).coords());
    }
    w.with_maps(delta, w.kappa().matrix().clone(), w.eps_vector()).unwrap()
}

fn rotation(alg: &BlockAlgebra, theta: f64) -> AlgElement {
    let n = alg.blocks()[0];
    let mut m = DMatrix::<C64>::identity(n, n);
    let (s, c) = theta.sin_cos();
    m[(0, 0)] = re(c);
    m[(0, 1)] = re(-s);
    m[(1, 0)] = re(s);
    m[(1, 1)] = re(c);
    AlgElement::from_blocks(vec![m]).unwrap()
}

fn conjugation(alg: &BlockAlgebra, u: &AlgElement, u_inv: &AlgElement) -> DMatrix<C64> {
    LinearMap::sandwich(alg, u, u_inv).into_matrix()
}

pub fn mutants() -> Vec<Mutant> {
    let mut out = Vec::new();

    // Z/3: adding s(δ₁⊗δ₁ + δ₂⊗δ₂) to Δ(δ₀) and removing sδ_g⊗δ_g from
    // Δ(δ_g) keeps Δ(1), coassociativity and the counit but not products.
    let w = z3();
    let mut pairs: Vec<_> = (0..3).map(|c| w.delta_pairs(c)).collect();
    let s = re(0.5);
    pairs[0][(1, 1)] += s;
    pairs[0][(2, 2)] += s;
    pairs[1][(1, 1)] -= s;
    pairs[2][(2, 2)] -= s;
    out.push(Mutant {
        axiom: AXIOM_NAMES[0],
        description: "Z/3 function algebra with a shifted diagonal in the coproduct",
        structure: from_pairs(w.algebra().clone(), &pairs, w.kappa().matrix().clone(), w.eps_vector()),
    });

    out.push(Mutant {
        axiom: AXIOM_NAMES[1],
        description: "S3 group algebra twisted by a positive non-unitary element",
        structure: nonunitary_twist(&s3_group_algebra(), 0.3),
    });

    let (table, inverse) = nonassociative_loop();
    out.push(Mutant {
        axiom: AXIOM_NAMES[2],
        description: "function algebra of a non-associative loop of order 6",
        structure: magma_function_algebra(&table, &inverse, 0),
    });

    let w = pair_groupoid_wha(2).unwrap();
    out.push(Mutant {
        axiom: AXIOM_NAMES[3],
        description: "pair groupoid on 2 objects with antipode negated",
        structure: w.with_maps(w.delta().matrix().clone(), -w.kappa().matrix(), w.eps_vector()).unwrap(),
    });

    let w = pair_groupoid_wha(2).unwrap();
    let g = AlgElement::from_real_diagonal(w.algebra(), &[1.0, 2.0]).unwrap();
    let g_inv = AlgElement::from_real_diagonal(w.algebra(), &[1.0, 0.5]).unwrap();
    let kappa = conjugation(w.algebra(), &g, &g_inv) * w.kappa().matrix();
    out.push(Mutant {
        axiom: AXIOM_NAMES[4],
        description: "pair groupoid on 2 objects, antipode followed by a non-unitary inner automorphism",
        structure: w.with_maps(w.delta().matrix().clone(), kappa, w.eps_vector()).unwrap(),
    });

    let w = op_tensor_wha(&BlockAlgebra::matrix(2)).unwrap();
    let u = rotation(w.algebra(), 0.4);
    let ad = conjugation(w.algebra(), &u, &u.adjoint());
    let ad_inv = conjugation(w.algebra(), &u.adjoint(), &u);
    out.push(Mutant {
        axiom: AXIOM_NAMES[5],
        description: "op-tensor of M2 with antipode conjugated by a unitary automorphism",
        structure: w.with_maps(w.delta().matrix().clone(), &ad * w.kappa().matrix() * ad_inv, w.eps_vector()).unwrap(),
    });

    let w = z3();
    out.push(Mutant {
        axiom: AXIOM_NAMES[6],
        description: "Z/3 function algebra with the identity as antipode",
        structure: w.with_maps(w.delta().matrix().clone(), DMatrix::identity(3, 3), w.eps_vector()).unwrap(),
    });

    out.push(Mutant {
        axiom: AXIOM_NAMES[7],
        description: "Z/3 function algebra with zero counit",
        structure: w.with_maps(w.delta().matrix().clone(), w.kappa().matrix().clone(), DVector::zeros(3)).unwrap(),
    });

    let w = pair_groupoid_wha(3).unwrap();
    let u = rotation(w.algebra(), 0.4);
    let eps = (w.eps().matrix() * conjugation(w.algebra(), &u, &u.adjoint())).row(0).transpose();
    out.push(Mutant {
        axiom: AXIOM_NAMES[8],
        description: "pair groupoid on 3 objects, counit composed with a unitary automorphism",
        structure: w.with_maps(w.delta().matrix().clone(), w.kappa().matrix().clone(), eps).unwrap(),
    });

    let w = pair_groupoid_wha(3).unwrap();
    let g = AlgElement::from_real_diagonal(w.algebra(), &[1.0, 2.0, 3.0]).unwrap();
    let g_inv = AlgElement::from_real_diagonal(w.algebra(), &[1.0, 0.5, 1.0 / 3.0]).unwrap();
    let eps = (w.eps().matrix() * conjugation(w.algebra(), &g, &g_inv)).row(0).transpose();
    out.push(Mutant {
        axiom: AXIOM_NAMES[9],
        description: "pair groupoid on 3 objects, counit composed with a non-unitary inner automorphism",
        structure: w.with_maps(w.delta().matrix().clone(), w.kappa().matrix().clone(), eps).unwrap(),
    });

    out
}
