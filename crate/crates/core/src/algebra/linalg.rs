//! Dense complex linear-algebra helpers: rank-revealing least squares,
//! null spaces and orthonormal bases, all through SVD.

use nalgebra::{DMatrix, DVector, SymmetricEigen, QR};

use crate::C64;

/// Result of a rank-revealing least-squares solve.
#[derive(Clone, Debug)]
pub struct LstsqSolution {
    pub x: DVector<C64>,
    pub rank: usize,
    /// Number of unknowns; `rank < unknowns` means the solution is not unique.
    pub unknowns: usize,
    pub residual: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
}

impl LstsqSolution {
    pub fn nullity(&self) -> usize {
        self.unknowns - self.rank
    }
}

/// Reduce a tall matrix to its `n × n` triangular factor so that the SVD runs
/// on a small matrix. Returns `(R, Qᴴ b)` truncated to `n` rows, plus the
/// squared norm of the discarded part of `Qᴴ b`.
fn reduce(a: &DMatrix<C64>, b: Option<&DVector<C64>>) -> (DMatrix<C64>, Option<DVector<C64>>, f64) {
    let (m, n) = a.shape();
    if m <= n {
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (m, n)).copy_from(a);
        let rhs = b.map(|b| {
            let mut r = DVector::zeros(n);
            r.rows_mut(0, m).copy_from(b);
            r
        });
        return (padded, rhs, 0.0);
    }
    let qr = QR::new(a.clone());
    let r = qr.r();
    match b {
        None => (r, None, 0.0),
        Some(b) => {
            let mut qb = b.clone();
            qr.q_tr_mul(&mut qb);
            let tail = qb.rows(n, m - n).norm_squared();
            (r, Some(qb.rows(0, n).into_owned()), tail)
        }
    }
}

/// Singular triplets of a square matrix, read off the Hermitian eigenproblem
/// of `[[0, r], [rᴴ, 0]]`, whose eigenvalues are `±σ` with eigenvectors
/// `[u; ±v] / √2`. nalgebra's complex SVD loses accuracy on clustered
/// singular values; its Hermitian eigensolver does not.
struct Svd {
    /// Descending.
    sigma: Vec<f64>,
    u: Vec<DVector<C64>>,
    v: Vec<DVector<C64>>,
}

impl Svd {
    fn new(r: &DMatrix<C64>) -> Self {
        let n = r.ncols();
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        h.view_mut((0, n), (n, n)).copy_from(r);
        h.view_mut((n, 0), (n, n)).copy_from(&r.adjoint());
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..2 * n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut sigma = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for &k in order.iter().take(n) {
            let col = eig.eigenvectors.column(k);
            sigma.push(eig.eigenvalues[k].max(0.0));
            u.push(normalized(col.rows(0, n).into_owned()));
            v.push(normalized(col.rows(n, n).into_owned()));
        }
        Self { sigma, u, v }
    }

    fn cutoff(&self, rcond: f64) -> f64 {
        rcond * self.sigma.first().copied().unwrap_or(0.0).max(1.0)
    }

    /// Number of singular values above the cutoff; only these triplets are
    /// reliable, the rest may mix `u` and `v`.
    fn rank(&self, rcond: f64) -> usize {
        let c = self.cutoff(rcond);
        self.sigma.iter().filter(|&&s| s > c).count()
    }
}

fn normalized(x: DVector<C64>) -> DVector<C64> {
    let n = x.norm();
    if n > 0.0 {
        x / C64::new(n, 0.0)
    } else {
        x
    }
}

/// Singular values of `a`, descending.
pub fn singular_values(a: &DMatrix<C64>) -> Vec<f64> {
    let (r, _, _) = reduce(a, None);
    Svd::new(&r).sigma
}

/// Minimum-norm least-squares solution of `a x = b`; singular values at or
/// below `rcond · max(1, σ_max)` are treated as zero.
pub fn lstsq(a: &DMatrix<C64>, b: &DVector<C64>, rcond: f64) -> LstsqSolution {
    let n = a.ncols();
    let (r, rb, _) = reduce(a, Some(b));
    let rb = rb.expect("rhs supplied");
    let svd = Svd::new(&r);
    let rank = svd.rank(rcond);
    let mut x = DVector::zeros(n);
    for k in 0..rank {
        let coef = svd.u[k].dotc(&rb) / svd.sigma[k];
        x += &svd.v[k] * coef;
    }
    let residual = (a * &x - b).norm();
    let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
    let sigma_min = svd.sigma.last().copied().unwrap_or(f64::INFINITY);
    LstsqSolution { x, rank, unknowns: n, residual, sigma_max, sigma_min }
}

/// Orthonormal basis (columns) of the null space of `a`.
pub fn null_space(a: &DMatrix<C64>, rcond: f64) -> DMatrix<C64> {
    let n = a.ncols();
    let (r, _, _) = reduce(a, None);
    let svd = Svd::new(&r);
    let rank = svd.rank(rcond);
    if rank == n {
        return DMatrix::zeros(n, 0);
    }
    // Complement of the reliable right singular vectors.
    let mut proj = DMatrix::<C64>::identity(n, n);
    for v in &svd.v[..rank] {
        proj -= v * v.adjoint();
    }
    let (_, vecs) = hermitian_eigen(&proj);
    vecs.columns(rank, n - rank).into_owned()
}

/// Orthonormal basis (columns) of the column span of `a`.
pub fn column_basis(a: &DMatrix<C64>, rcond: f64) -> DMatrix<C64> {
    let m = a.nrows();
    if a.ncols() == 0 {
        return DMatrix::zeros(m, 0);
    }
    // Work with aᴴ so the reduction yields the row space of aᴴ.
    let ah = a.adjoint();
    let (r, _, _) = reduce(&ah, None);
    // Right singular vectors of aᴴ are left singular vectors of a.
    let svd = Svd::new(&r);
    let rank = svd.rank(rcond);
    if rank == 0 {
        DMatrix::zeros(m, 0)
    } else {
        DMatrix::from_columns(&svd.v[..rank])
    }
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted
/// ascending. The input is symmetrized first.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let cols: Vec<DVector<C64>> = order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
    let vecs = if cols.is_empty() { DMatrix::zeros(0, 0) } else { DMatrix::from_columns(&cols) };
    (vals, vecs)
}

/// `sin` of the largest principal angle between two subspaces given by
/// orthonormal column bases of equal rank. Computed from the projection
/// residual, which stays accurate for tiny angles.
pub fn max_principal_angle_sin(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let resid = b - a * (a.adjoint() * b);
    singular_values(&resid).first().copied().unwrap_or(0.0)
}
