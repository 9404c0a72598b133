//! Numerical toolkit for finite-dimensional C*-quantum groupoids (weak Hopf
//! C*-algebras).
//!
//! Algebras are direct sums of full matrix blocks; structure maps are dense
//! matrices over the matrix-unit basis. On top of that sit the separating
//! element calculus, the weak Hopf axiom checker with Cartan subalgebras and
//! Haar structures, the canonical element `q` and the deformation by
//! admissible base elements `k`.

pub mod algebra;
pub mod deform;
mod error;
pub mod instances;
pub mod io;
pub mod separating;
pub mod weak_hopf;

pub use algebra::{AlgElement, BlockAlgebra, GaugedInvolution, LinearMap};
pub use error::{Error, Result};
pub use weak_hopf::{StructureReport, WeakHopf};

/// Complex scalars.
pub type C64 = num_complex::Complex64;

/// Default tolerance for an algebra of dimension `dim`, applied to
/// norm-scaled residuals.
pub fn default_tol(dim: usize) -> f64 {
    1e-9 * dim.max(1) as f64
}
