//! Finite-dimensional C*-algebras as direct sums of matrix blocks.

mod block;
mod involution;
pub mod linalg;
mod linmap;
pub mod recover;
pub mod spectral;
pub mod tensor;

pub use block::{AlgElement, BlockAlgebra};
pub use involution::{GaugedInvolution, Standardization};
pub use linmap::LinearMap;
pub use recover::{recover_matrix_units, Subalgebra};
pub use tensor::{flip, tensor, tensor_map, TensorLayout};
