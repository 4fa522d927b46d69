//! Dunkl kernel, scalar fields and Dunkl derivatives.

mod dd;
pub mod derivative;
pub mod field;
pub mod kernel;

pub use derivative::{dunkl_derivative, dunkl_derivative_multi, dunkl_laplacian};
pub use field::{NumPoly, ScalarField};
pub use kernel::{dunkl_kernel, dunkl_kernel_real, rank_one_imag, rank_one_real};
