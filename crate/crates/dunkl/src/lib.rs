//! Dunkl analysis for the reflection group Z₂^d.
//!
//! The crate covers the rank-one product kernel, Dunkl derivatives, an exact
//! symbolic engine for higher-order Leibniz expansions, the Dunkl transform on
//! weighted quadrature grids, heat and fractional semigroups with their square
//! functions, modified Hörmander condition checks, and a multiplier harness.

pub mod dsl;
pub mod dunkl_core;
pub mod error;
pub mod harness;
pub mod hormander;
pub mod leibniz;
pub mod poly;
pub mod quadrature;
pub mod root_system;
pub mod semigroup;
pub mod transform;

mod par;

pub use error::{DunklError, Result};
pub use num_complex::Complex64;
pub use root_system::ReflectionGroupSpec;
