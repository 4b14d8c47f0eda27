//! Exact-arithmetic group cohomology at desk scale.
//!
//! Everything is computed over `Z` with arbitrary-precision integers: finite
//! abelian groups in invariant-factor normal form, modules over finite groups
//! given by Cayley tables, bar-resolution cochain complexes, Tate cohomology,
//! the restriction/corestriction/inflation maps, `F_l[G]`-module composition
//! series, and the closed-form local and archimedean Euler characteristic
//! identities those pieces feed into.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so independent computations may run concurrently without any
//! synchronization.

pub mod abelian;
pub mod archimedean;
pub mod budget;
pub mod cohomology;
pub mod error;
pub mod gmodule;
pub mod localfield;
pub mod reptheory;
pub mod report;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use report::{Check, Report};
