//! Exact linear algebra over Z and finite abelian groups in invariant-factor
//! normal form: the kernel/image/quotient engine the rest of the crate uses.

mod group;
mod hom;
mod matrix;
pub(crate) mod subquotient;

pub use group::{is_small_prime, length, FinAbGroup};
pub use hom::{hom_image, hom_kernel, quotient, AbHom};
pub(crate) use hom::{lcm_big, HomSolver};
pub use matrix::{smith_normal_form, IntMatrix};
pub(crate) use matrix::{smith_with, SmithForm, Transforms};

#[cfg(test)]
mod tests;
