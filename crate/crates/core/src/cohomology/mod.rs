//! The bar-resolution cochain complex, ordinary and Tate cohomology, and the
//! restriction/corestriction/inflation/connecting maps between cohomology
//! groups.
//!
//! The displayed differential is the standard inhomogeneous bar differential;
//! it is validated by the square-zero identity on materialized complexes,
//! by H^0 = fixed points, and by H^1 = crossed homomorphisms on the test
//! inventory. Kernels and images are always cut out by Smith reductions of
//! the (streamed, sparse) differential matrices, never by enumerating
//! cochains.

mod complex;
mod compute;
mod maps;

pub use complex::{build_complex, CochainComplex};
pub use compute::{
    cohomology, cohomology_space, cyclic_closed_form, tate_cohomology, CohomologyResult,
    CohomologySpace,
};
pub use maps::{
    connecting_hom, coprime_vanishing_check, corestriction, corestriction_hom,
    fixed_point_module, inflation, inflation_hom, inflation_restriction_check, les_window_check,
    restriction, restriction_hom, shapiro_check,
};

#[cfg(test)]
mod tests;
