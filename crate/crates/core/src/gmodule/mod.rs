//! Finite groups by Cayley table and their actions on finite abelian groups:
//! duals, twists, induced modules, norm and augmentation constructions.

mod group;
mod module;

pub use group::{FiniteGroup, MAX_GROUP_ORDER};
pub use module::{
    augmentation_submodule, direct_sum_module, dual_module, fixed_points, induced_module,
    norm_map, quotient_module, restrict_module, submodule_from, twist, Character, GModule,
    ModuleSum, ShortExactSequence,
};
pub(crate) use module::augmentation_generators;

#[cfg(test)]
mod tests;
