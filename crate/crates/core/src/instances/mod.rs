//! Finite groups and the ambient instances built from them.

mod crossed;
mod group;

pub use crossed::{crossed_module_iso, groupoid_to_xmod, xmod_to_groupoid, CrossedModule};
pub use group::FiniteGroup;
