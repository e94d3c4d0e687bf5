//! Exact rational polyhedral kernel: representations, projection, and
//! canonical finite unions of upper sets.

mod dd;
mod fm;
mod polyhedron;
mod upper_set;

pub use dd::{cone_generators, ConeGenerators};
pub use polyhedron::{Halfspace, Polyhedron, VRep};
pub use upper_set::{Combine, UpperSet};

/// Decides feasibility of a system that may contain strict rows.
pub fn is_feasible(dim: usize, rows: &[Halfspace]) -> bool {
    fm::feasible(rows, dim)
}
