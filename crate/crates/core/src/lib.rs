//! Noncrossing partition lattices of the groups `G(d,d,n)` and `G(1,1,n)`:
//! construction in absolute order, symmetric Boolean and symmetric chain
//! decompositions, and Sperner-type checks on graded posets.

pub mod cli_io;
pub mod colored_perm;
pub mod error;
pub mod nc_decomp;
pub mod poset_core;
pub mod reflection_order;
pub mod sperner_engine;

pub use colored_perm::{ColoredPermutation, GroupParams, Reflection};
pub use error::{Error, Result};
pub use poset_core::{Decomposition, GradedPoset};
pub use reflection_order::NCLattice;
