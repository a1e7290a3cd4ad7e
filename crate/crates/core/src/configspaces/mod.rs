//! Configuration spaces of manifolds: the `E_2` page of the Leray spectral
//! sequence, its explicit model with differential, and Betti numbers of
//! unordered and colored configuration spaces.

pub mod descriptor;
pub mod e2;
pub mod explicit;
pub mod betti;

pub use descriptor::{bundled, bundled_names, load_manifold, DescriptorError, Manifold};
pub use e2::{block_report, e2_character, e2_characters, set_partitions, BlockRow};
