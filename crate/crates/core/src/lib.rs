pub mod arnold;
pub mod characters;
pub mod configspaces;
pub mod equivariant;
pub mod linalg;
pub mod partitions;
pub mod perm;
pub mod specht;
pub mod stability;
pub mod tabloids;
