pub mod bimonoid;
pub mod cli;
pub mod error;
pub mod format;
pub mod graded;
pub mod linalg;
pub mod linmap;
pub mod mcat;
pub mod monoidal;
pub mod morphism;
pub mod multiplier;
pub mod mutation;
pub mod report;
pub mod scalar;
pub mod semigroup;
pub mod suite;
pub mod zoo;
