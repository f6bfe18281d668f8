//! Jones representations of braid groups at roots of unity, numerical density
//! certificates, braid-word compilation of quantum gates, and a simulator of qubits
//! encoded in the SU(2) level-`r` disk spaces.
//!
//! The modules build on one another:
//!
//! - [`fusion`]: labels, fusion rules and disk-space dimensions.
//! - [`tableaux`]: two-row tableaux, axial distances and their fusion paths.
//! - [`jonesrep`]: projector and generator matrices of each sector.
//! - [`density`]: commutants and Lie-algebra closure of the generator logs.
//! - [`compiler`]: projective distance, word nets, Solovay-Kitaev and budgeted search.
//! - [`encsim`]: encoded registers, label and `sigma_z` measurements, circuit simulation.

pub mod compiler;
pub mod density;
pub mod encsim;
pub mod error;
pub mod fixtures;
pub mod fusion;
pub mod jonesrep;
pub mod linalg;
pub mod tableaux;

pub use error::{Error, Result};
pub use fusion::{admissible, disk_dimension, glue_decompose, FusionContext, SectorTable};
pub use jonesrep::{build_sector, evaluate, spectrum, verify_relations, BraidWord, SectorRep};
pub use tableaux::{enumerate_diagrams, enumerate_tableaux, StandardTableau, YoungDiagram};
