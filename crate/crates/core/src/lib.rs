//! Hadamard codes over `Z2^k1 x Z4^k2 x Q8^k3`: group arithmetic and the
//! Gray map, rank and kernel computation, structural classification, and
//! constructions realizing every allowable rank/kernel pair.

pub mod algebra;
pub mod binary;
pub mod code;
pub mod construct;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod structure;

pub use algebra::{AmbientSpace, GroupElement, Q8Element};
pub use binary::{BinaryWord, Gf2Basis};
pub use code::{BinaryCode, CodeGroup};
pub use construct::{construct_for, ConstructionPlan};
pub use error::{Error, Result};
pub use structure::{measure, standardize, Shape, StructureReport};
