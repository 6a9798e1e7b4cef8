//! Exact computation in relatively stable module categories of finite group
//! algebras over prime fields.

pub mod audit;
pub mod catalog;
pub mod constructions;
pub mod error;
pub mod ff;
pub mod groups;
pub mod homs;
pub mod io;
pub mod relative;
pub mod reps;
pub mod triangles;

pub use error::{Error, Result};
pub use ff::{FpMatrix, Prime};
pub use groups::{FiniteGroup, Subgroup};
pub use relative::RelativeContext;
pub use reps::{Module, Morphism, ShortExactSequence};
