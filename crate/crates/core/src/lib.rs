//! Finite presheaf models, left Kan extensions and the game of reflection.

pub mod catalog;
pub mod criterion;
pub mod digest;
pub mod error;
pub mod finbase;
pub mod fincat;
pub mod kan;
pub mod presheaf;
pub mod reflection;
pub mod sample;

pub use error::{Error, Result, Violation};
pub use finbase::{ElemId, FinFun, FinSet, Workspace};
pub use fincat::FinCat;
pub use presheaf::{Presheaf, PresheafModel, PsMorphism};
