pub mod cli;
pub mod endo;
pub mod error;
pub mod format;
pub mod group;
pub mod growth;
pub mod laws;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod products;
pub mod spec;

pub use error::{Error, Result};
pub use group::{Element, Group, GroupKind, LengthMode, LengthValue, Word};
pub use matrix::IntMatrix;
