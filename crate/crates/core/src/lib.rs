//! Finite posets and posets with interfaces (iposets).
//!
//! The crate covers serial/parallel composition of posets, gluing/parallel
//! composition of iposets, canonical forms, recognition of series-parallel,
//! interval and gluing-parallel (i)posets, and exhaustive enumeration up to
//! isomorphism.

pub mod canon;
pub mod doc;
pub mod enumerate;
pub mod error;
pub mod gp;
pub mod interval;
pub mod iposet;
pub mod laws;
pub mod patterns;
pub mod points;
pub mod poset;
pub mod sp;

pub use canon::CanonForm;
pub use error::{Error, Result};
pub use gp::GpTerm;
pub use iposet::Iposet;
pub use patterns::{find_induced, Embedding, Forbidden};
pub use points::PointSet;
pub use poset::Poset;
