//! Exact construction of points in finite intersections of weighted badly
//! approximable sets on a vertical line, with checkers for the supporting
//! geometry and transference statements.

pub mod construction;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod index_set;
pub mod lines;
pub mod transference;

pub use error::{Error, Result};
pub use exact::{QuadraticSurd, Rat, ThetaSpec};
pub use index_set::IndexSet;
pub use lines::{Line, Pair};
