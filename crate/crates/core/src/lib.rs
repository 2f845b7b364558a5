//! Exact combinatorics and measures for dually-weighted triangulations and
//! their trivalent ribbon graphs.

pub mod complex;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod numeric;
pub mod pairing;
pub mod polygon;
pub mod ribbon;

pub use complex::{build_triangulation, Label, Slot, Triangulation, TriangulationError};
pub use ribbon::{dualize, RibbonGraph};
