//! Distance reporting on planar (and low-dimensional) integer point sets.
//!
//! Points on the grid `[0, 2^omega)^D` are sorted by their rank along a
//! recursive space-filling curve (Z-order or Hilbert). Every quadtree cell
//! then owns one contiguous run of that array, so a radius query becomes at
//! most `2^D` binary searches followed by linear scans.
//!
//! The code word type is generic (`u16` .. `u128`, see [`CodeWord`]); the
//! aliases at the crate root fix the common two-dimensional, 64-bit case.

pub mod code;
pub mod datagen;
pub mod dynamic;
pub mod encoding;
mod error;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod query;
mod radix;
pub mod static_index;

pub use code::CodeWord;
pub use dynamic::LogIndex;
pub use encoding::{cell_code_range, CurveKind};
pub use error::{Error, Result};
pub use geometry::{Cell, Code, CodeRange, Domain, Point};
pub use oracle::{brute_force_query, BruteForce};
pub use query::{bounding_box, cells, DistanceQuery, Metric, QueryBox};
pub use static_index::{BuildOptions, StaticIndex};

/// Planar point with 32-bit coordinates.
pub type Point2 = Point<2>;
/// Planar domain; `omega <= 32`.
pub type Domain2 = Domain<2>;
/// Planar static index with 64-bit codes, enough for every `omega <= 32`.
pub type StaticIndex2 = StaticIndex<u64, 2>;
/// Planar insertion-only index with 64-bit codes.
pub type LogIndex2 = LogIndex<u64, 2>;
/// Three-dimensional Z-order index; `3 * 32` bits need a 128-bit code.
pub type StaticIndex3 = StaticIndex<u128, 3>;
/// Four-dimensional Z-order index.
pub type StaticIndex4 = StaticIndex<u128, 4>;
