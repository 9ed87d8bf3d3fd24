//! Collar-parameter coordinates for hyperbolic collars and linear measured
//! foliations on the annulus, with the once-punctured-torus realization of
//! the collar surface through SL(2, R) traces.

pub mod converters;
pub mod error;
pub mod foliation;
pub mod geometry;
pub mod holonomy;
pub mod metric;
mod solve;
pub mod special;
pub mod tolerance;
pub mod word;

pub use error::{Error, Result};
pub use geometry::{CollarParams, TriangleLengths};
pub use tolerance::Tolerance;
