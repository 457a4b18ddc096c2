//! Adams E2 charts over the mod 2 Steenrod algebra, vanishing-line checks for the
//! charts of stunted projective spaces, and the integer bookkeeping behind the
//! splitting range and the H2 assembly.

pub mod assembly;
pub mod chart;
pub mod error;
pub mod f2;
pub mod lines;
pub mod module;
pub mod resolution;
pub mod splitrange;
pub mod steenrod;

pub use chart::ExtChart;
pub use error::{Error, Result};
pub use resolution::{induced_ext_map, minimal_resolution, ExtMap, Resolution};
