//! Multigrids, their dual rhombus tilings, corona growth and limit shapes.
//!
//! A multigrid is `d` families of parallel lines. Every crossing of two lines
//! is dual to a rhombus of the tiling, and two tiles share an edge when their
//! crossings are consecutive on a line. Growing coronas from a seed tile and
//! normalizing by the corona index gives shapes that converge to a
//! characteristic `2d`-gon depending only on the line directions.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod certify;
pub mod dual;
pub mod error;
pub mod geom;
pub mod graph;
pub mod io;
pub mod multigrid;
pub mod sandpile;

pub use analysis::{
    char_polygon, char_polygon_chi, char_polygon_chi_dual, convergence_table, endpoints_diagnostic,
    CharPolygon, ConvergenceRow, EndpointsDiagnostic, Side,
};
pub use dual::{tile_of_crossing, tiling_window, Tile, TilingVertex, TilingWindow};
pub use error::{Error, Result};
pub use geom::{convex_hull, hausdorff_distance, Point, Polygon};
pub use graph::{corona_sequence, graph_distance, neighbors, CoronaSequence, Patch};
pub use multigrid::{Crossing, CrossingKey, LineId, MultigridSpec};
pub use sandpile::{corona_equivalence, max_stable, SandpileConfig};
