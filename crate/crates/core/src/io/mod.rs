//! Configuration, SVG, CSV and tile export.

pub mod config;
pub mod csv;
pub mod export;
pub mod svg;

pub use config::{parse_spec, serialize_spec, Config, RunParams, Seed};
pub use csv::{
    charpoly_csv, convergence_csv, endpoints_csv, equivalence_csv, frontier_csv, sandwich_csv,
};
pub use export::tiles_jsonl;
pub use svg::{render_svg, Layer, SceneSpec, ShadedPolygon, Style, Viewport};
