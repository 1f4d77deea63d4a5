//! Fixtures shared by the benchmarks in `benches/`.

use corona_core::certify::crossing_near_origin;
use corona_core::{Crossing, MultigridSpec};

/// Offsets-½ pentagrid and the crossing nearest its origin.
pub fn pentagrid_seed() -> (MultigridSpec, Crossing) {
    let spec = MultigridSpec::pentagrid(0.5).expect("valid pentagrid");
    let seed = crossing_near_origin(&spec).expect("pentagrid has crossings");
    (spec, seed)
}
