use thiserror::Error;

use crate::geom::Point;
use crate::multigrid::LineId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("homothety ratio must be positive, got {0}")]
    NonPositiveRatio(f64),

    #[error("invalid multigrid: {0}")]
    InvalidSpec(String),

    #[error("lines {0} and {1} belong to the same grid")]
    ParallelLines(LineId, LineId),

    #[error("grid {0} is the grid of the line itself")]
    SameGrid(usize),

    #[error("point {0} is not on line {1}")]
    NotOnLine(Point, LineId),

    #[error("point {0} is not a crossing of line {1}")]
    NotACrossing(Point, LineId),

    #[error("multigrid is singular near {0}")]
    SingularMultigrid(Point),

    #[error("grids {0:?} have no line through the patch")]
    GridNotRepresented(Vec<usize>),

    #[error("point {0} lies on a grid line")]
    OnGridLine(Point),

    #[error("patch is empty")]
    EmptyPatch,

    #[error("patch is not connected")]
    DisconnectedPatch,

    #[error("exploration exceeded the cap of {0} crossings")]
    ResourceLimit(usize),

    #[error("graph distance exceeds the cap of {0}")]
    Unreachable(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("crossing {0} is not in the window")]
    NotInWindow(String),

    #[error("avalanche reached the window boundary in round {0}")]
    BoundaryContamination(usize),

    #[error("scene has nothing to draw")]
    EmptyScene,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),
}
