use thiserror::Error;

/// Errors raised by the geometry, group and statistics layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("point ({x}, {y}) is not inside the open unit disk")]
    OutsideDisk { x: f64, y: f64 },
    #[error("boundary arc half-width {0} is outside (0, pi]")]
    InvalidArc(f64),
    #[error("degenerate geodesic: endpoints coincide")]
    DegenerateGeodesic,
    #[error("the trivial loop has no direction")]
    TrivialLoop,
    #[error("generator index {index} is invalid for a presentation with {generators} generators")]
    InvalidGenerator { index: i32, generators: usize },
    #[error("arcs overlap; the pair measure is only defined on disjoint arcs")]
    OverlappingArcs,
    #[error("invalid sector: half-angle {0} is outside (0, pi]")]
    InvalidSector(f64),
    #[error("invalid coset scheme: {0}")]
    InvalidScheme(String),
    #[error("invalid box parameters: {0}")]
    InvalidBox(String),
    #[error("grid value {requested} exceeds census radius {radius} by {deficit}")]
    GridExceedsCensus {
        requested: f64,
        radius: f64,
        deficit: f64,
    },
    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = GeoError> = std::result::Result<T, E>;
