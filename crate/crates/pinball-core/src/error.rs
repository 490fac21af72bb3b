use thiserror::Error;

/// Errors shared across the geometry, dynamics and stability layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polygon boundary intersects itself")]
    NonSimplePolygon,
    #[error("polygon vertices are clockwise; counterclockwise order required")]
    ClockwiseOrientation,
    #[error("side {side} is degenerate (zero length)")]
    DegenerateSide { side: usize },
    #[error("ray starts at a corner of the polygon")]
    VertexStart,
    #[error("ray is within tolerance of grazing the boundary (|theta| too close to pi/2)")]
    GrazingRay,
    #[error("supporting lines of sides {from} and {to} are parallel along this direction")]
    ParallelLines { from: usize, to: usize },
    #[error("itinerary is not realizable: {reason}")]
    IllegalItinerary { reason: String },
    #[error("trajectory crosses a vertex while unfolding")]
    VertexCrossing,
    #[error("orbit hit a vertex of the polygon")]
    VertexHit,
    #[error("reflected angle left (-pi/2, pi/2) at step {step}")]
    AngleOverflow { step: usize },
    #[error("operation requires an even itinerary period, got {period}")]
    OddPeriod { period: usize },
    #[error("base interval of the cylinder is empty")]
    EmptyInterval,
    #[error("alternating angle sum is {sum:.6e}, no periodic orbit with this itinerary")]
    NecessaryConditionFailed { sum: f64 },
    #[error("coordinate {s} lies outside the base interval [{lo}, {hi}]")]
    OutsideBase { s: f64, lo: f64, hi: f64 },
    #[error("invalid bracket: need a < b inside the base interval")]
    InvalidBracket,
    #[error("return map has slope one away from lambda = 1")]
    SlopeOne,
    #[error("unknown catalog polygon `{0}`")]
    UnknownName(String),
    #[error("bad catalog parameter: {0}")]
    BadParameter(String),
    #[error("ray left the polygon without hitting the boundary")]
    NoBoundaryHit,
    #[error("cannot parse polygon file: {0}")]
    PolygonParse(String),
    #[error("cannot parse itinerary: {0}")]
    ItineraryParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
