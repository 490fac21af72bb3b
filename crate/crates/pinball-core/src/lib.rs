//! Periodic orbits of polygonal pinball billiards.
//!
//! The crate models a point particle in a simple polygon whose reflection
//! law contracts (or expands) the reflection angle towards the normal by a
//! factor `lambda`. It decides which periodic cylinders of the elastic
//! billiard survive as `lambda` passes through 1, continues the surviving
//! fixed points across a parameter grid, searches phase space for the
//! periodic cycles of the contracted map, and ships a catalog of classical
//! tables (square, rectangles, regular polygons, the integrable right
//! triangles) against which everything is checked.

pub mod catalog;
pub mod cylinder;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod itinerary;
pub mod stability;
pub mod vec2;

pub use catalog::{known_polygon, KnownCase};
pub use cylinder::{AffineMap1d, Cylinder};
pub use dynamics::{
    billiard_step, find_attracting_cycles, involution, pinball_step, rho, solve_periodic_orbit,
    OrbitSegment, PhasePoint,
};
pub use error::{Error, Result};
pub use geometry::{BoundaryPoint, HitKind, Polygon, RayHit};
pub use itinerary::Itinerary;
pub use stability::{
    classify, continue_orbit, gsv_check, rectangle_admissible_slopes, slope_derivative,
    sufficient_check, ContinuationRow, StabilityReport, Verdict,
};
pub use vec2::Vec2;
