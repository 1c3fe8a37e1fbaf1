//! Planar geometry in a local east-north frame measured in meters.

mod distance;
mod hull;
mod offset;
mod point;
mod polygon;
mod predicates;
mod ring;

pub use distance::{closest_boundary_points, closest_point_on_boundary, BoundaryContact};
pub use hull::{convex_hull, min_width};
pub(crate) use hull::hull_vertices;
pub use offset::{difference, intersection, offset_inward, offset_outward};
pub use point::{point_segment_distance, project_on_segment, Point2};
pub use polygon::{path_length, Polygon, Polyline, DUPLICATE_VERTEX_TOL, WAYPOINT_MERGE_TOL};
pub use predicates::{
    point_in_polygon, segment_clips_polygon, segment_enters_interior, segment_pieces,
    segments_intersect, segments_parallel, Containment, SegmentPiece, BOUNDARY_TOL, PARALLEL_TOL,
};
pub use ring::Ring;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate ({}, {})", .0.x, .0.y)]
    NonFinite(Point2),
    #[error("need at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("self-intersection near ({}, {})", .at.x, .at.y)]
    SelfIntersection { at: Point2 },
    #[error("polygons overlap")]
    Overlap,
}
