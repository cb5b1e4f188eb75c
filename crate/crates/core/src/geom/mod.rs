//! Exact planar geometry: points, polygonal domains, erosion by robot boxes,
//! trapezoidal decompositions and convex-region tests.

mod erosion;
mod hull;
mod point;
mod polygon;
mod trapezoid;

pub use erosion::{box_fits, inner_minkowski, segment_meets_open_box, swept_box_fits};
pub use hull::{contains_box, contains_unit_square, convex_hull, ConvexPolygon};
pub use point::{angle_cmp, l1_dist, linf_dist, orient, segment_intersections, Point, Segment};
pub use polygon::{
    canonicalize_ring, locate_in_ring, ring_area, ring_edges, signed_area2, EdgeRef, Location, PolygonalDomain,
};
pub(crate) use trapezoid::decompose_with_ids;
pub use trapezoid::{decompose, hull_of_two_trapezoids, point_trapezoid, Axis, Decomposition, Side, Trapezoid};
