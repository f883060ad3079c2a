//! Exact planar primitives: orientation, hulls, separation, caps and cups,
//! segment crossings, halving lines and vertical splits.

mod ham;
mod hull;
mod point;
mod predicates;
mod split;

pub use ham::{ham_sandwich, ham_sandwich_from, HalvingCut};
pub use hull::{convex_hull, hulls_intersect, line_meets_hull, separated};
pub use point::{OrientedLine, Point, PointId, PointSet, Segment};
pub use predicates::{
    convex_position, in_general_position, in_general_position_brute, is_cap, is_cup, orientation,
    point_in_triangle, segments_cross, segments_cross_pts, Orientation,
};
pub(crate) use split::balanced_sizes;
pub use split::vertical_split;

/// Hull vertex ids of a subset, counterclockwise.
pub fn hull_ids(set: &PointSet, ids: &[PointId]) -> Vec<PointId> {
    let pts = set.gather(ids);
    convex_hull(&pts).into_iter().map(|i| ids[i]).collect()
}
