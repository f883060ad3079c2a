//! Exact algorithms for crossing families, non-crossing families and convex
//! bundles in planar point sets.
//!
//! Every algorithm in this crate returns a certificate (a crossing family, a
//! non-crossing family, a convex bundle or a spoke set) that is checked by a
//! brute-force verifier before it leaves the function. Coordinates are exact
//! rationals, so every predicate is a sign computation with no rounding.
//!
//! The main entry points are [`bundle::find_bundle_or_noncrossing`] and
//! [`crossing::find_crossing_or_noncrossing`].

pub mod bundle;
pub mod crossing;
mod error;
pub mod families;
pub mod generate;
pub mod geom;
pub mod io;
pub mod oracles;
mod par;
pub mod same_type;
pub mod spoke;

pub use error::{Error, Result};
pub use geom::{Orientation, OrientedLine, Point, PointId, PointSet, Segment};
