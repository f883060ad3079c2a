//! Point sets whose largest spoke set is half again as large as their
//! largest crossing family.
//!
//! Start from a regular `k`-gon, `k` odd. Each vertex becomes two points on a
//! short segment perpendicular to its angle bisector, the bisectors form a
//! spoke set of size `k`, and `floor(k/2)` extra lines through the centre
//! bring it to `floor(1.5k)`. Every unbounded cell left empty by the extra
//! lines receives one point near the centre. The irrational polygon is
//! snapped to rationals and every claimed property is checked afterwards.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::families::{unbounded_cell_occupancy, verify_spoke_set, SpokeSet};
use crate::geom::{in_general_position, segments_cross_pts, OrientedLine, Point, PointId, PointSet};
use crate::oracles::{max_crossing_family_exact, OracleBudget};
use crate::{Error, Result};

/// Default snapping denominator.
pub const DEFAULT_SNAP: u64 = 64;
/// Largest denominator tried by [`build_prop7_auto`].
pub const MAX_SNAP: u64 = 1 << 24;

/// A checked instance: `3k - 1` points and a spoke set of `floor(1.5k)` lines.
#[derive(Clone, Debug, Serialize)]
pub struct Prop7Instance {
    pub k: usize,
    #[serde(serialize_with = "crate::io::serialize_points")]
    pub points: PointSet,
    pub lines: SpokeSet,
    pub snap: u64,
    /// Half the length of each vertex segment.
    #[serde(serialize_with = "crate::io::serialize_ratio")]
    pub epsilon: BigRational,
    /// Points inside the innermost cell of the complete graph on the
    /// `2k` segment endpoints.
    pub inner: Vec<PointId>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(cos a, sin a)` rounded to multiples of `1/snap`.
fn snapped_direction(angle: f64, snap: u64) -> Point {
    let s = snap as f64;
    let snap = snap as i64;
    Point::new(
        rat((angle.cos() * s).round() as i64, snap),
        rat((angle.sin() * s).round() as i64, snap),
    )
}

fn too_coarse(snap: u64, what: &str) -> Error {
    Error::SnapTooCoarse(snap, what.to_string())
}

/// Builds the instance for odd `k >= 3` at denominator `snap`.
///
/// Fails with [`Error::SnapTooCoarse`] when the rounded construction loses
/// one of its properties.
pub fn build_prop7(k: usize, snap: u64) -> Result<Prop7Instance> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("k must be odd and at least 3, got {k}")));
    }
    if snap < 4 || snap > i64::MAX as u64 / 16 {
        return Err(Error::InvalidInput(format!("snap {snap} out of range")));
    }
    let origin = Point::from_ints(0, 0);
    let epsilon = rat(8, 5 * snap as i64);
    let tau = std::f64::consts::TAU;
    let theta = |i: usize| std::f64::consts::FRAC_PI_2 + tau * i as f64 / k as f64;

    let vertices: Vec<Point> = (0..k).map(|i| snapped_direction(theta(i), snap)).collect();
    let mut outer = Vec::with_capacity(2 * k);
    for v in &vertices {
        let (tx, ty) = (-v.y() * &epsilon, v.x() * &epsilon);
        outer.push(Point::new(v.x() + &tx, v.y() + &ty));
        outer.push(Point::new(v.x() - &tx, v.y() - &ty));
    }
    let mut lines: Vec<OrientedLine> = vertices
        .iter()
        .map(|v| OrientedLine { p: origin.clone(), q: v.clone() })
        .collect();
    // Bisect l_i and l_{i + ceil(k/2)} for odd i (1-based) up to 2 floor(k/2) - 1.
    for i in (1..k).step_by(2) {
        let angle = theta(i - 1) + std::f64::consts::PI / (2 * k) as f64;
        lines.push(OrientedLine {
            p: origin.clone(),
            q: snapped_direction(angle, snap),
        });
    }

    let host = PointSet::new(outer.clone()).map_err(|_| too_coarse(snap, "segment endpoints coincide"))?;
    let spokes = SpokeSet { lines };
    let occupancy = unbounded_cell_occupancy(&spokes, &host).map_err(|_| too_coarse(snap, "parallel lines"))?;

    // Sector directions in angular order, to find a point in each empty cell.
    let mut rays: Vec<Point> = spokes
        .lines
        .iter()
        .flat_map(|l| [l.q.clone(), Point::new(-l.q.x(), -l.q.y())])
        .collect();
    rays.sort_by(|a, b| {
        let (ax, ay) = a.to_f64();
        let (bx, by) = b.to_f64();
        ay.atan2(ax).total_cmp(&by.atan2(bx))
    });
    let r0 = rat(1, 8 * k as i64);
    let mut inner_points = Vec::new();
    let empty = occupancy.iter().filter(|c| c.is_empty()).count();
    for j in 0..rays.len() {
        let (a, b) = (&rays[j], &rays[(j + 1) % rays.len()]);
        let r = &r0 * rat(4 * rays.len() as i64 + j as i64, 4 * rays.len() as i64);
        let c = Point::new((a.x() + b.x()) * &r, (a.y() + b.y()) * &r);
        let signs: Vec<_> = spokes.lines.iter().map(|l| l.side(&c)).collect();
        let taken = host
            .points()
            .iter()
            .any(|p| spokes.lines.iter().zip(&signs).all(|(l, &s)| l.side(p) == s));
        if !taken {
            inner_points.push(c);
        }
    }
    if inner_points.len() != empty {
        return Err(too_coarse(snap, "sector order disagrees with the arrangement"));
    }

    let in_inner_cell = |p: &Point| {
        (0..outer.len()).all(|a| (a + 1..outer.len()).all(|b| !segments_cross_pts(&origin, p, &outer[a], &outer[b])))
    };
    let inner_count_outer = outer.iter().filter(|p| in_inner_cell(p)).count();
    if inner_count_outer != 0 || !inner_points.iter().all(in_inner_cell) {
        return Err(too_coarse(snap, "added points leave the inner cell"));
    }

    let mut all = outer;
    all.extend(inner_points);
    let points = PointSet::new(all).map_err(|_| too_coarse(snap, "repeated point"))?;
    if !in_general_position(points.points()) {
        return Err(too_coarse(snap, "three collinear points"));
    }
    let points = points.certified()?;
    if points.len() != 3 * k - 1 || spokes.lines.len() != 3 * k / 2 {
        return Err(too_coarse(snap, "wrong counts"));
    }
    if !verify_spoke_set(&spokes, &points)? {
        return Err(too_coarse(snap, "an unbounded cell is empty"));
    }
    let inner = (2 * k..points.len()).map(PointId).collect();
    Ok(Prop7Instance {
        k,
        points,
        lines: spokes,
        snap,
        epsilon,
        inner,
    })
}

/// [`build_prop7`] from `snap`, doubling the denominator on each
/// [`Error::SnapTooCoarse`] up to [`MAX_SNAP`].
pub fn build_prop7_auto(k: usize, snap: u64) -> Result<Prop7Instance> {
    let mut snap = snap.max(4);
    loop {
        match build_prop7(k, snap) {
            Err(Error::SnapTooCoarse(..)) if snap < MAX_SNAP => snap *= 2,
            other => return other,
        }
    }
}

/// Exact maximum crossing family of the instance. Errors if it exceeds `k`.
pub fn check_prop7_crossing_bound(inst: &Prop7Instance, budget: &OracleBudget) -> Result<usize> {
    let size = max_crossing_family_exact(&inst.points, budget)?.family.len();
    if size > inst.k {
        return Err(Error::Invariant(format!(
            "crossing family of size {size} exceeds k = {}",
            inst.k
        )));
    }
    Ok(size)
}
