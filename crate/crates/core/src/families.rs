//! Certificate types and their authoritative verifiers.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::geom::{
    convex_position, orientation, point_in_triangle, segments_cross_pts, Orientation, OrientedLine,
    Point, PointId, PointSet,
};
use crate::same_type::{triples, verify_same_type, SameTypeCertificate};
use crate::{par, Error, Result};

/// Pairwise crossing segments between points of the host set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingFamily {
    pub segments: Vec<(PointId, PointId)>,
    /// For the bipartite variant: every segment must join `sides[0]` to
    /// `sides[1]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<[Vec<PointId>; 2]>,
}

impl CrossingFamily {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Why a crossing family fails verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum CrossingDefect {
    UnknownPoint { id: PointId },
    SharedEndpoint { id: PointId },
    WrongSides { segment: usize },
    NotCrossing { first: usize, second: usize },
}

/// Every defect of `f` on `set`, in a fixed order. Empty iff the family is
/// valid.
pub fn crossing_family_defects(f: &CrossingFamily, set: &PointSet) -> Vec<CrossingDefect> {
    let mut defects = Vec::new();
    let mut seen = HashSet::new();
    for &(a, b) in &f.segments {
        for id in [a, b] {
            if !set.contains(id) {
                defects.push(CrossingDefect::UnknownPoint { id });
            } else if !seen.insert(id) {
                defects.push(CrossingDefect::SharedEndpoint { id });
            }
        }
    }
    if !defects.is_empty() {
        return defects;
    }
    if let Some([s1, s2]) = &f.sides {
        let (s1, s2): (HashSet<_>, HashSet<_>) = (s1.iter().collect(), s2.iter().collect());
        for (i, (a, b)) in f.segments.iter().enumerate() {
            let ok = (s1.contains(a) && s2.contains(b)) || (s1.contains(b) && s2.contains(a));
            if !ok {
                defects.push(CrossingDefect::WrongSides { segment: i });
            }
        }
    }
    let n = f.segments.len();
    let rows = par::map(n, |i| {
        let (a, b) = f.segments[i];
        ((i + 1)..n)
            .filter(|&j| {
                let (c, d) = f.segments[j];
                !segments_cross_pts(set.get(a), set.get(b), set.get(c), set.get(d))
            })
            .map(|j| CrossingDefect::NotCrossing {
                first: i,
                second: j,
            })
            .collect::<Vec<_>>()
    });
    defects.extend(rows.into_iter().flatten());
    defects
}

/// All endpoints are distinct points of `set`, every pair of segments
/// crosses, and with side labels every segment joins the two sides.
pub fn verify_crossing_family(f: &CrossingFamily, set: &PointSet) -> bool {
    crossing_family_defects(f, set).is_empty()
}

/// Four classes of points such that every `p4` from the last lies strictly
/// inside the triangle of every `p1, p2, p3` from the first three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonCrossingFamily {
    pub parts: [Vec<PointId>; 4],
}

impl NonCrossingFamily {
    pub fn size(&self) -> usize {
        self.parts.iter().map(Vec::len).min().unwrap_or(0)
    }

    fn well_formed(&self, set: &PointSet) -> bool {
        let mut seen = HashSet::new();
        self.parts.iter().all(|p| !p.is_empty())
            && self
                .parts
                .iter()
                .flatten()
                .all(|&id| set.contains(id) && seen.insert(id))
    }
}

/// Brute force over all `|P1| |P2| |P3| |P4|` quadruples.
pub fn verify_noncrossing_family(n: &NonCrossingFamily, set: &PointSet) -> bool {
    if !n.well_formed(set) {
        return false;
    }
    let [p1, p2, p3, p4] = &n.parts;
    par::all(p4.len(), |i| {
        let inner = set.get(p4[i]);
        p1.iter().all(|&a| {
            p2.iter().all(|&b| {
                p3.iter().all(|&c| {
                    point_in_triangle(inner, set.get(a), set.get(b), set.get(c)).unwrap_or(false)
                })
            })
        })
    })
}

/// Sufficient check: the four parts have the same-type property and one
/// representative quadruple has its `P4` point inside.
pub fn fast_noncrossing_check(n: &NonCrossingFamily, set: &PointSet) -> bool {
    if !n.well_formed(set) {
        return false;
    }
    let Some(cert) = verify_same_type(set, &n.parts) else {
        return false;
    };
    let w: Vec<&Point> = cert.witness.iter().map(|&id| set.get(id)).collect();
    point_in_triangle(w[3], w[0], w[1], w[2]).unwrap_or(false)
}

/// Disjoint parts such that every choice of one point per part is in convex
/// position, with the parts in convex cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexBundle {
    pub parts: Vec<Vec<PointId>>,
    pub certificate: SameTypeCertificate,
}

impl ConvexBundle {
    pub fn size(&self) -> usize {
        self.parts.len()
    }

    pub fn width(&self) -> usize {
        self.parts.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Builds the certificate from scratch; `None` if the parts are not
    /// same-type.
    pub fn from_parts(set: &PointSet, parts: Vec<Vec<PointId>>) -> Option<ConvexBundle> {
        let certificate = verify_same_type(set, &parts)?;
        Some(ConvexBundle { parts, certificate })
    }
}

/// Bundles with at most this many representative tuples are also checked
/// tuple by tuple.
pub const BUNDLE_BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Checks the stored certificate against a fresh brute-force same-type
/// check, then that the representatives are in convex position in the stored
/// cyclic order. By the same-type property this covers every choice of
/// representatives; small bundles are additionally enumerated tuple by tuple.
pub fn verify_convex_bundle(b: &ConvexBundle, set: &PointSet) -> bool {
    let mut seen = HashSet::new();
    if b.parts.is_empty()
        || b.parts.iter().any(Vec::is_empty)
        || !b
            .parts
            .iter()
            .flatten()
            .all(|&id| set.contains(id) && seen.insert(id))
    {
        return false;
    }
    let cert = &b.certificate;
    if cert.sets.len() != b.parts.len()
        || cert.witness.len() != b.parts.len()
        || cert
            .witness
            .iter()
            .zip(&b.parts)
            .any(|(w, p)| !p.contains(w))
    {
        return false;
    }
    match verify_same_type(set, &b.parts) {
        Some(fresh) if fresh.signature == cert.signature => {}
        _ => return false,
    }
    let reps: Vec<&Point> = cert.witness.iter().map(|&id| set.get(id)).collect();
    if !in_cyclic_convex_order(&reps) {
        return false;
    }

    let total: u128 = b.parts.iter().map(|p| p.len() as u128).product();
    if total <= BUNDLE_BRUTE_FORCE_LIMIT {
        let mut tuple = vec![0usize; b.parts.len()];
        loop {
            let pts: Vec<&Point> = tuple
                .iter()
                .zip(&b.parts)
                .map(|(&i, p)| set.get(p[i]))
                .collect();
            if !in_cyclic_convex_order(&pts) {
                return false;
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == tuple.len() {
                    return true;
                }
                tuple[pos] += 1;
                if tuple[pos] < b.parts[pos].len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }
    true
}

/// The points, in the given order, are the vertices of a convex polygon
/// traversed once: every triple `i < j < k` has the same nonzero orientation.
pub fn in_cyclic_convex_order(pts: &[&Point]) -> bool {
    if pts.len() < 3 {
        return pts.len() < 2 || pts[0] != pts[1];
    }
    let first = orientation(pts[0], pts[1], pts[2]);
    !first.is_collinear()
        && triples(pts.len())
            .into_iter()
            .all(|(i, j, k)| orientation(pts[i], pts[j], pts[k]) == first)
}

/// Joins the witness of part `i` to the witness of part `i + k` in a bundle of
/// size `2k`. Opposite chords of a convex polygon pairwise cross.
pub fn bundle_to_crossing_family(b: &ConvexBundle, set: &PointSet) -> Result<CrossingFamily> {
    if b.size() % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "bundle size {} is odd",
            b.size()
        )));
    }
    let k = b.size() / 2;
    let w = &b.certificate.witness;
    let family = CrossingFamily {
        segments: (0..k).map(|i| (w[i], w[i + k])).collect(),
        sides: None,
    };
    if !verify_crossing_family(&family, set) {
        return Err(Error::Invariant(
            "opposite chords of a bundle do not cross".into(),
        ));
    }
    Ok(family)
}

/// Pairwise non-parallel lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpokeSet {
    pub lines: Vec<OrientedLine>,
}

/// A spoke set of the same size as a crossing family.
///
/// The line through a segment holds both endpoints, so the lines are rotated
/// counterclockwise by the same small angle about the segment midpoints. All
/// crossings with the other segments stay inside each segment, so every
/// endpoint lands in the unbounded cell just clockwise of its ray. The angle
/// is halved until the exact verifier accepts.
pub fn spoke_set_from_family(f: &CrossingFamily, set: &PointSet) -> Result<SpokeSet> {
    if !verify_crossing_family(f, set) {
        return Err(Error::InvalidInput("not a crossing family".into()));
    }
    let two = BigRational::from_integer(2.into());
    let mut delta = BigRational::new(1.into(), 16.into());
    for _ in 0..64 {
        let lines: Vec<OrientedLine> = f
            .segments
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (set.get(a), set.get(b));
                let mid = Point::new((a.x() + b.x()) / &two, (a.y() + b.y()) / &two);
                let (dx, dy) = (b.x() - a.x(), b.y() - a.y());
                let tip = Point::new(mid.x() + &dx - &delta * &dy, mid.y() + &dy + &delta * &dx);
                OrientedLine { p: mid, q: tip }
            })
            .collect();
        let spokes = SpokeSet { lines };
        if matches!(verify_spoke_set(&spokes, set), Ok(true)) {
            return Ok(spokes);
        }
        delta /= &two;
    }
    Err(Error::Invariant(
        "no rotation of the family lines gives a spoke set".into(),
    ))
}

type Vector = (BigRational, BigRational);

fn cross(u: &Vector, v: &Vector) -> BigRational {
    &u.0 * &v.1 - &u.1 * &v.0
}

/// Angular order of nonzero vectors, starting at the positive x-axis.
fn angle_cmp(u: &Vector, v: &Vector) -> Ordering {
    let half = |w: &Vector| !(w.1.is_positive() || (w.1.is_zero() && w.0.is_positive()));
    half(u).cmp(&half(v)).then_with(|| {
        let c = cross(u, v);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Sign vectors of the unbounded cells of the arrangement of `lines`, in
/// counterclockwise order of their direction cones.
pub fn unbounded_cell_signs(lines: &[OrientedLine]) -> Result<Vec<Vec<Orientation>>> {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].is_parallel_to(&lines[j]) {
                return Err(Error::ParallelLines(i, j));
            }
        }
    }
    if lines.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let dirs: Vec<Vector> = lines.iter().map(OrientedLine::direction).collect();
    let mut rays: Vec<Vector> = dirs
        .iter()
        .flat_map(|d| [d.clone(), (-d.0.clone(), -d.1.clone())])
        .collect();
    rays.sort_by(angle_cmp);
    let n = rays.len();
    let cells = (0..n)
        .map(|t| {
            let (r, s) = (&rays[t], &rays[(t + 1) % n]);
            // A direction strictly inside the cone from r to s.
            let inside: Vector = if n == 2 {
                (-r.1.clone(), r.0.clone())
            } else {
                (&r.0 + &s.0, &r.1 + &s.1)
            };
            dirs.iter()
                .map(|d| {
                    let c = cross(d, &inside);
                    if c.is_positive() {
                        Orientation::CounterClockwise
                    } else {
                        Orientation::Clockwise
                    }
                })
                .collect()
        })
        .collect();
    Ok(cells)
}

/// Every one of the `2|L|` unbounded cells of the arrangement contains a
/// point of `set`. A point lies in an unbounded cell exactly when its sign
/// vector equals that cell's, since each sign vector names at most one cell.
pub fn verify_spoke_set(l: &SpokeSet, set: &PointSet) -> Result<bool> {
    let cells = unbounded_cell_signs(&l.lines)?;
    let point_signs: Vec<Vec<Orientation>> = set
        .points()
        .iter()
        .map(|p| l.lines.iter().map(|line| line.side(p)).collect())
        .collect();
    Ok(cells
        .iter()
        .all(|cell| point_signs.iter().any(|s| s == cell)))
}

/// The host points whose sign vector matches each unbounded cell.
pub fn unbounded_cell_occupancy(l: &SpokeSet, set: &PointSet) -> Result<Vec<Vec<PointId>>> {
    let cells = unbounded_cell_signs(&l.lines)?;
    Ok(cells
        .iter()
        .map(|cell| {
            set.ids()
                .into_iter()
                .filter(|&id| {
                    let p = set.get(id);
                    l.lines.iter().zip(cell).all(|(line, &s)| line.side(p) == s)
                })
                .collect()
        })
        .collect())
}

/// Any of the certificate types, tagged by `kind` in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    CrossingFamily(CrossingFamily),
    NoncrossingFamily(NonCrossingFamily),
    ConvexBundle(ConvexBundle),
    SpokeSet(SpokeSet),
}

impl Certificate {
    /// Runs the authoritative verifier for the certificate's type.
    pub fn verify(&self, set: &PointSet) -> Result<bool> {
        Ok(match self {
            Certificate::CrossingFamily(f) => verify_crossing_family(f, set),
            Certificate::NoncrossingFamily(n) => verify_noncrossing_family(n, set),
            Certificate::ConvexBundle(b) => verify_convex_bundle(b, set),
            Certificate::SpokeSet(l) => verify_spoke_set(l, set)?,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::CrossingFamily(_) => "crossing_family",
            Certificate::NoncrossingFamily(_) => "noncrossing_family",
            Certificate::ConvexBundle(_) => "convex_bundle",
            Certificate::SpokeSet(_) => "spoke_set",
        }
    }
}

/// `Ok(true)` iff `pts` is in convex position (errors on collinear input).
pub fn representatives_convex(set: &PointSet, ids: &[PointId]) -> Result<bool> {
    convex_position(&set.gather(ids))
}
