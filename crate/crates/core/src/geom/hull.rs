use std::borrow::Borrow;

use num_rational::BigRational;
use num_traits::Zero;

use super::point::{OrientedLine, Point};
use super::predicates::{orientation, Orientation};

/// Counterclockwise hull vertices as indices into `points`, starting at the
/// lexicographically smallest point. Collinear boundary points are dropped.
pub fn convex_hull<P: Borrow<Point>>(points: &[P]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].borrow().cmp(points[b].borrow()));
    order.dedup_by(|a, b| points[*a].borrow() == points[*b].borrow());
    if order.len() <= 2 {
        return order;
    }
    let turn = |a: usize, b: usize, c: usize| {
        orientation(points[a].borrow(), points[b].borrow(), points[c].borrow())
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &i in &order {
        while hull.len() >= 2
            && turn(hull[hull.len() - 2], hull[hull.len() - 1], i) != Orientation::CounterClockwise
        {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && turn(hull[hull.len() - 2], hull[hull.len() - 1], i) != Orientation::CounterClockwise
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull
}

/// Whether the line through `p` and `q` meets the closed convex hull whose
/// vertices are `hull`.
pub fn line_meets_hull<P: Borrow<Point>>(p: &Point, q: &Point, hull: &[P]) -> bool {
    let mut left = false;
    let mut right = false;
    for v in hull {
        match orientation(p, q, v.borrow()) {
            Orientation::Collinear => return true,
            Orientation::CounterClockwise => left = true,
            Orientation::Clockwise => right = true,
        }
        if left && right {
            return true;
        }
    }
    false
}

/// A line with `a` strictly on its left and `b` strictly on its right, when
/// the convex hulls of `a` and `b` are disjoint.
///
/// Candidate directions are the hull edges of both sets plus the vector
/// between two representatives; two disjoint convex polygons are always
/// separated along one of those normals.
pub fn separated<P: Borrow<Point>>(a: &[P], b: &[P]) -> Option<OrientedLine> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let ha: Vec<&Point> = convex_hull(a).into_iter().map(|i| a[i].borrow()).collect();
    let hb: Vec<&Point> = convex_hull(b).into_iter().map(|i| b[i].borrow()).collect();

    let mut normals: Vec<(BigRational, BigRational)> = Vec::new();
    for h in [&ha, &hb] {
        for i in 0..h.len() {
            let (u, v) = (h[i], h[(i + 1) % h.len()]);
            if u != v {
                normals.push((-(v.y() - u.y()), v.x() - u.x()));
            }
        }
    }
    normals.push((hb[0].x() - ha[0].x(), hb[0].y() - ha[0].y()));

    for (nx, ny) in normals {
        if nx.is_zero() && ny.is_zero() {
            continue;
        }
        let proj = |p: &Point| &nx * p.x() + &ny * p.y();
        let (amin, amax) = min_max(ha.iter().map(|p| proj(p)));
        let (bmin, bmax) = min_max(hb.iter().map(|p| proj(p)));
        let (lo_is_a, gap_lo, gap_hi) = if amax < bmin {
            (true, amax, bmin)
        } else if bmax < amin {
            (false, bmax, amin)
        } else {
            continue;
        };
        // The line {z : n.z = c} with c strictly inside the gap.
        let c = (gap_lo + gap_hi) / BigRational::from_integer(2.into());
        let norm2 = &nx * &nx + &ny * &ny;
        let base = Point::new(&nx * &c / &norm2, &ny * &c / &norm2);
        let tip = Point::new(base.x() - &ny, base.y() + &nx);
        // Direction (-ny, nx) has the side n.z < c on its left.
        let line = if lo_is_a {
            OrientedLine { p: base, q: tip }
        } else {
            OrientedLine { p: tip, q: base }
        };
        debug_assert!(a
            .iter()
            .all(|p| line.side(p.borrow()) == Orientation::CounterClockwise));
        debug_assert!(b
            .iter()
            .all(|p| line.side(p.borrow()) == Orientation::Clockwise));
        return Some(line);
    }
    None
}

fn min_max(mut it: impl Iterator<Item = BigRational>) -> (BigRational, BigRational) {
    let first = it.next().expect("nonempty hull");
    it.fold((first.clone(), first), |(lo, hi), v| {
        if v < lo {
            (v, hi)
        } else if v > hi {
            (lo, v)
        } else {
            (lo, hi)
        }
    })
}

/// Whether the closed hulls of `a` and `b` share a point: a vertex of one
/// inside the other, or a pair of crossing or touching edges.
pub fn hulls_intersect<P: Borrow<Point>>(a: &[P], b: &[P]) -> bool {
    let ha: Vec<&Point> = convex_hull(a).into_iter().map(|i| a[i].borrow()).collect();
    let hb: Vec<&Point> = convex_hull(b).into_iter().map(|i| b[i].borrow()).collect();
    let inside = |p: &Point, h: &[&Point]| match h.len() {
        0 => false,
        1 => p == h[0],
        2 => on_segment(p, h[0], h[1]),
        _ => (0..h.len())
            .all(|i| orientation(h[i], h[(i + 1) % h.len()], p) != Orientation::Clockwise),
    };
    if ha.iter().any(|p| inside(p, &hb)) || hb.iter().any(|p| inside(p, &ha)) {
        return true;
    }
    let edges = |h: &[&Point]| -> Vec<(Point, Point)> {
        match h.len() {
            0 | 1 => Vec::new(),
            2 => vec![(h[0].clone(), h[1].clone())],
            n => (0..n)
                .map(|i| (h[i].clone(), h[(i + 1) % n].clone()))
                .collect(),
        }
    };
    let ea = edges(&ha);
    let eb = edges(&hb);
    ea.iter()
        .any(|(p, q)| eb.iter().any(|(r, s)| closed_segments_meet(p, q, r, s)))
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orientation(a, b, p).is_collinear()
        && p.x() >= a.x().min(b.x())
        && p.x() <= a.x().max(b.x())
        && p.y() >= a.y().min(b.y())
        && p.y() <= a.y().max(b.y())
}

fn closed_segments_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c).as_i8();
    let o2 = orientation(a, b, d).as_i8();
    let o3 = orientation(c, d, a).as_i8();
    let o4 = orientation(c, d, b).as_i8();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(c: &[(i64, i64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    /// A point is a hull vertex iff some line through it has every other point
    /// strictly on one side; in general position it suffices to test lines
    /// through the point and a second input point, rotated infinitesimally,
    /// which amounts to: not inside any triangle of the others.
    fn brute_hull_vertices(p: &[Point]) -> Vec<usize> {
        (0..p.len())
            .filter(|&i| {
                let others: Vec<usize> = (0..p.len()).filter(|&j| j != i).collect();
                !others.iter().any(|&a| {
                    others.iter().any(|&b| {
                        others.iter().any(|&c| {
                            a < b
                                && b < c
                                && super::super::point_in_triangle(&p[i], &p[a], &p[b], &p[c])
                                    .unwrap_or(false)
                        })
                    })
                })
            })
            .collect()
    }

    #[test]
    fn hull_examples() {
        let p = pts(&[(0, 0), (10, 0), (5, 10), (5, 3)]);
        assert_eq!(convex_hull(&p), vec![0, 1, 2]);
        assert_eq!(convex_hull(&pts(&[(3, 3)])), vec![0]);
        assert_eq!(convex_hull(&pts(&[(0, 0), (1, 1), (2, 2)])), vec![0, 2]);
    }

    #[test]
    fn separated_examples() {
        let a = pts(&[(0, 0), (1, 1)]);
        let b = pts(&[(10, 0), (11, 1)]);
        let line = separated(&a, &b).unwrap();
        assert!(a
            .iter()
            .all(|p| line.side(p) == Orientation::CounterClockwise));
        assert!(b.iter().all(|p| line.side(p) == Orientation::Clockwise));
        let a = pts(&[(0, 0), (10, 10)]);
        let b = pts(&[(0, 10), (10, 0)]);
        assert!(separated(&a, &b).is_none());
        let outer = pts(&[(0, 0), (100, 0), (50, 100)]);
        let inner = pts(&[(50, 20), (45, 30), (55, 31)]);
        assert!(separated(&outer, &inner).is_none());
        assert!(hulls_intersect(&outer, &inner));
    }

    proptest! {
        #[test]
        fn hull_matches_extreme_point_oracle(c in proptest::collection::btree_set((-30i64..30, -30i64..30), 6)) {
            let c: Vec<(i64, i64)> = c.into_iter().collect();
            let p = pts(&c);
            prop_assume!(super::super::in_general_position(&p));
            let mut h = convex_hull(&p);
            h.sort();
            prop_assert_eq!(h, brute_hull_vertices(&p));
        }

        #[test]
        fn separation_iff_disjoint_hulls(
            a in proptest::collection::btree_set((-20i64..20, -20i64..20), 1..5),
            b in proptest::collection::btree_set((-20i64..20, -20i64..20), 1..5),
        ) {
            let a: Vec<(i64, i64)> = a.into_iter().collect();
            let b: Vec<(i64, i64)> = b.into_iter().filter(|q| !a.contains(q)).collect();
            prop_assume!(!b.is_empty());
            let (pa, pb) = (pts(&a), pts(&b));
            match separated(&pa, &pb) {
                Some(line) => {
                    prop_assert!(pa.iter().all(|p| line.side(p) == Orientation::CounterClockwise));
                    prop_assert!(pb.iter().all(|p| line.side(p) == Orientation::Clockwise));
                    prop_assert!(!hulls_intersect(&pa, &pb));
                }
                None => prop_assert!(hulls_intersect(&pa, &pb)),
            }
        }
    }
}
