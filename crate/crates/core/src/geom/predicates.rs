use std::borrow::Borrow;
use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hull::convex_hull;
use super::point::{Point, Segment};
use crate::{Error, Result};

/// Sign of the orientation determinant. `+1` is counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn as_i8(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    pub fn reverse(self) -> Orientation {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }

    pub fn is_collinear(self) -> bool {
        self == Orientation::Collinear
    }

    fn from_ordering(o: Ordering) -> Orientation {
        match o {
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
            Ordering::Greater => Orientation::CounterClockwise,
        }
    }
}

impl From<Orientation> for i8 {
    fn from(o: Orientation) -> i8 {
        o.as_i8()
    }
}

impl TryFrom<i8> for Orientation {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(Orientation::Clockwise),
            0 => Ok(Orientation::Collinear),
            1 => Ok(Orientation::CounterClockwise),
            _ => Err(format!("orientation sign out of range: {v}")),
        }
    }
}

/// Sign of
/// ```text
/// | 1   1   1  |
/// | px  qx  rx |
/// | py  qy  ry |
/// ```
/// evaluated exactly.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    if let (Some(a), Some(b), Some(c)) = (p.small(), q.small(), r.small()) {
        let (ux, uy) = ((b.0 - a.0) as i128, (b.1 - a.1) as i128);
        let (vx, vy) = ((c.0 - a.0) as i128, (c.1 - a.1) as i128);
        return Orientation::from_ordering((ux * vy).cmp(&(uy * vx)));
    }
    let det: BigRational = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    if det.is_zero() {
        Orientation::Collinear
    } else if det.is_positive() {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    }
}

/// Whether no line contains three of the points.
///
/// Sorts directions around every point, so the cost is `O(n^2 log n)`.
pub fn in_general_position<P: Borrow<Point> + Sync>(points: &[P]) -> bool {
    let n = points.len();
    if n < 3 {
        return true;
    }
    crate::par::all(n, |i| {
        let center = points[i].borrow();
        // Directions taken modulo pi: `flip` marks vectors in the lower half.
        let mut others: Vec<(bool, &Point)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| {
                let q = points[j].borrow();
                let lower = q.y() < center.y() || (q.y() == center.y() && q.x() < center.x());
                (lower, q)
            })
            .collect();
        let cmp = |a: &(bool, &Point), b: &(bool, &Point)| {
            let mut o = orientation(center, a.1, b.1);
            if a.0 != b.0 {
                o = o.reverse();
            }
            match o {
                Orientation::CounterClockwise => Ordering::Less,
                Orientation::Collinear => Ordering::Equal,
                Orientation::Clockwise => Ordering::Greater,
            }
        };
        others.sort_by(cmp);
        others
            .windows(2)
            .all(|w| cmp(&w[0], &w[1]) != Ordering::Equal)
    })
}

/// Cubic brute force; the reference for [`in_general_position`].
pub fn in_general_position_brute<P: Borrow<Point>>(points: &[P]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orientation(points[i].borrow(), points[j].borrow(), points[k].borrow())
                    .is_collinear()
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Proper crossing of the open segments `ab` and `cd`. Shared endpoints and
/// collinear touching never count.
pub fn segments_cross_pts(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c).as_i8();
    let o2 = orientation(a, b, d).as_i8();
    if o1 * o2 >= 0 {
        return false;
    }
    let o3 = orientation(c, d, a).as_i8();
    let o4 = orientation(c, d, b).as_i8();
    o3 * o4 < 0
}

pub fn segments_cross(s: &Segment, t: &Segment) -> bool {
    segments_cross_pts(&s.a, &s.b, &t.a, &t.b)
}

/// Strict interior test; points on the boundary are outside.
pub fn point_in_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> Result<bool> {
    let o = orientation(a, b, c);
    if o.is_collinear() {
        return Err(Error::Degenerate("triangle has collinear corners".into()));
    }
    Ok(orientation(a, b, p) == o && orientation(b, c, p) == o && orientation(c, a, p) == o)
}

/// Whether every point is a vertex of the convex hull.
pub fn convex_position<P: Borrow<Point> + Sync>(points: &[P]) -> Result<bool> {
    if !in_general_position(points) {
        return Err(Error::Degenerate("collinear triple".into()));
    }
    Ok(convex_hull(points).len() == points.len())
}

fn chain_orientation<P: Borrow<Point>>(points: &[P], want: Orientation) -> Result<bool> {
    for w in points.windows(2) {
        match w[0].borrow().x().cmp(w[1].borrow().x()) {
            Ordering::Less => {}
            Ordering::Equal => {
                return Err(Error::DuplicateX(format!("{:?}", w[1].borrow())));
            }
            Ordering::Greater => {
                return Err(Error::InvalidInput("points not sorted by x".into()));
            }
        }
    }
    Ok(points
        .windows(3)
        .all(|w| orientation(w[0].borrow(), w[1].borrow(), w[2].borrow()) == want))
}

/// Points sorted by strictly increasing x lie on a concave graph: every
/// consecutive triple turns clockwise.
pub fn is_cap<P: Borrow<Point>>(points: &[P]) -> Result<bool> {
    chain_orientation(points, Orientation::Clockwise)
}

/// Points sorted by strictly increasing x lie on a convex graph: every
/// consecutive triple turns counterclockwise.
pub fn is_cup<P: Borrow<Point>>(points: &[P]) -> Result<bool> {
    chain_orientation(points, Orientation::CounterClockwise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(
            orientation(&p(0, 0), &p(1, 0), &p(0, 1)),
            Orientation::CounterClockwise
        );
        assert_eq!(
            orientation(&p(0, 0), &p(1, 1), &p(2, 2)),
            Orientation::Collinear
        );
        // det [[1,1,1],[0,1,1],[0,0,1]] = 1
        assert_eq!(
            orientation(&p(0, 0), &p(1, 0), &p(1, 1)),
            Orientation::CounterClockwise
        );
    }

    #[test]
    fn big_coordinates_use_exact_path() {
        let big = 1i64 << 62;
        let a = p(-big + 1, 0);
        let b = Point::from_ratios(i64::MAX, 1, 1, 1).unwrap();
        let c = Point::from_ratios(i64::MAX, 1, 2, 1).unwrap();
        assert!(a.small().is_some() && b.small().is_none());
        assert_eq!(orientation(&a, &b, &c), Orientation::CounterClockwise);
        let half = Point::from_ratios(1, 2, 1, 2).unwrap();
        assert_eq!(
            orientation(&p(0, 0), &half, &p(1, 1)),
            Orientation::Collinear
        );
    }

    #[test]
    fn general_position_examples() {
        assert!(in_general_position(&[p(0, 0), p(1, 0), p(0, 1)]));
        assert!(!in_general_position(&[p(0, 0), p(1, 1), p(2, 2)]));
        let four = [p(0, 0), p(3, 1), p(1, 4), p(4, 5)];
        assert!(in_general_position_brute(&four));
        assert!(in_general_position(&four));
    }

    #[test]
    fn general_position_collinear_through_center() {
        // collinear triple with the middle point as the sweep center
        let pts = [p(-1, -1), p(5, 2), p(1, 1), p(0, 0), p(3, -7)];
        assert!(!in_general_position(&pts));
    }

    #[test]
    fn crossing_examples() {
        assert!(segments_cross_pts(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
        assert!(!segments_cross_pts(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)));
        assert!(!segments_cross_pts(&p(0, 0), &p(4, 4), &p(0, 4), &p(1, 3)));
        // shared endpoint
        assert!(!segments_cross_pts(&p(0, 0), &p(4, 4), &p(0, 0), &p(4, 0)));
        let s = Segment::new(p(0, 0), p(2, 2)).unwrap();
        let t = Segment::new(p(0, 2), p(2, 0)).unwrap();
        assert!(segments_cross(&s, &t));
    }

    #[test]
    fn triangle_examples() {
        let (a, b, c) = (p(0, 0), p(10, 0), p(5, 10));
        assert!(point_in_triangle(&p(5, 3), &a, &b, &c).unwrap());
        assert!(!point_in_triangle(&p(0, 0), &a, &b, &c).unwrap());
        assert!(!point_in_triangle(&p(5, 0), &a, &b, &c).unwrap());
        assert!(point_in_triangle(&p(1, 1), &a, &p(5, 0), &b).is_err());
    }

    #[test]
    fn convex_position_examples() {
        assert!(convex_position(&[p(0, 0), p(10, 0), p(10, 10), p(0, 10)]).unwrap());
        assert!(!convex_position(&[p(0, 0), p(10, 0), p(5, 10), p(5, 3)]).unwrap());
        // 7 points on a circle of radius 1000, snapped to integers
        let circle: Vec<Point> = (0..7)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 7.0;
                p(
                    (1000.0 * t.cos()).round() as i64,
                    (1000.0 * t.sin()).round() as i64,
                )
            })
            .collect();
        assert!(convex_position(&circle).unwrap());
        assert!(convex_position(&[p(0, 0), p(1, 1), p(2, 2)]).is_err());
    }

    #[test]
    fn cap_cup_examples() {
        let cap = [
            p(0, 0),
            p(1, 2),
            p(2, 3),
            Point::from_ratios(3, 1, 7, 2).unwrap(),
        ];
        assert!(is_cap(&cap).unwrap());
        assert!(!is_cup(&cap).unwrap());
        assert!(is_cup(&[p(0, 0), p(1, 1), p(2, 4)]).unwrap());
        let zigzag = [p(0, 0), p(1, 2), p(2, 1), p(3, 3)];
        assert!(!is_cap(&zigzag).unwrap());
        assert!(!is_cup(&zigzag).unwrap());
        assert!(matches!(
            is_cap(&[p(0, 0), p(0, 1)]),
            Err(Error::DuplicateX(_))
        ));
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (-50i64..50, -50i64..50).prop_map(|(x, y)| p(x, y))
    }

    proptest! {
        #[test]
        fn orientation_antisymmetric_and_cyclic(a in arb_point(), b in arb_point(), c in arb_point()) {
            let o = orientation(&a, &b, &c);
            prop_assert_eq!(o, orientation(&b, &a, &c).reverse());
            prop_assert_eq!(o, orientation(&b, &c, &a));
        }

        #[test]
        fn crossing_symmetric(a in arb_point(), b in arb_point(), c in arb_point(), d in arb_point()) {
            let x = segments_cross_pts(&a, &b, &c, &d);
            prop_assert_eq!(x, segments_cross_pts(&c, &d, &a, &b));
            prop_assert_eq!(x, segments_cross_pts(&b, &a, &c, &d));
            prop_assert_eq!(x, segments_cross_pts(&a, &b, &d, &c));
        }

        #[test]
        fn general_position_matches_brute(pts in proptest::collection::vec(arb_point(), 0..12)) {
            let mut pts = pts;
            pts.sort();
            pts.dedup();
            prop_assert_eq!(in_general_position(&pts), in_general_position_brute(&pts));
        }

        #[test]
        fn cap_closed_under_subsequence(xs in proptest::collection::btree_set(-40i64..40, 3..9), mask in any::<u16>()) {
            // y = -x^2 is concave
            let cap: Vec<Point> = xs.iter().map(|&x| p(x, -x * x)).collect();
            prop_assert!(is_cap(&cap).unwrap());
            let sub: Vec<&Point> = cap.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, q)| q).collect();
            prop_assert!(is_cap(&sub).unwrap());
            let cup: Vec<Point> = cap.iter().map(Point::reflect_y).collect();
            prop_assert!(is_cup(&cup).unwrap());
        }
    }
}
