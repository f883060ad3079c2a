use crossfam::geom::{
    convex_hull, in_general_position, in_general_position_brute, orientation, segments_cross_pts, separated,
};
use crossfam::same_type::{verify_same_type, well_separated};
use crossfam::{Point, PointId, PointSet};
use proptest::prelude::*;

fn pt() -> impl Strategy<Value = (i64, i64)> {
    (-1000i64..1000, -1000i64..1000)
}

fn p((x, y): (i64, i64)) -> Point {
    Point::from_ints(x, y)
}

proptest! {
    #[test]
    fn orientation_is_alternating(a in pt(), b in pt(), c in pt()) {
        let (a, b, c) = (p(a), p(b), p(c));
        let o = orientation(&a, &b, &c);
        prop_assert_eq!(orientation(&b, &c, &a), o);
        prop_assert_eq!(orientation(&b, &a, &c), o.reverse());
    }

    #[test]
    fn crossing_is_symmetric(a in pt(), b in pt(), c in pt(), d in pt()) {
        let (a, b, c, d) = (p(a), p(b), p(c), p(d));
        let x = segments_cross_pts(&a, &b, &c, &d);
        prop_assert_eq!(x, segments_cross_pts(&c, &d, &a, &b));
        prop_assert_eq!(x, segments_cross_pts(&b, &a, &d, &c));
    }

    #[test]
    fn general_position_agrees_with_brute_force(pts in prop::collection::vec((-20i64..20, -20i64..20), 3..12)) {
        let pts: Vec<Point> = pts.into_iter().map(p).collect();
        prop_assert_eq!(in_general_position(&pts), in_general_position_brute(&pts));
    }

    #[test]
    fn hull_contains_every_point(pts in prop::collection::vec(pt(), 3..30)) {
        let pts: Vec<Point> = pts.into_iter().map(p).collect();
        let hull = convex_hull(&pts);
        prop_assume!(hull.len() >= 3);
        for q in &pts {
            for i in 0..hull.len() {
                let (a, b) = (&pts[hull[i]], &pts[hull[(i + 1) % hull.len()]]);
                prop_assert!(orientation(a, b, q).as_i8() >= 0);
            }
        }
    }

    #[test]
    fn separating_line_separates(a in prop::collection::vec(pt(), 1..10), b in prop::collection::vec(pt(), 1..10)) {
        let a: Vec<Point> = a.into_iter().map(|(x, y)| p((x - 3000, y))).collect();
        let b: Vec<Point> = b.into_iter().map(|(x, y)| p((x + 3000, y))).collect();
        let line = separated(&a, &b).expect("far apart sets are separated");
        let sa = line.side(&a[0]);
        prop_assert!(!sa.is_collinear());
        prop_assert!(a.iter().all(|q| line.side(q) == sa));
        prop_assert!(b.iter().all(|q| line.side(q) == sa.reverse()));
    }

    #[test]
    fn well_separated_implies_same_type(seed in 0u64..500) {
        let set = crossfam::generate::random_disk(24, seed, 1 << 12).unwrap();
        let ids = set.ids();
        let sets: Vec<Vec<PointId>> = ids.chunks(6).map(<[PointId]>::to_vec).collect();
        if well_separated(&set, &sets) {
            prop_assert!(verify_same_type(&set, &sets).is_some());
        }
    }
}

#[test]
fn square_hull() {
    let set = PointSet::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4), (2, 2)]).unwrap();
    assert_eq!(convex_hull(set.points()).len(), 4);
}
