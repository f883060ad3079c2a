use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use super::predicates::{in_general_position, orientation, Orientation};
use crate::{Error, Result};

/// Integer coordinates below this bound take the `i128` fast path in
/// [`orientation`].
pub(crate) const SMALL_LIMIT: i64 = 1 << 62;

/// Stable identifier of a point inside its host [`PointSet`]: the index in
/// file order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub usize);

impl PointId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A planar point with exact rational coordinates.
#[derive(Clone)]
pub struct Point {
    x: BigRational,
    y: BigRational,
    small: Option<(i64, i64)>,
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        let small = small_int(&x).zip(small_int(&y));
        Point { x, y, small }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(
            BigRational::from_integer(BigInt::from(x)),
            BigRational::from_integer(BigInt::from(y)),
        )
    }

    /// `x = nx/dx`, `y = ny/dy`.
    pub fn from_ratios(nx: i64, dx: i64, ny: i64, dy: i64) -> Result<Self> {
        if dx == 0 || dy == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Point::new(
            BigRational::new(nx.into(), dx.into()),
            BigRational::new(ny.into(), dy.into()),
        ))
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub(crate) fn small(&self) -> Option<(i64, i64)> {
        self.small
    }

    /// Mirror image in the x-axis.
    pub fn reflect_y(&self) -> Point {
        Point::new(self.x.clone(), -self.y.clone())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.x.to_f64().unwrap_or(f64::NAN),
            self.y.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `[num_x, den_x, num_y, den_y]`, if every part fits in an `i64`.
    pub fn to_ratio_parts(&self) -> Option<[i64; 4]> {
        Some([
            self.x.numer().to_i64()?,
            self.x.denom().to_i64()?,
            self.y.numer().to_i64()?,
            self.y.denom().to_i64()?,
        ])
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
}

fn small_int(v: &BigRational) -> Option<i64> {
    if !v.denom().is_one() {
        return None;
    }
    let n = v.numer().to_i64()?;
    (n.abs() < SMALL_LIMIT).then_some(n)
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl std::hash::Hash for Point {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

/// Lexicographic `(x, y)` order. This is the order of an infinitesimally
/// sheared copy of the plane, so it never has ties between distinct points.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.small, other.small) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y)),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let parts = self
            .to_ratio_parts()
            .ok_or_else(|| serde::ser::Error::custom("coordinate does not fit in i64"))?;
        let mut t = serializer.serialize_tuple(4)?;
        for p in parts {
            t.serialize_element(&p)?;
        }
        t.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = Point;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("[x, y] or [num_x, den_x, num_y, den_y]")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Point, A::Error> {
                let mut v = Vec::with_capacity(4);
                while let Some(n) = seq.next_element::<i64>()? {
                    v.push(n);
                }
                match v.as_slice() {
                    [x, y] => Ok(Point::from_ints(*x, *y)),
                    [nx, dx, ny, dy] => {
                        Point::from_ratios(*nx, *dx, *ny, *dy).map_err(de::Error::custom)
                    }
                    _ => Err(de::Error::invalid_length(v.len(), &self)),
                }
            }
        }

        deserializer.deserialize_seq(PointVisitor)
    }
}

/// A segment between two points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidInput("degenerate segment".into()));
        }
        Ok(Segment { a, b })
    }
}

/// The line through `p` and `q`, directed from `p` towards `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub p: Point,
    pub q: Point,
}

impl OrientedLine {
    pub fn new(p: Point, q: Point) -> Result<Self> {
        if p == q {
            return Err(Error::InvalidInput("line through a single point".into()));
        }
        Ok(OrientedLine { p, q })
    }

    /// `CounterClockwise` for points strictly left of the line.
    pub fn side(&self, r: &Point) -> Orientation {
        orientation(&self.p, &self.q, r)
    }

    /// `(dx, dy)` of the direction `q - p`.
    pub fn direction(&self) -> (BigRational, BigRational) {
        (self.q.x() - self.p.x(), self.q.y() - self.p.y())
    }

    pub fn reversed(&self) -> OrientedLine {
        OrientedLine {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    pub fn is_parallel_to(&self, other: &OrientedLine) -> bool {
        let (ax, ay) = self.direction();
        let (bx, by) = other.direction();
        (ax * by - ay * bx).is_zero()
    }
}

/// The host point set. Point ids are positions in `points`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    general_position: bool,
}

impl PointSet {
    /// Fails on repeated points.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut sorted: Vec<&Point> = points.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("repeated point {:?}", w[0])));
        }
        Ok(PointSet {
            points,
            general_position: false,
        })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        PointSet::new(
            coords
                .iter()
                .map(|&(x, y)| Point::from_ints(x, y))
                .collect(),
        )
    }

    /// Runs the general-position check and sets the flag on success.
    pub fn certified(mut self) -> Result<Self> {
        if !in_general_position(&self.points) {
            return Err(Error::Degenerate("three collinear points".into()));
        }
        self.general_position = true;
        Ok(self)
    }

    pub fn is_certified(&self) -> bool {
        self.general_position
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ids(&self) -> Vec<PointId> {
        (0..self.points.len()).map(PointId).collect()
    }

    pub fn contains(&self, id: PointId) -> bool {
        id.0 < self.points.len()
    }

    pub fn get(&self, id: PointId) -> &Point {
        &self.points[id.0]
    }

    pub fn gather(&self, ids: &[PointId]) -> Vec<&Point> {
        ids.iter().map(|&i| self.get(i)).collect()
    }

    /// Mirror image in the x-axis; ids are preserved.
    pub fn reflected(&self) -> PointSet {
        PointSet {
            points: self.points.iter().map(Point::reflect_y).collect(),
            general_position: self.general_position,
        }
    }

    /// Sorts `ids` by the lexicographic point order.
    pub fn sort_lex(&self, ids: &mut [PointId]) {
        ids.sort_by(|&a, &b| self.get(a).cmp(self.get(b)));
    }

    pub fn orientation(&self, a: PointId, b: PointId, c: PointId) -> Orientation {
        orientation(self.get(a), self.get(b), self.get(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_accepts_both_forms() {
        let p: Point = serde_json::from_str("[3, 4]").unwrap();
        assert_eq!(p, Point::from_ints(3, 4));
        let q: Point = serde_json::from_str("[1, 2, -3, 6]").unwrap();
        assert_eq!(q, Point::from_ratios(1, 2, -1, 2).unwrap());
        assert_eq!(serde_json::to_string(&q).unwrap(), "[1,2,-1,2]");
        assert!(serde_json::from_str::<Point>("[1, 2, 3]").is_err());
        assert!(serde_json::from_str::<Point>("[1, 0, 3, 1]").is_err());
    }

    #[test]
    fn lex_order_mixes_fast_and_slow_paths() {
        let a = Point::from_ints(1, 5);
        let b = Point::from_ratios(3, 2, 0, 1).unwrap();
        let c = Point::from_ints(1, 6);
        assert!(a < c && c < b);
    }

    #[test]
    fn repeated_points_rejected() {
        assert!(PointSet::from_ints(&[(0, 0), (1, 1), (0, 0)]).is_err());
    }

    #[test]
    fn certification_rejects_collinear() {
        let s = PointSet::from_ints(&[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert!(matches!(s.certified(), Err(Error::Degenerate(_))));
    }
}
