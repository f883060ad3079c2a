use super::point::{OrientedLine, PointId, PointSet};
use super::predicates::Orientation;
use crate::{Error, Result};

/// A line through one point of each of two sets that halves both.
///
/// The two points on the line are assigned to a side by a symbolic
/// perturbation: each goes to whichever side of its own set is smaller,
/// the left one on ties.
#[derive(Clone, Debug)]
pub struct HalvingCut {
    pub line: OrientedLine,
    pub through_a: PointId,
    pub through_b: PointId,
    a_goes_left: bool,
    b_goes_left: bool,
}

impl HalvingCut {
    /// `(left, right)` parts of `ids`, with the perturbed on-line points
    /// placed on their assigned sides.
    pub fn split(&self, set: &PointSet, ids: &[PointId]) -> (Vec<PointId>, Vec<PointId>) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &id in ids {
            let goes_left = if id == self.through_a {
                self.a_goes_left
            } else if id == self.through_b {
                self.b_goes_left
            } else {
                self.line.side(set.get(id)) == Orientation::CounterClockwise
            };
            if goes_left {
                left.push(id);
            } else {
                right.push(id);
            }
        }
        (left, right)
    }
}

/// Ham-sandwich cut of `a` and `b` by brute force over all lines through a
/// point of `a` and a point of `b`, in `O(|a| |b| (|a| + |b|))`.
pub fn ham_sandwich(set: &PointSet, a: &[PointId], b: &[PointId]) -> Result<HalvingCut> {
    ham_sandwich_from(set, a, b, (0, 0))
}

/// Like [`ham_sandwich`], with the candidate scan starting at
/// `(a[start.0], b[start.1])` and wrapping around. Different starts can return
/// different valid cuts.
pub fn ham_sandwich_from(
    set: &PointSet,
    a: &[PointId],
    b: &[PointId],
    start: (usize, usize),
) -> Result<HalvingCut> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("ham sandwich of an empty set".into()));
    }
    // Strict side counts of `ids` other than the two points on the line.
    let counts = |line: &OrientedLine, ids: &[PointId], skip: PointId| {
        let mut l = 0usize;
        let mut r = 0usize;
        for &id in ids {
            if id == skip {
                continue;
            }
            match line.side(set.get(id)) {
                Orientation::CounterClockwise => l += 1,
                Orientation::Clockwise => r += 1,
                Orientation::Collinear => {}
            }
        }
        (l, r)
    };
    for di in 0..a.len() {
        let pa = a[(start.0 + di) % a.len()];
        for dj in 0..b.len() {
            let pb = b[(start.1 + dj) % b.len()];
            let line = OrientedLine {
                p: set.get(pa).clone(),
                q: set.get(pb).clone(),
            };
            let (la, ra) = counts(&line, a, pa);
            if la + ra + 1 != a.len() || la.abs_diff(ra) > 1 {
                continue;
            }
            let (lb, rb) = counts(&line, b, pb);
            if lb + rb + 1 != b.len() || lb.abs_diff(rb) > 1 {
                continue;
            }
            return Ok(HalvingCut {
                line,
                through_a: pa,
                through_b: pb,
                a_goes_left: la <= ra,
                b_goes_left: lb <= rb,
            });
        }
    }
    // A balanced cut through one point of each set always exists when the
    // union is in general position.
    Err(Error::Degenerate(
        "no halving line through a pair of points; input not in general position".into(),
    ))
}
