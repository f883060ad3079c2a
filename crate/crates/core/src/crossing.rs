//! Crossing family or non-crossing family.
//!
//! [`find_crossing_or_noncrossing`] asks for a convex bundle of size `2k`,
//! pairs each part with the opposite one, and finds a bipartite crossing
//! family inside every pair. Segments from different pairs cross because the
//! parts are in convex position. This module also holds the partial order
//! `<_B`, epsilon-avoiding pairs and the cluster decomposition used to find
//! them.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use serde::Serialize;

use crate::bundle::{find_bundle_or_noncrossing, BundleRunConfig, DichotomyResult, TraceEvent};
use crate::families::{verify_crossing_family, Certificate, CrossingFamily};
use crate::geom::{hull_ids, line_meets_hull, separated, Orientation, OrientedLine, Point, PointId, PointSet};
use crate::oracles::{bipartite_segments, max_clique, Graph, OracleBudget};
use crate::{par, Error, Result};

/// Whether every point of `b` lies strictly left of the line from `x` to `y`.
pub fn before(set: &PointSet, x: PointId, y: PointId, b: &[PointId]) -> bool {
    b.iter()
        .all(|&z| set.orientation(x, y, z) == Orientation::CounterClockwise)
}

/// The relation `<_B` on `A` and its number of incomparable pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialOrderReport {
    pub a: Vec<PointId>,
    pub b: Vec<PointId>,
    /// Every `(x, y)` with `x <_B y`.
    pub relation: Vec<(PointId, PointId)>,
    pub incomparable: usize,
}

fn check_separated(set: &PointSet, a: &[PointId], b: &[PointId]) -> Result<()> {
    if a.is_empty() || b.is_empty() || separated(&set.gather(a), &set.gather(b)).is_none() {
        return Err(Error::NotSeparated);
    }
    Ok(())
}

/// Computes `<_B` on `a`. Each pair is also tested against the hull of `b`:
/// a pair is incomparable exactly when its line meets the hull, and a
/// disagreement is reported as [`Error::Invariant`].
pub fn incomparable_count(set: &PointSet, a: &[PointId], b: &[PointId]) -> Result<PartialOrderReport> {
    check_separated(set, a, b)?;
    let hull: Vec<&Point> = hull_ids(set, b).into_iter().map(|id| set.get(id)).collect();
    let mut relation = Vec::new();
    let mut incomparable = 0;
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i + 1..] {
            let xy = before(set, x, y, b);
            let yx = before(set, y, x, b);
            if xy {
                relation.push((x, y));
            }
            if yx {
                relation.push((y, x));
            }
            let stabs = line_meets_hull(set.get(x), set.get(y), &hull);
            if stabs != !(xy || yx) {
                return Err(Error::Invariant(format!(
                    "pair ({x}, {y}): comparability disagrees with the hull test"
                )));
            }
            if stabs {
                incomparable += 1;
            }
        }
    }
    Ok(PartialOrderReport {
        a: a.to_vec(),
        b: b.to_vec(),
        relation,
        incomparable,
    })
}

/// Outcome of the epsilon-avoiding test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvoidingPairReport {
    pub a: Vec<PointId>,
    pub b: Vec<PointId>,
    pub iota_ab: usize,
    pub iota_ba: usize,
    pub epsilon: Ratio<u64>,
    pub avoiding: bool,
}

/// Whether `iota(A, <_B) + iota(B, <_A) <= epsilon m^2`, exactly.
pub fn epsilon_avoiding(
    set: &PointSet,
    a: &[PointId],
    b: &[PointId],
    epsilon: Ratio<u64>,
) -> Result<AvoidingPairReport> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(format!("|A| = {}, |B| = {}", a.len(), b.len())));
    }
    let iota_ab = incomparable_count(set, a, b)?.incomparable;
    let iota_ba = incomparable_count(set, b, a)?.incomparable;
    Ok(AvoidingPairReport {
        a: a.to_vec(),
        b: b.to_vec(),
        iota_ab,
        iota_ba,
        epsilon,
        avoiding: avoiding_inequality(iota_ab + iota_ba, a.len(), epsilon),
    })
}

fn avoiding_inequality(iota: usize, m: usize, epsilon: Ratio<u64>) -> bool {
    iota as u128 * *epsilon.denom() as u128 <= *epsilon.numer() as u128 * (m * m) as u128
}

/// A group of points inside one cell of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    /// Index into [`ClusterDecomposition::cells`].
    pub cell: usize,
    pub points: Vec<PointId>,
}

/// Points grouped by the cells of a line arrangement, each cell cut by
/// vertical lines into clusters of exactly `m` points and at most one
/// smaller exceptional part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterDecomposition {
    pub lines: Vec<OrientedLine>,
    /// Sign vector of each nonempty cell.
    pub cells: Vec<Vec<Orientation>>,
    pub clusters: Vec<Cluster>,
    pub exceptional: Vec<Cluster>,
}

/// Lines in two slope classes, each placed in a gap between consecutive
/// projections of the points so that no line passes through a point.
fn quantile_lines(set: &PointSet, ids: &[PointId], budget: usize) -> Vec<OrientedLine> {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    // Normals of the two classes: nearly vertical and nearly horizontal lines.
    let normals = [(r(1, 1), r(1, 7)), (r(-1, 5), r(1, 1))];
    let mut lines = Vec::new();
    for (class, (nx, ny)) in normals.iter().enumerate() {
        let count = budget / 2 + usize::from(class == 0 && budget % 2 == 1);
        let mut proj: Vec<BigRational> = ids
            .iter()
            .map(|&id| nx * set.get(id).x() + ny * set.get(id).y())
            .collect();
        proj.sort();
        proj.dedup();
        for j in 1..=count {
            let q = j * proj.len() / (count + 1);
            if q == 0 || q >= proj.len() {
                continue;
            }
            let c = (&proj[q - 1] + &proj[q]) / r(2, 1);
            // The line {z : n.z = c}, directed along (-ny, nx).
            let norm2 = nx * nx + ny * ny;
            let base = Point::new(nx * &c / &norm2, ny * &c / &norm2);
            let tip = Point::new(base.x() - ny, base.y() + nx);
            lines.push(OrientedLine { p: base, q: tip });
        }
    }
    lines
}

/// Decomposes `ids` with up to `budget` lines into clusters of `m` points.
pub fn cluster_decompose(set: &PointSet, ids: &[PointId], m: usize, budget: usize) -> Result<ClusterDecomposition> {
    if m == 0 {
        return Err(Error::InvalidInput("cluster size must be positive".into()));
    }
    let lines = quantile_lines(set, ids, budget);
    let mut by_cell: BTreeMap<Vec<Orientation>, Vec<PointId>> = BTreeMap::new();
    for &id in ids {
        let signs: Vec<Orientation> = lines.iter().map(|l| l.side(set.get(id))).collect();
        by_cell.entry(signs).or_default().push(id);
    }
    let mut cells = Vec::new();
    let mut clusters = Vec::new();
    let mut exceptional = Vec::new();
    for (cell, (signs, mut pts)) in by_cell.into_iter().enumerate() {
        cells.push(signs);
        set.sort_lex(&mut pts);
        let mut chunks = pts.chunks_exact(m);
        clusters.extend(chunks.by_ref().map(|c| Cluster { cell, points: c.to_vec() }));
        if !chunks.remainder().is_empty() {
            exceptional.push(Cluster {
                cell,
                points: chunks.remainder().to_vec(),
            });
        }
    }
    Ok(ClusterDecomposition {
        lines,
        cells,
        clusters,
        exceptional,
    })
}

/// Line budget used when none is given: `2 ceil(1/epsilon)`.
pub fn default_line_budget(epsilon: Ratio<u64>) -> usize {
    2 * epsilon.recip().ceil().to_integer() as usize
}

/// First pair of clusters, one inside `p1` and one inside `p2`, that forms an
/// epsilon-avoiding pair. Pairs are tried in cluster order.
pub fn find_avoiding_pair(
    set: &PointSet,
    p1: &[PointId],
    p2: &[PointId],
    m: usize,
    epsilon: Ratio<u64>,
    budget: usize,
) -> Result<Option<AvoidingPairReport>> {
    check_separated(set, p1, p2)?;
    if p1.len().abs_diff(p2.len()) > 1 {
        return Err(Error::SizeMismatch(format!("|P1| = {}, |P2| = {}", p1.len(), p2.len())));
    }
    let union: Vec<PointId> = p1.iter().chain(p2).copied().collect();
    let dec = cluster_decompose(set, &union, m, budget)?;
    let first: std::collections::HashSet<PointId> = p1.iter().copied().collect();
    let (mut c1, mut c2) = (Vec::new(), Vec::new());
    for c in &dec.clusters {
        if c.points.iter().all(|id| first.contains(id)) {
            c1.push(&c.points);
        } else if c.points.iter().all(|id| !first.contains(id)) {
            c2.push(&c.points);
        }
    }
    for a in &c1 {
        for b in &c2 {
            let report = epsilon_avoiding(set, a, b, epsilon)?;
            if report.avoiding {
                return Ok(Some(report));
            }
        }
    }
    Ok(None)
}

/// How [`bipartite_crossing_family`] searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BipartiteMode {
    /// Maximum family by branch and bound.
    Exact,
    /// Maximal family grown in order of crossing degree.
    Greedy,
    /// Exact when `|A| |B|` is at most the cutoff, greedy otherwise.
    Auto { cutoff: usize },
}

/// Default exact-search cutoff on `|A| |B|`.
pub const EXACT_CUTOFF: usize = 400;

/// A side-labelled family and whether it is known to be maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteFamily {
    pub family: CrossingFamily,
    pub exact: bool,
}

/// Pairwise crossing segments from `a` to `b`.
pub fn bipartite_crossing_family(
    set: &PointSet,
    a: &[PointId],
    b: &[PointId],
    mode: BipartiteMode,
) -> Result<BipartiteFamily> {
    check_separated(set, a, b)?;
    let segs = bipartite_segments(a, b);
    let g = Graph::new(segs.len(), |i, j| {
        let ((p, q), (r, s)) = (segs[i], segs[j]);
        crate::geom::segments_cross_pts(set.get(p), set.get(q), set.get(r), set.get(s))
    });
    let exact = match mode {
        BipartiteMode::Exact => true,
        BipartiteMode::Greedy => false,
        BipartiteMode::Auto { cutoff } => segs.len() <= cutoff,
    };
    let (clique, exact) = if exact {
        let out = max_clique(&g, &OracleBudget::default());
        (out.clique, out.complete)
    } else {
        let mut c = g.greedy_clique();
        c.sort_unstable();
        (c, false)
    };
    let family = CrossingFamily {
        segments: clique.into_iter().map(|i| segs[i]).collect(),
        sides: Some([a.to_vec(), b.to_vec()]),
    };
    if !verify_crossing_family(&family, set) {
        return Err(Error::Invariant("bipartite family fails verification".into()));
    }
    Ok(BipartiteFamily { family, exact })
}

/// The quantities `s`, `K = 8^C(s,2)`, `M = 9^s K` and
/// `epsilon = 2^(-3s-11)` of the bipartite crossing-family recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrtParameters {
    pub s: u32,
    pub k: BigUint,
    pub m: BigUint,
    pub epsilon: BigRational,
}

impl PrtParameters {
    pub fn new(s: u32) -> Self {
        let k = BigUint::from(8u32).pow(s * s.saturating_sub(1) / 2);
        let m = BigUint::from(9u32).pow(s) * &k;
        let epsilon = BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(3 * s + 11));
        PrtParameters { s, k, m, epsilon }
    }

    /// Smallest `s >= 1` with `K > size`: no family of size `K` was found.
    pub fn for_family_size(size: usize) -> Self {
        let mut s = 1;
        while PrtParameters::new(s).k <= BigUint::from(size) {
            s += 1;
        }
        PrtParameters::new(s)
    }
}

/// A crossing family, or a non-crossing family of size `m`.
///
/// Uses `k = floor(n / (2 C m))` pairs with `C = cfg.c_effective`; `cfg.k`
/// is ignored. Opposite parts of a bundle of size `2k` are trimmed to equal
/// size and searched independently, exactly when `|A_i| |B_i| <= cutoff`.
pub fn find_crossing_or_noncrossing(
    set: &PointSet,
    m: usize,
    cfg: &BundleRunConfig,
    cutoff: usize,
) -> Result<DichotomyResult> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let n = set.len();
    let c = cfg.c_effective;
    if *c.numer() == 0 {
        return Err(Error::InvalidInput("C-effective must be positive".into()));
    }
    let k = (n as u128 * *c.denom() as u128 / (2 * *c.numer() as u128 * m as u128)) as usize;
    if k == 0 {
        let needed = (2 * *c.numer() as u128 * m as u128).div_ceil(*c.denom() as u128) as usize;
        return Err(Error::InsufficientPoints { stage: "pairing".into(), needed, have: n });
    }
    let bundle_cfg = BundleRunConfig {
        k: 2 * k,
        m,
        ..cfg.clone()
    };
    let DichotomyResult { certificate, mut trace } = find_bundle_or_noncrossing(set, &bundle_cfg)?;
    trace.insert(0, TraceEvent::PairCount { n, k });
    let bundle = match certificate {
        Certificate::ConvexBundle(b) => b,
        other => return Ok(DichotomyResult { certificate: other, trace }),
    };

    let pairs: Vec<(Vec<PointId>, Vec<PointId>)> = (0..k)
        .map(|i| {
            let (a, b) = (&bundle.parts[i], &bundle.parts[i + k]);
            let w = a.len().min(b.len());
            (a[..w].to_vec(), b[..w].to_vec())
        })
        .collect();
    let found = par::map(k, |i| {
        bipartite_crossing_family(set, &pairs[i].0, &pairs[i].1, BipartiteMode::Auto { cutoff })
    });
    let mut segments = Vec::new();
    for (i, f) in found.into_iter().enumerate() {
        let f = f?;
        trace.push(TraceEvent::PairFamily {
            pair: i,
            a: pairs[i].0.len(),
            b: pairs[i].1.len(),
            size: f.family.len(),
            exact: f.exact,
        });
        let prt = PrtParameters::for_family_size(f.family.len());
        trace.push(TraceEvent::Prt {
            s: prt.s,
            k: prt.k.to_string(),
            m: prt.m.to_string(),
            epsilon: prt.epsilon.to_string(),
        });
        segments.extend(f.family.segments);
    }
    let family = CrossingFamily { segments, sides: None };
    if !verify_crossing_family(&family, set) {
        return Err(Error::Invariant("segments from different pairs do not all cross".into()));
    }
    trace.push(TraceEvent::CrossingFound { size: family.len() });
    Ok(DichotomyResult {
        certificate: Certificate::CrossingFamily(family),
        trace,
    })
}
