//! Order types, the same-type property, and a constructive same-type
//! reducer.
//!
//! A tuple of point sets `(Y_1, ..., Y_r)` has the same-type property when,
//! for every three indices, every choice of one point from each of the three
//! sets has the same orientation. [`verify_same_type`] is the authoritative
//! brute-force check; [`well_separated`] is the fast hull-based check the
//! reducer uses in its inner loop.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{
    convex_hull, ham_sandwich_from, in_general_position, orientation, Orientation, Point, PointId,
    PointSet,
};
use crate::{par, Error, Result};

pub type Triple = (usize, usize, usize);

/// Orientation of every index triple `i < j < k` of a point sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderType {
    pub signature: BTreeMap<Triple, Orientation>,
}

pub fn order_type<P: Borrow<Point> + Sync>(points: &[P]) -> Result<OrderType> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(
            "order type needs at least 3 points".into(),
        ));
    }
    let mut signature = BTreeMap::new();
    for (i, j, k) in triples(points.len()) {
        let o = orientation(points[i].borrow(), points[j].borrow(), points[k].borrow());
        if o.is_collinear() {
            return Err(Error::Degenerate(format!(
                "points {i}, {j}, {k} are collinear"
            )));
        }
        signature.insert((i, j, k), o);
    }
    Ok(OrderType { signature })
}

/// All `i < j < k` below `r`, in lexicographic order.
pub fn triples(r: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Witness of the same-type property of a tuple of sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SameTypeCertificate {
    /// Identifiers of the sets, in tuple order.
    pub sets: Vec<usize>,
    /// Common orientation of each set-index triple `i < j < k`.
    pub signature: BTreeMap<Triple, Orientation>,
    /// One representative point per set.
    pub witness: Vec<PointId>,
}

impl SameTypeCertificate {
    /// Orientation of any three distinct set positions, in the given order.
    pub fn sign(&self, a: usize, b: usize, c: usize) -> Orientation {
        let mut t = [a, b, c];
        // parity of the sorting permutation
        let mut odd = false;
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        let o = self.signature[&(t[0], t[1], t[2])];
        if odd {
            o.reverse()
        } else {
            o
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    sets: Vec<usize>,
    signature: BTreeMap<String, i8>,
    witness: Vec<PointId>,
}

impl Serialize for SameTypeCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateJson {
            sets: self.sets.clone(),
            signature: self
                .signature
                .iter()
                .map(|(&(i, j, k), o)| (format!("({i},{j},{k})"), o.as_i8()))
                .collect(),
            witness: self.witness.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SameTypeCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CertificateJson::deserialize(d)?;
        let mut signature = BTreeMap::new();
        for (key, sign) in raw.signature {
            let inner = key
                .strip_prefix('(')
                .and_then(|k| k.strip_suffix(')'))
                .ok_or_else(|| D::Error::custom(format!("bad triple key {key}")))?;
            let idx: Vec<usize> = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(D::Error::custom)?;
            let &[i, j, k] = idx.as_slice() else {
                return Err(D::Error::custom(format!("bad triple key {key}")));
            };
            if !(i < j && j < k) {
                return Err(D::Error::custom(format!("triple key {key} not increasing")));
            }
            let o = Orientation::try_from(sign).map_err(D::Error::custom)?;
            signature.insert((i, j, k), o);
        }
        Ok(SameTypeCertificate {
            sets: raw.sets,
            signature,
            witness: raw.witness,
        })
    }
}

/// Common orientation of all `x, y, z` choices, or `None` if two choices
/// disagree or one is collinear.
fn brute_triple_sign(
    set: &PointSet,
    x: &[PointId],
    y: &[PointId],
    z: &[PointId],
) -> Option<Orientation> {
    let first = set.orientation(x[0], y[0], z[0]);
    if first.is_collinear() {
        return None;
    }
    let ok = par::all(x.len(), |i| {
        let px = set.get(x[i]);
        y.iter().all(|&b| {
            let py = set.get(b);
            z.iter().all(|&c| orientation(px, py, set.get(c)) == first)
        })
    });
    ok.then_some(first)
}

/// Authoritative check of the same-type property by enumerating every point
/// triple of every set triple. Returns the certificate on success.
pub fn verify_same_type(set: &PointSet, sets: &[Vec<PointId>]) -> Option<SameTypeCertificate> {
    if sets.iter().any(Vec::is_empty) {
        return None;
    }
    let ts = triples(sets.len());
    let signs = par::map(ts.len(), |t| {
        let (i, j, k) = ts[t];
        brute_triple_sign(set, &sets[i], &sets[j], &sets[k])
    });
    let mut signature = BTreeMap::new();
    for (t, s) in ts.into_iter().zip(signs) {
        signature.insert(t, s?);
    }
    Some(SameTypeCertificate {
        sets: (0..sets.len()).collect(),
        signature,
        witness: sets.iter().map(|s| s[0]).collect(),
    })
}

/// Same-type test of three sets through their hull vertices only.
///
/// `orientation(x, y, z)` is affine in each argument, so a constant nonzero
/// sign over hull vertex triples extends to the whole hulls. In particular no
/// line through two of the hulls meets the third.
fn hull_triple_sign(h: [&[&Point]; 3]) -> Option<Orientation> {
    let first = orientation(h[0][0], h[1][0], h[2][0]);
    if first.is_collinear() {
        return None;
    }
    let ok = h[0].iter().all(|x| {
        h[1].iter()
            .all(|y| h[2].iter().all(|z| orientation(x, y, z) == first))
    });
    ok.then_some(first)
}

fn hull_points<'a>(set: &'a PointSet, ids: &[PointId]) -> Vec<&'a Point> {
    let pts = set.gather(ids);
    convex_hull(&pts).into_iter().map(|i| pts[i]).collect()
}

/// Whether, for every triple of sets, no line through the hulls of two of them
/// meets the hull of the third. Implies [`verify_same_type`] succeeds.
pub fn well_separated(set: &PointSet, sets: &[Vec<PointId>]) -> bool {
    if sets.iter().any(Vec::is_empty) {
        return false;
    }
    let hulls: Vec<Vec<&Point>> = sets.iter().map(|s| hull_points(set, s)).collect();
    triples(sets.len())
        .into_iter()
        .all(|(i, j, k)| hull_triple_sign([&hulls[i], &hulls[j], &hulls[k]]).is_some())
}

/// Knobs of [`same_type_reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SameTypeConfig {
    /// Every output subset keeps at least this many points.
    pub min_width: usize,
    pub max_halving_rounds: usize,
    pub rng_seed: u64,
    /// Halving cuts tried per pair of sets in each round, from different
    /// seeded starting points.
    #[serde(default = "default_cut_trials")]
    pub cut_trials: usize,
    /// Attempts of the cluster search that runs when halving hits the width
    /// floor; zero disables it.
    #[serde(default = "default_cluster_tries")]
    pub cluster_tries: usize,
}

fn default_cluster_tries() -> usize {
    256
}

fn default_cut_trials() -> usize {
    1
}

impl Default for SameTypeConfig {
    fn default() -> Self {
        SameTypeConfig {
            min_width: 1,
            max_halving_rounds: 10_000,
            rng_seed: 0,
            cut_trials: default_cut_trials(),
            cluster_tries: default_cluster_tries(),
        }
    }
}

/// Output of [`same_type_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub subsets: Vec<Vec<PointId>>,
    pub certificate: SameTypeCertificate,
    pub rounds: usize,
    /// Whether the halving rounds hit the width floor and the subsets come
    /// from the cluster search instead.
    pub clustered: bool,
}

impl Reduction {
    /// `min_i |subset_i| / |input_i|`.
    pub fn retained_fraction(&self, inputs: &[Vec<PointId>]) -> f64 {
        self.subsets
            .iter()
            .zip(inputs)
            .map(|(s, x)| s.len() as f64 / x.len() as f64)
            .fold(f64::INFINITY, f64::min)
    }
}

struct Candidate {
    changes: [(usize, Vec<PointId>); 2],
    removes_offense: bool,
    min_card: usize,
    /// Points lost by the move.
    dropped: usize,
    offending: usize,
}

/// Shrinks `sets` to subsets with the same-type property.
///
/// Each round takes the lexicographically first offending set triple, cuts
/// each pair of its sets by a ham-sandwich line, and keeps the pair of halves
/// that clears the offense while keeping the smallest set as large as
/// possible; remaining ties go to the choice leaving the fewest offending
/// triples, then to the earliest candidate. The result is always checked by
/// [`verify_same_type`].
///
/// Fails with [`Error::ReductionExhausted`] when the best move would leave a
/// set below `cfg.min_width` or the round budget runs out.
pub fn same_type_reduce(
    set: &PointSet,
    sets: &[Vec<PointId>],
    cfg: &SameTypeConfig,
) -> Result<Reduction> {
    if cfg.min_width == 0 {
        return Err(Error::InvalidInput("min_width must be at least 1".into()));
    }
    if sets.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput(
            "empty set in same-type reduction".into(),
        ));
    }
    let mut seen = HashSet::new();
    if !sets.iter().flatten().all(|id| seen.insert(*id)) {
        return Err(Error::InvalidInput("sets are not disjoint".into()));
    }
    let union: Vec<&Point> = sets.iter().flatten().map(|&id| set.get(id)).collect();
    if !set.is_certified() && !in_general_position(&union) {
        return Err(Error::Degenerate(
            "union of sets has a collinear triple".into(),
        ));
    }
    if let Some(small) = sets
        .iter()
        .map(Vec::len)
        .min()
        .filter(|&l| l < cfg.min_width)
    {
        return Err(Error::ReductionExhausted {
            rounds: 0,
            reason: format!("input set of size {small} is below width {}", cfg.min_width),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut state: Vec<Vec<PointId>> = sets.to_vec();
    let mut hulls: Vec<Vec<&Point>> = state.iter().map(|s| hull_points(set, s)).collect();
    let all_triples = triples(state.len());
    let offends = |hulls: &[Vec<&Point>], (i, j, k): Triple| {
        hull_triple_sign([&hulls[i], &hulls[j], &hulls[k]]).is_none()
    };
    let mut rounds = 0;

    let greedy: Result<()> = 'greedy: {
        while let Some(&(i, j, k)) = all_triples.iter().find(|&&t| offends(&hulls, t)) {
            if rounds >= cfg.max_halving_rounds {
                return Err(Error::ReductionExhausted {
                    rounds,
                    reason: "round budget exhausted".into(),
                });
            }
            rounds += 1;

            let mut candidates: Vec<Candidate> = Vec::new();
            for (p, q) in [(i, j), (i, k), (j, k)] {
                for _ in 0..cfg.cut_trials.max(1) {
                    let start = (
                        rng.random_range(0..state[p].len()),
                        rng.random_range(0..state[q].len()),
                    );
                    let cut = ham_sandwich_from(set, &state[p], &state[q], start)?;
                    let (pl, pr) = cut.split(set, &state[p]);
                    let (ql, qr) = cut.split(set, &state[q]);
                    for hp in [&pl, &pr] {
                        for hq in [&ql, &qr] {
                            if hp.is_empty() || hq.is_empty() {
                                continue;
                            }
                            let mut trial = hulls.clone();
                            trial[p] = hull_points(set, hp);
                            trial[q] = hull_points(set, hq);
                            let min_card = (0..state.len())
                                .map(|s| match s {
                                    s if s == p => hp.len(),
                                    s if s == q => hq.len(),
                                    s => state[s].len(),
                                })
                                .min()
                                .unwrap_or(0);
                            candidates.push(Candidate {
                                dropped: state[p].len() - hp.len() + state[q].len() - hq.len(),
                                changes: [(p, hp.clone()), (q, hq.clone())],
                                removes_offense: !offends(&trial, (i, j, k)),
                                min_card,
                                offending: all_triples
                                    .iter()
                                    .filter(|&&t| offends(&trial, t))
                                    .count(),
                            });
                        }
                    }
                }
            }
            // Trim one set of the triple to the points that see the hulls of the
            // other two with a constant orientation.
            for (s, t, u) in [(i, j, k), (j, i, k), (k, i, j)] {
                for side in [Orientation::CounterClockwise, Orientation::Clockwise] {
                    let kept: Vec<PointId> = state[s]
                        .iter()
                        .copied()
                        .filter(|&id| {
                            let z = set.get(id);
                            hulls[t]
                                .iter()
                                .all(|x| hulls[u].iter().all(|y| orientation(x, y, z) == side))
                        })
                        .collect();
                    if kept.is_empty() || kept.len() == state[s].len() {
                        continue;
                    }
                    let mut trial = hulls.clone();
                    trial[s] = hull_points(set, &kept);
                    let min_card = (0..state.len())
                        .map(|x| if x == s { kept.len() } else { state[x].len() })
                        .min()
                        .unwrap_or(0);
                    candidates.push(Candidate {
                        dropped: state[s].len() - kept.len(),
                        changes: [(s, kept.clone()), (s, kept)],
                        removes_offense: !offends(&trial, (i, j, k)),
                        min_card,
                        offending: all_triples.iter().filter(|&&t| offends(&trial, t)).count(),
                    });
                }
            }
            // min_by_key keeps the first of equal keys: candidate order breaks ties.
            let best = candidates
                .into_iter()
                .min_by_key(|c| {
                    (
                        !c.removes_offense,
                        std::cmp::Reverse(c.min_card),
                        c.dropped,
                        c.offending,
                    )
                })
                .ok_or_else(|| Error::ReductionExhausted {
                    rounds,
                    reason: format!("offending triple ({i},{j},{k}) has no splittable pair"),
                })?;
            if best.min_card < cfg.min_width {
                break 'greedy Err(Error::ReductionExhausted {
                    rounds,
                    reason: format!(
                        "offending triple ({i},{j},{k}) forces a set below width {}",
                        cfg.min_width
                    ),
                });
            }
            for (s, ids) in best.changes {
                hulls[s] = hull_points(set, &ids);
                state[s] = ids;
            }
        }
        Ok(())
    };

    let mut clustered = false;
    if let Err(e) = greedy {
        state = cluster_search(set, sets, cfg.min_width, cfg.cluster_tries, &mut rng).ok_or(e)?;
        clustered = true;
    }

    let certificate = verify_same_type(set, &state).ok_or_else(|| {
        Error::Invariant("hull check passed but brute-force same-type check failed".into())
    })?;
    Ok(Reduction {
        subsets: state,
        certificate,
        rounds,
        clustered,
    })
}

/// Looks for same-type subsets of exactly `width` points: each set keeps a
/// random point and its `width - 1` nearest neighbours in the set, and the
/// tuple is kept once the hull test accepts it.
fn cluster_search(
    set: &PointSet,
    sets: &[Vec<PointId>],
    width: usize,
    tries: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<PointId>>> {
    let coords: Vec<Vec<(f64, f64)>> = sets
        .iter()
        .map(|s| s.iter().map(|&id| set.get(id).to_f64()).collect())
        .collect();
    for _ in 0..tries {
        let pick: Vec<Vec<PointId>> = sets
            .iter()
            .zip(&coords)
            .map(|(s, c)| {
                let centre = c[rng.random_range(0..s.len())];
                let mut order: Vec<usize> = (0..s.len()).collect();
                order.sort_by(|&a, &b| {
                    let d = |p: (f64, f64)| (p.0 - centre.0).powi(2) + (p.1 - centre.1).powi(2);
                    d(c[a]).total_cmp(&d(c[b])).then(a.cmp(&b))
                });
                order[..width].iter().map(|&i| s[i]).collect()
            })
            .collect();
        if well_separated(set, &pick) {
            return Some(pick);
        }
    }
    None
}
