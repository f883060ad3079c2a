//! Convex bundle or non-crossing family.
//!
//! [`find_bundle_or_noncrossing`] splits the input into seven vertical
//! strips, makes them same-type, and then either reads off a non-crossing
//! family from a non-convex representative quadruple or grows a cap of `k`
//! sets one window of five at a time. Every returned certificate has passed
//! its brute-force verifier.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::families::{
    verify_convex_bundle, verify_noncrossing_family, Certificate, ConvexBundle, NonCrossingFamily,
};
use crate::geom::{
    balanced_sizes, convex_position, in_general_position, point_in_triangle, vertical_split,
    Orientation, PointId, PointSet,
};
use crate::same_type::{same_type_reduce, verify_same_type, Reduction, SameTypeConfig};
use crate::{Error, Result};

/// Parameters of a dichotomy run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleRunConfig {
    /// Bundle size.
    pub k: usize,
    /// Bundle width and non-crossing family size.
    pub m: usize,
    /// Practical stand-in for the constant relating `n` to `k m`. Only the
    /// crossing pipeline reads it, to choose `k`.
    pub c_effective: Ratio<u64>,
    pub same_type: SameTypeConfig,
    /// Seeds tried per same-type reduction before giving up.
    pub reduce_attempts: usize,
    pub seed: u64,
}

impl BundleRunConfig {
    pub const DEFAULT_C_EFFECTIVE: u64 = 32;
    pub const DEFAULT_REDUCE_ATTEMPTS: usize = 4;

    pub fn new(k: usize, m: usize) -> Self {
        BundleRunConfig {
            k,
            m,
            c_effective: Ratio::from_integer(Self::DEFAULT_C_EFFECTIVE),
            same_type: SameTypeConfig::default(),
            reduce_attempts: Self::DEFAULT_REDUCE_ATTEMPTS,
            seed: 0,
        }
    }
}

/// One step of a pipeline run, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Split {
        sizes: Vec<usize>,
    },
    Reduced {
        stage: String,
        before: Vec<usize>,
        after: Vec<usize>,
        rounds: usize,
        clustered: bool,
    },
    NonConvexRepresentatives {
        stage: String,
    },
    /// Positions (1-based) of the cap and cup sets among the seven.
    Classified {
        cap: Vec<usize>,
        cup: Vec<usize>,
        reflected: bool,
    },
    EarlyExit {
        k: usize,
    },
    Strips {
        strip_size: usize,
        discarded: usize,
    },
    /// The cap now has `ell + 1` sets; `parts` lists them left to right.
    Extended {
        ell: usize,
        parts: Vec<Vec<PointId>>,
    },
    FailureBranch {
        ell: usize,
    },
    /// Window positions (0-based) of the family's parts, interior last.
    Caratheodory {
        stage: String,
        sets: [usize; 4],
    },
    BundleFound {
        size: usize,
        width: usize,
    },
    PairCount {
        n: usize,
        k: usize,
    },
    PairFamily {
        pair: usize,
        a: usize,
        b: usize,
        size: usize,
        exact: bool,
    },
    Prt {
        s: u32,
        k: String,
        m: String,
        epsilon: String,
    },
    CrossingFound {
        size: usize,
    },
}

/// A verified certificate and the steps that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyResult {
    pub certificate: Certificate,
    pub trace: Vec<TraceEvent>,
}

/// The permutation `pi(i) = ceil(i/2)` for odd `i` and `k + 1 - i/2` for even
/// `i`, as the 1-based list `pi(1), ..., pi(k)`.
pub fn pi_permutation(k: usize) -> Vec<usize> {
    (1..=k)
        .map(|i| {
            if i % 2 == 1 {
                i.div_ceil(2)
            } else {
                k + 1 - i / 2
            }
        })
        .collect()
}

/// Non-crossing family from a same-type tuple whose representatives are not
/// in convex position.
///
/// Scans set quadruples in lexicographic order for one whose representatives
/// have a point inside the triangle of the other three; by the same-type
/// property every choice then does. Parts are cut to their first `m` points.
/// Returns the family and the positions of its parts in `sets`, interior last.
pub fn extract_caratheodory_noncrossing(
    set: &PointSet,
    sets: &[Vec<PointId>],
    m: usize,
) -> Result<(NonCrossingFamily, [usize; 4])> {
    if sets.len() < 4 {
        return Err(Error::InvalidInput("need at least four sets".into()));
    }
    if let Some(small) = sets.iter().find(|s| s.len() < m) {
        return Err(Error::InsufficientPoints {
            stage: "caratheodory".into(),
            needed: m,
            have: small.len(),
        });
    }
    let cert = verify_same_type(set, sets)
        .ok_or_else(|| Error::InvalidInput("sets do not have the same-type property".into()))?;
    let w = &cert.witness;
    let r = sets.len();
    for a in 0..r {
        for b in a + 1..r {
            for c in b + 1..r {
                for d in c + 1..r {
                    let q = [a, b, c, d];
                    for inner in 0..4 {
                        let mut outer = q.iter().copied().filter(|&i| i != q[inner]);
                        let (x, y, z) = (
                            outer.next().unwrap(),
                            outer.next().unwrap(),
                            outer.next().unwrap(),
                        );
                        if point_in_triangle(
                            set.get(w[q[inner]]),
                            set.get(w[x]),
                            set.get(w[y]),
                            set.get(w[z]),
                        )? {
                            let take = |i: usize| sets[i][..m].to_vec();
                            let family = NonCrossingFamily {
                                parts: [take(x), take(y), take(z), take(q[inner])],
                            };
                            if !verify_noncrossing_family(&family, set) {
                                return Err(Error::Invariant(
                                    "same-type quadruple does not give a non-crossing family"
                                        .into(),
                                ));
                            }
                            return Ok((family, [x, y, z, q[inner]]));
                        }
                    }
                }
            }
        }
    }
    Err(Error::InvalidInput(
        "representatives are in convex position".into(),
    ))
}

struct Run<'a> {
    original: &'a PointSet,
    m: usize,
    same_type: SameTypeConfig,
    attempts: usize,
    rng: ChaCha8Rng,
    trace: Vec<TraceEvent>,
}

impl Run<'_> {
    /// Same-type reduction with width floor `m`. A run that hits the floor is
    /// retried with fresh seeds up to `reduce_attempts` times in total.
    fn reduce(&mut self, work: &PointSet, stage: &str, sets: &[Vec<PointId>]) -> Result<Reduction> {
        let width = self.m;
        let mut attempt = 0;
        let red = loop {
            attempt += 1;
            let cfg = SameTypeConfig {
                min_width: width,
                rng_seed: self.rng.random(),
                ..self.same_type.clone()
            };
            match same_type_reduce(work, sets, &cfg) {
                Ok(red) => break red,
                Err(Error::ReductionExhausted { rounds, .. })
                    if rounds < cfg.max_halving_rounds && attempt < self.attempts => {}
                Err(Error::ReductionExhausted { rounds, .. })
                    if rounds < cfg.max_halving_rounds =>
                {
                    return Err(Error::InsufficientPoints {
                        stage: stage.to_string(),
                        needed: width,
                        have: sets.iter().map(Vec::len).min().unwrap_or(0),
                    })
                }
                Err(e) => return Err(e),
            }
        };
        self.trace.push(TraceEvent::Reduced {
            stage: stage.to_string(),
            before: sets.iter().map(Vec::len).collect(),
            after: red.subsets.iter().map(Vec::len).collect(),
            rounds: red.rounds,
            clustered: red.clustered,
        });
        Ok(red)
    }

    fn representatives_convex(&self, work: &PointSet, red: &Reduction) -> Result<bool> {
        convex_position(&work.gather(&red.certificate.witness))
    }

    fn noncrossing(
        mut self,
        work: &PointSet,
        stage: &str,
        sets: &[Vec<PointId>],
    ) -> Result<DichotomyResult> {
        self.trace.push(TraceEvent::NonConvexRepresentatives {
            stage: stage.to_string(),
        });
        let (family, idx) = extract_caratheodory_noncrossing(work, sets, self.m)?;
        if !verify_noncrossing_family(&family, self.original) {
            return Err(Error::Invariant(
                "non-crossing family fails on the input set".into(),
            ));
        }
        self.trace.push(TraceEvent::Caratheodory {
            stage: stage.to_string(),
            sets: idx,
        });
        Ok(DichotomyResult {
            certificate: Certificate::NoncrossingFamily(family),
            trace: self.trace,
        })
    }

    fn bundle(mut self, parts: Vec<Vec<PointId>>) -> Result<DichotomyResult> {
        let bundle = ConvexBundle::from_parts(self.original, parts)
            .ok_or_else(|| Error::Invariant("bundle parts are not same-type".into()))?;
        if !verify_convex_bundle(&bundle, self.original) {
            return Err(Error::Invariant("bundle fails verification".into()));
        }
        self.trace.push(TraceEvent::BundleFound {
            size: bundle.size(),
            width: bundle.width(),
        });
        Ok(DichotomyResult {
            certificate: Certificate::ConvexBundle(bundle),
            trace: self.trace,
        })
    }
}

/// A convex bundle of size `cfg.k` and width at least `cfg.m`, or a
/// non-crossing family of size `cfg.m`.
///
/// Fails with [`Error::InsufficientPoints`] when a same-type reduction would
/// leave a set smaller than `m`, which happens when `n` is small compared to
/// `k m`.
pub fn find_bundle_or_noncrossing(
    set: &PointSet,
    cfg: &BundleRunConfig,
) -> Result<DichotomyResult> {
    let (k, m) = (cfg.k, cfg.m);
    if k == 0 || m == 0 {
        return Err(Error::InvalidInput("k and m must be positive".into()));
    }
    if !set.is_certified() && !in_general_position(set.points()) {
        return Err(Error::Degenerate("input has a collinear triple".into()));
    }
    let n = set.len();
    let mut run = Run {
        original: set,
        m,
        same_type: cfg.same_type.clone(),
        attempts: cfg.reduce_attempts.max(1),
        rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ cfg.same_type.rng_seed.rotate_left(32)),
        trace: Vec::new(),
    };

    if k <= 2 {
        // Any one or two distinct points are in convex position.
        if n < k * m {
            return Err(Error::InsufficientPoints {
                stage: "split".into(),
                needed: k * m,
                have: n,
            });
        }
        let sizes = balanced_sizes(n, k);
        run.trace.push(TraceEvent::Split {
            sizes: sizes.clone(),
        });
        let parts = vertical_split(set, &set.ids(), &sizes)?;
        return run.bundle(parts);
    }

    if n < 7 * m {
        return Err(Error::InsufficientPoints {
            stage: "split".into(),
            needed: 7 * m,
            have: n,
        });
    }
    let sizes = balanced_sizes(n, 7);
    run.trace.push(TraceEvent::Split {
        sizes: sizes.clone(),
    });
    let strips = vertical_split(set, &set.ids(), &sizes)?;
    let red = run.reduce(set, "seven", &strips)?;
    if !run.representatives_convex(set, &red)? {
        return run.noncrossing(set, "seven", &red.subsets);
    }

    // The representatives are in convex position and sorted by x: those above
    // the chord p1 p7 form a cap, those below a cup.
    let reps = &red.certificate.witness;
    let (first, last) = (reps[0], reps[6]);
    let mut cap = vec![0];
    let mut cup = vec![0];
    for (i, &r) in reps.iter().enumerate().take(6).skip(1) {
        if set.orientation(first, last, r) == Orientation::CounterClockwise {
            cap.push(i);
        } else {
            cup.push(i);
        }
    }
    cap.push(6);
    cup.push(6);
    // |cap| + |cup| = 9, so exactly one of them has five or more sets.
    let reflected = cap.len() < 5;
    run.trace.push(TraceEvent::Classified {
        cap: cap.iter().map(|i| i + 1).collect(),
        cup: cup.iter().map(|i| i + 1).collect(),
        reflected,
    });
    let work = if reflected {
        set.reflected()
    } else {
        set.clone()
    };
    let a: Vec<usize> = if reflected { cup } else { cap }
        .into_iter()
        .take(5)
        .collect();
    let p = &red.subsets;

    if k <= 5 {
        run.trace.push(TraceEvent::EarlyExit { k });
        return run.bundle(a[..k].iter().map(|&i| p[i].clone()).collect());
    }

    let mut middle = p[a[2]].clone();
    work.sort_lex(&mut middle);
    let strip = middle.len() / k;
    if strip < m {
        return Err(Error::InsufficientPoints {
            stage: "strips".into(),
            needed: k * m,
            have: middle.len(),
        });
    }
    run.trace.push(TraceEvent::Strips {
        strip_size: strip,
        discarded: middle.len() - strip * k,
    });
    let strips = vertical_split(&work, &middle[..strip * k], &vec![strip; k])?;

    // q[j] is Q_{j+1}.
    let mut q: Vec<Vec<PointId>> = Vec::with_capacity(k);
    q.push(p[a[0]].clone());
    q.push(p[a[1]].clone());
    q.extend(strips[2..k - 2].iter().cloned());
    q.push(p[a[3]].clone());
    q.push(p[a[4]].clone());

    let pi = pi_permutation(k);
    // r[i] is R_{i+1}, a subset of Q_{pi(i+1)}.
    let mut r: Vec<Vec<PointId>> = (0..5).map(|i| q[pi[i] - 1].clone()).collect();

    for ell in 5..k {
        let stage = format!("extend {ell}");
        let window: Vec<Vec<PointId>> = r[ell - 4..ell]
            .iter()
            .cloned()
            .chain(std::iter::once(q[pi[ell] - 1].clone()))
            .collect();
        let red = run.reduce(&work, &stage, &window)?;
        if !run.representatives_convex(&work, &red)? {
            return run.noncrossing(&work, &stage, &red.subsets);
        }
        let mut subsets = red.subsets.into_iter();
        for slot in &mut r[ell - 4..ell] {
            *slot = subsets.next().expect("five subsets");
        }
        r.push(subsets.next().expect("five subsets"));

        // Which side of the lines through R_{ell-1} and R_ell the new set is on.
        let cert = &red.certificate;
        let (lo, hi) = if work.get(cert.witness[2]).x() < work.get(cert.witness[3]).x() {
            (2, 3)
        } else {
            (3, 2)
        };
        if cert.sign(lo, hi, 4) == Orientation::CounterClockwise {
            run.trace.push(TraceEvent::Extended {
                ell,
                parts: by_x(&r, &pi),
            });
            continue;
        }

        run.trace.push(TraceEvent::FailureBranch { ell });
        let stage = format!("failure {ell}");
        let tuple: Vec<Vec<PointId>> = [0, 1, ell - 2, ell - 1, ell]
            .iter()
            .map(|&i| r[i].clone())
            .collect();
        let red = run.reduce(&work, &stage, &tuple)?;
        if run.representatives_convex(&work, &red)? {
            return Err(Error::Invariant(format!(
                "failure branch at step {ell} has convex representatives"
            )));
        }
        return run.noncrossing(&work, &stage, &red.subsets);
    }
    run.bundle(by_x(&r, &pi))
}

/// `r` reordered left to right: `R_i` sits at position `pi(i)`.
fn by_x(r: &[Vec<PointId>], pi: &[usize]) -> Vec<Vec<PointId>> {
    let mut order: Vec<usize> = (0..r.len()).collect();
    order.sort_by_key(|&i| pi[i]);
    order.into_iter().map(|i| r[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::verify_noncrossing_family;
    use crate::generate;

    #[test]
    fn pi_examples() {
        assert_eq!(pi_permutation(6), vec![1, 6, 2, 5, 3, 4]);
        assert_eq!(pi_permutation(1), vec![1]);
        assert_eq!(pi_permutation(7), vec![1, 7, 2, 6, 3, 5, 4]);
        for k in 1..30 {
            let mut p = pi_permutation(k);
            p.sort_unstable();
            assert_eq!(p, (1..=k).collect::<Vec<_>>());
        }
    }

    fn ids(v: &[usize]) -> Vec<PointId> {
        v.iter().map(|&i| PointId(i)).collect()
    }

    #[test]
    fn caratheodory_singletons() {
        let s = PointSet::from_ints(&[(0, 0), (10, 0), (5, 10), (5, 3)]).unwrap();
        let sets: Vec<Vec<PointId>> = s.ids().into_iter().map(|i| vec![i]).collect();
        let (f, idx) = extract_caratheodory_noncrossing(&s, &sets, 1).unwrap();
        assert_eq!(idx, [0, 1, 2, 3]);
        assert_eq!(f.parts[3], ids(&[3]));
    }

    #[test]
    fn caratheodory_picks_the_nonconvex_quadruple() {
        // a convex pentagon's vertices plus nothing inside, except the fifth
        // set sits inside the triangle of sets 0, 1, 2 only
        let s = PointSet::from_ints(&[(0, 0), (100, 0), (50, 90), (-40, 60), (50, 30)]).unwrap();
        let sets: Vec<Vec<PointId>> = s.ids().into_iter().map(|i| vec![i]).collect();
        let (f, idx) = extract_caratheodory_noncrossing(&s, &sets, 1).unwrap();
        assert_eq!(idx[3], 4);
        assert!(verify_noncrossing_family(&f, &s));
    }

    #[test]
    fn caratheodory_rejects_convex_input() {
        let s = PointSet::from_ints(&[(0, 0), (10, 0), (10, 10), (0, 10)]).unwrap();
        let sets: Vec<Vec<PointId>> = s.ids().into_iter().map(|i| vec![i]).collect();
        assert!(extract_caratheodory_noncrossing(&s, &sets, 1).is_err());
    }

    #[test]
    fn convex_input_gives_bundle() {
        for k in [3, 4, 6, 8] {
            let s = generate::convex(14 * k, 1, 1 << 24).unwrap();
            let cfg = BundleRunConfig::new(k, 1);
            let res = find_bundle_or_noncrossing(&s, &cfg).unwrap();
            match res.certificate {
                Certificate::ConvexBundle(b) => {
                    assert_eq!(b.size(), k);
                    assert!(verify_convex_bundle(&b, &s));
                }
                other => panic!("expected a bundle, got {}", other.kind()),
            }
        }
    }

    #[test]
    fn four_clusters_give_noncrossing_family() {
        // seven strips of a set made of four fat clusters
        let (s, _) = generate::four_cluster(40, 3, 20_000).unwrap();
        let cfg = BundleRunConfig::new(4, 2);
        let res = find_bundle_or_noncrossing(&s, &cfg).unwrap();
        match res.certificate {
            Certificate::NoncrossingFamily(f) => {
                assert_eq!(f.size(), 2);
                assert!(verify_noncrossing_family(&f, &s));
            }
            other => panic!("expected a non-crossing family, got {}", other.kind()),
        }
    }

    #[test]
    fn cap_input_extends_to_large_bundle() {
        let s = generate::random_cap(400, 5, 1 << 20).unwrap();
        let cfg = BundleRunConfig::new(10, 2);
        let res = find_bundle_or_noncrossing(&s, &cfg).unwrap();
        let Certificate::ConvexBundle(b) = &res.certificate else {
            panic!("expected a bundle");
        };
        assert_eq!(b.size(), 10);
        assert!(b.width() >= 2);
        let extended = res
            .trace
            .iter()
            .filter(|e| matches!(e, TraceEvent::Extended { .. }))
            .count();
        assert_eq!(extended, 5);
    }

    #[test]
    fn cup_input_takes_reflected_path() {
        let cap = generate::random_cap(200, 6, 1 << 20).unwrap();
        let cup = cap.reflected();
        let cfg = BundleRunConfig::new(7, 1);
        let res = find_bundle_or_noncrossing(&cup, &cfg).unwrap();
        assert!(res.trace.iter().any(|e| matches!(
            e,
            TraceEvent::Classified {
                reflected: true,
                ..
            }
        )));
        assert!(res.certificate.verify(&cup).unwrap());
    }

    #[test]
    fn small_k_and_errors() {
        let s = generate::random_disk(20, 1, 1000).unwrap();
        let res = find_bundle_or_noncrossing(&s, &BundleRunConfig::new(2, 3)).unwrap();
        assert!(res.certificate.verify(&s).unwrap());
        assert!(matches!(
            find_bundle_or_noncrossing(&s, &BundleRunConfig::new(4, 3)),
            Err(Error::InsufficientPoints { .. })
        ));
        assert!(matches!(
            find_bundle_or_noncrossing(&s, &BundleRunConfig::new(0, 3)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn deterministic() {
        let s = generate::random_disk(512, 11, 1 << 20).unwrap();
        let mut cfg = BundleRunConfig::new(4, 2);
        cfg.seed = 3;
        let a = find_bundle_or_noncrossing(&s, &cfg);
        let b = find_bundle_or_noncrossing(&s, &cfg);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
