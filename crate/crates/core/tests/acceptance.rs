//! Acceptance suite. Each criterion prints one PASS or FAIL line; the
//! process exits non-zero if any criterion fails.
//!
//! Every criterion also returns a text artifact. Determinism is checked by
//! running all of them a second time and comparing the bytes.

use std::fmt::Write;
use std::time::Instant;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crossfam::bundle::{find_bundle_or_noncrossing, BundleRunConfig};
use crossfam::crossing::{bipartite_crossing_family, find_crossing_or_noncrossing, incomparable_count, BipartiteMode, EXACT_CUTOFF};
use crossfam::families::{bundle_to_crossing_family, verify_crossing_family, verify_spoke_set, Certificate, ConvexBundle};
use crossfam::geom::{hull_ids, line_meets_hull, vertical_split};
use crossfam::oracles::{bipartite_family_exact, max_crossing_family_exact, OracleBudget};
use crossfam::same_type::{same_type_reduce, verify_same_type, SameTypeConfig};
use crossfam::spoke::{build_prop7_auto, DEFAULT_SNAP};
use crossfam::{generate, Error, PointId, PointSet};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn prop7() -> Outcome {
    let mut art = String::new();
    for k in [3, 5, 7] {
        let inst = build_prop7_auto(k, DEFAULT_SNAP).map_err(e)?;
        ensure(inst.points.len() == 3 * k - 1, || format!("k={k}: {} points", inst.points.len()))?;
        ensure(inst.lines.lines.len() == 3 * k / 2, || format!("k={k}: {} lines", inst.lines.lines.len()))?;
        ensure(verify_spoke_set(&inst.lines, &inst.points).map_err(e)?, || format!("k={k}: spoke set fails"))?;
        let best = max_crossing_family_exact(&inst.points, &OracleBudget::default()).map_err(e)?;
        ensure(best.family.len() <= k, || format!("k={k}: crossing family of size {}", best.family.len()))?;
        writeln!(art, "k={k} points={} lines={} max_family={}", inst.points.len(), inst.lines.lines.len(), best.family.len()).unwrap();
    }
    Ok(art)
}

fn convex_baseline() -> Outcome {
    let mut art = String::new();
    for n in [4, 6, 8, 10, 12] {
        let s = generate::convex(n, n as u64, 1 << 20).map_err(e)?;
        let best = max_crossing_family_exact(&s, &OracleBudget::default()).map_err(e)?;
        ensure(best.family.len() == n / 2, || format!("n={n}: got {}", best.family.len()))?;
        writeln!(art, "n={n} max_family={}", best.family.len()).unwrap();
    }
    Ok(art)
}

/// Verified even-size bundles found by the dichotomy criterion.
#[derive(Default)]
struct Dichotomy {
    bundles: Vec<(PointSet, ConvexBundle)>,
}

fn dichotomy(store: &mut Dichotomy) -> Outcome {
    let mut art = String::new();
    for k in [3, 4] {
        for m in [1, 2] {
            let n = 64 * k * m;
            let mut tally = [0usize; 4]; // bundle, non-crossing, crossing, insufficient
            for seed in 0..100u64 {
                let set = generate::random_disk(n, seed, 1 << 20).map_err(e)?;
                let cfg = BundleRunConfig { seed, ..BundleRunConfig::new(k, m) };
                let results = [
                    find_bundle_or_noncrossing(&set, &cfg),
                    find_crossing_or_noncrossing(&set, m, &cfg, EXACT_CUTOFF),
                ];
                for res in results {
                    match res {
                        Ok(r) => {
                            ensure(r.certificate.verify(&set).map_err(e)?, || {
                                format!("k={k} m={m} seed={seed}: unverified {}", r.certificate.kind())
                            })?;
                            match r.certificate {
                                Certificate::ConvexBundle(b) => {
                                    tally[0] += 1;
                                    if b.size() % 2 == 0 {
                                        store.bundles.push((set.clone(), b));
                                    }
                                }
                                Certificate::NoncrossingFamily(_) => tally[1] += 1,
                                Certificate::CrossingFamily(_) => tally[2] += 1,
                                Certificate::SpokeSet(_) => return Err("unexpected spoke set".into()),
                            }
                        }
                        Err(Error::InsufficientPoints { .. }) => tally[3] += 1,
                        Err(other) => return Err(format!("k={k} m={m} seed={seed}: {other}")),
                    }
                }
            }
            writeln!(
                art,
                "k={k} m={m} n={n} bundle={} noncrossing={} crossing={} insufficient={}",
                tally[0], tally[1], tally[2], tally[3]
            )
            .unwrap();
        }
    }
    Ok(art)
}

fn reducer() -> Outcome {
    let mut art = String::new();
    let (mut ok, mut err) = (0, 0);
    let mut successes = Vec::new();
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.random_range(3..=7);
        let per = rng.random_range(8..=20);
        let set = generate::random_disk(r * per, seed, 1 << 20).map_err(e)?;
        let mut ids = set.ids();
        let sets: Vec<Vec<PointId>> = if seed % 2 == 0 {
            vertical_split(&set, &ids, &vec![per; r]).map_err(e)?
        } else {
            ids.shuffle(&mut rng);
            ids.chunks(per).map(<[PointId]>::to_vec).collect()
        };
        let cfg = SameTypeConfig { rng_seed: seed, ..SameTypeConfig::default() };
        match same_type_reduce(&set, &sets, &cfg) {
            Ok(red) => {
                ensure(verify_same_type(&set, &red.subsets).is_some(), || format!("seed={seed}: not same-type"))?;
                ensure(red.subsets.iter().all(|s| s.len() >= cfg.min_width), || format!("seed={seed}: below width floor"))?;
                ensure(
                    red.subsets.iter().zip(&sets).all(|(y, x)| y.iter().all(|p| x.contains(p))),
                    || format!("seed={seed}: subset escapes its input"),
                )?;
                ok += 1;
                successes.push((set, red));
            }
            Err(_) => err += 1,
        }
    }
    ensure(!successes.is_empty(), || "no successful reduction".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..1000 {
        let (set, red) = &successes[trial % successes.len()];
        let sub: Vec<Vec<PointId>> = red
            .subsets
            .iter()
            .map(|s| {
                let keep = rng.random_range(1..=s.len());
                s.choose_multiple(&mut rng, keep).copied().collect()
            })
            .collect();
        let cert = verify_same_type(set, &sub).ok_or_else(|| format!("sub-sampling {trial} lost the property"))?;
        ensure(cert.signature == red.certificate.signature, || format!("sub-sampling {trial} changed the signature"))?;
    }
    writeln!(art, "reduced={ok} errors={err} subsamplings=1000").unwrap();
    Ok(art)
}

/// `a` and `b` on the two sides of a random line through the origin.
fn random_separated_pair(seed: u64) -> Result<(PointSet, Vec<PointId>, Vec<PointId>), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = generate::random_disk(40, seed, 1 << 16).map_err(e)?;
    let (dx, dy): (i64, i64) = (rng.random_range(1..=100), rng.random_range(-100..=100));
    let side = |id: PointId| {
        let (x, y) = set.get(id).to_f64();
        dx as f64 * x + dy as f64 * y
    };
    let mut ids = set.ids();
    ids.sort_by(|&p, &q| side(p).total_cmp(&side(q)));
    let (na, nb) = (rng.random_range(3..=10), rng.random_range(3..=10));
    let a = ids[..na].to_vec();
    let b = ids[ids.len() - nb..].to_vec();
    Ok((set, a, b))
}

fn partial_order() -> Outcome {
    let mut total_incomparable = 0;
    for seed in 0..200u64 {
        let (set, a, b) = random_separated_pair(seed)?;
        let report = incomparable_count(&set, &a, &b).map_err(|err| format!("seed={seed}: {err}"))?;
        let less = |x: PointId, y: PointId| report.relation.contains(&(x, y));
        for &x in &a {
            ensure(!less(x, x), || format!("seed={seed}: reflexive at {x}"))?;
            for &y in &a {
                for &z in &a {
                    if less(x, y) && less(y, z) {
                        ensure(less(x, z), || format!("seed={seed}: not transitive"))?;
                    }
                }
            }
        }
        let hull: Vec<_> = hull_ids(&set, &b).into_iter().map(|id| set.get(id)).collect();
        let mut stabbed = 0;
        for (i, &x) in a.iter().enumerate() {
            for &y in &a[i + 1..] {
                let incomparable = !less(x, y) && !less(y, x);
                let stabs = line_meets_hull(set.get(x), set.get(y), &hull);
                ensure(incomparable == stabs, || format!("seed={seed}: pair ({x}, {y}) disagrees"))?;
                stabbed += usize::from(stabs);
            }
        }
        ensure(stabbed == report.incomparable, || format!("seed={seed}: count mismatch"))?;
        total_incomparable += stabbed;
    }
    Ok(format!("pairs=200 incomparable_total={total_incomparable}\n"))
}

fn conversion(store: &Dichotomy) -> Outcome {
    ensure(!store.bundles.is_empty(), || "no even-size bundle to convert".into())?;
    for (set, b) in &store.bundles {
        let f = bundle_to_crossing_family(b, set).map_err(e)?;
        ensure(f.len() == b.size() / 2, || format!("size {} from bundle of size {}", f.len(), b.size()))?;
        ensure(verify_crossing_family(&f, set), || "converted family fails".into())?;
    }
    Ok(format!("converted={}\n", store.bundles.len()))
}

fn oracle_cross_validation() -> Outcome {
    let mut sizes = String::new();
    let (mut exact_total, mut greedy_total) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let set = generate::random_disk(10, seed, 1 << 16).map_err(e)?;
        let (dx, dy): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut ids = set.ids();
        let key = |id: PointId| {
            let (x, y) = set.get(id).to_f64();
            dx * x + dy * y
        };
        ids.sort_by(|&p, &q| key(p).total_cmp(&key(q)));
        let (a, b) = ids.split_at(5);
        let exact = bipartite_crossing_family(&set, a, b, BipartiteMode::Exact).map_err(e)?;
        let greedy = bipartite_crossing_family(&set, a, b, BipartiteMode::Greedy).map_err(e)?;
        let oracle = bipartite_family_exact(&set, a, b, &OracleBudget::default()).map_err(e)?;
        ensure(exact.family.len() == oracle.family.len(), || {
            format!("seed={seed}: exact {} vs oracle {}", exact.family.len(), oracle.family.len())
        })?;
        ensure(greedy.family.len() <= exact.family.len(), || format!("seed={seed}: greedy beats exact"))?;
        write!(sizes, "{}/{} ", exact.family.len(), greedy.family.len()).unwrap();
        exact_total += exact.family.len();
        greedy_total += greedy.family.len();
    }
    writeln!(sizes, "\ninstances=100 exact_total={exact_total} greedy_total={greedy_total}").unwrap();
    Ok(sizes)
}

struct Criterion {
    name: &'static str,
    outcome: Outcome,
    seconds: f64,
}

fn timed(name: &'static str, f: impl FnOnce() -> Outcome) -> Criterion {
    let start = Instant::now();
    let outcome = f();
    Criterion { name, outcome, seconds: start.elapsed().as_secs_f64() }
}

fn run_all() -> Vec<Criterion> {
    let mut store = Dichotomy::default();
    vec![
        timed("spoke sets vs crossing families (k = 3, 5, 7)", prop7),
        timed("convex-position baseline", convex_baseline),
        timed("dichotomy soundness", || dichotomy(&mut store)),
        timed("same-type reducer soundness", reducer),
        timed("partial order and stabbing", partial_order),
        timed("bundle to crossing family", || conversion(&store)),
        timed("bipartite search vs oracle", oracle_cross_validation),
    ]
}

fn main() {
    let first = run_all();
    let mut failed = false;
    for (i, c) in first.iter().enumerate() {
        let (status, detail) = match &c.outcome {
            Ok(art) => ("PASS", art.lines().last().unwrap_or("").to_string()),
            Err(msg) => ("FAIL", msg.clone()),
        };
        failed |= c.outcome.is_err();
        println!("criterion {}: {status} {} ({:.1}s) {detail}", i + 1, c.name, c.seconds);
    }

    let start = Instant::now();
    let second = run_all();
    let mismatched: Vec<usize> = first
        .iter()
        .zip(&second)
        .enumerate()
        .filter(|(_, (a, b))| a.outcome != b.outcome)
        .map(|(i, _)| i + 1)
        .collect();
    let status = if mismatched.is_empty() { "PASS" } else { "FAIL" };
    failed |= !mismatched.is_empty();
    println!(
        "criterion 8: {status} determinism ({:.1}s) repeated runs differ in criteria {mismatched:?}",
        start.elapsed().as_secs_f64()
    );
    if failed {
        std::process::exit(1);
    }
}
