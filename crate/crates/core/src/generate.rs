//! Seeded generators of integer point sets in general position.
//!
//! Every generator rejects candidate points that would create a collinear
//! triple or repeat an x-coordinate, so the output is in general position
//! and any vertical split is unambiguous.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::families::NonCrossingFamily;
use crate::geom::{convex_position, Point, PointId, PointSet};
use crate::{Error, Result};

const MAX_ATTEMPTS: usize = 1_000_000;

/// Incrementally built integer point set that refuses collinear triples and
/// repeated x-coordinates.
struct Builder {
    pts: Vec<(i64, i64)>,
    xs: HashSet<i64>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Builder {
    fn new() -> Self {
        Builder {
            pts: Vec::new(),
            xs: HashSet::new(),
        }
    }

    /// Adds `p` unless it breaks general position or distinct x.
    fn try_add(&mut self, p: (i64, i64)) -> bool {
        if self.xs.contains(&p.0) {
            return false;
        }
        // p is collinear with q, r iff the directions p->q and p->r agree up
        // to sign.
        let mut dirs = HashSet::with_capacity(self.pts.len());
        for &q in &self.pts {
            let (mut dx, mut dy) = (q.0 - p.0, q.1 - p.1);
            let g = gcd(dx, dy);
            (dx, dy) = (dx / g, dy / g);
            if dx < 0 || (dx == 0 && dy < 0) {
                (dx, dy) = (-dx, -dy);
            }
            if !dirs.insert((dx, dy)) {
                return false;
            }
        }
        self.xs.insert(p.0);
        self.pts.push(p);
        true
    }

    fn fill(&mut self, n: usize, mut sample: impl FnMut() -> (i64, i64)) -> Result<()> {
        let mut attempts = 0;
        while self.pts.len() < n {
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                return Err(Error::InvalidInput(format!(
                    "could not place {n} points in general position"
                )));
            }
            self.try_add(sample());
        }
        Ok(())
    }

    fn finish(self) -> Result<PointSet> {
        PointSet::from_ints(&self.pts)?.certified()
    }
}

/// `n` integer points uniform in the disk of radius `radius` about the origin.
pub fn random_disk(n: usize, seed: u64, radius: i64) -> Result<PointSet> {
    if radius < 1 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new();
    b.fill(n, || loop {
        let x = rng.random_range(-radius..=radius);
        let y = rng.random_range(-radius..=radius);
        if (x as i128).pow(2) + (y as i128).pow(2) <= (radius as i128).pow(2) {
            break (x, y);
        }
    })?;
    b.finish()
}

/// `n` points in convex position near the circle of radius `radius`.
pub fn convex(n: usize, seed: u64, radius: i64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let mut angles: Vec<f64> = (0..n)
            .map(|i| (i as f64 + rng.random_range(0.1..0.9)) * std::f64::consts::TAU / n as f64)
            .collect();
        angles.sort_by(f64::total_cmp);
        let mut b = Builder::new();
        let ok = angles.iter().all(|t| {
            b.try_add((
                (radius as f64 * t.cos()).round() as i64,
                (radius as f64 * t.sin()).round() as i64,
            ))
        });
        if ok {
            let set = b.finish()?;
            if convex_position(set.points())? {
                return Ok(set);
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "no convex {n}-gon at radius {radius}; increase the radius"
    )))
}

/// `n` points on the concave parabola `y = -x^2` with distinct random
/// `|x| <= half_width`. Every vertical split of it is a cap of caps.
pub fn random_cap(n: usize, seed: u64, half_width: i64) -> Result<PointSet> {
    if half_width > 1 << 30 {
        return Err(Error::InvalidInput("half width too large".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new();
    b.fill(n, || {
        let x = rng.random_range(-half_width..=half_width);
        (x, -x * x)
    })?;
    b.finish()
}

/// Jittered grid: `n` points taken row by row from a square grid with
/// spacing `spacing`, each moved by at most `spacing / 3` in each coordinate.
pub fn grid_perturbed(n: usize, seed: u64, spacing: i64) -> Result<PointSet> {
    if spacing < 3 {
        return Err(Error::InvalidInput("spacing must be at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (n as f64).sqrt().ceil() as i64;
    let jitter = spacing / 3;
    let mut b = Builder::new();
    for cell in 0..n as i64 {
        let (gx, gy) = (cell % side, cell / side);
        let mut placed = false;
        for _ in 0..10_000 {
            let p = (
                gx * spacing + rng.random_range(-jitter..=jitter),
                gy * spacing + rng.random_range(-jitter..=jitter),
            );
            if b.try_add(p) {
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::InvalidInput(
                "grid too crowded for general position".into(),
            ));
        }
    }
    b.finish()
}

/// Three clusters at the corners of a large triangle and one at an interior
/// point, each of `m` points within `spread` of its center. The labeled
/// parts form a non-crossing family of size `m`.
pub fn four_cluster(m: usize, seed: u64, spread: i64) -> Result<(PointSet, NonCrossingFamily)> {
    const CENTERS: [(i64, i64); 4] = [
        (0, 0),
        (1_000_000, 0),
        (500_000, 900_000),
        (500_000, 300_000),
    ];
    if m == 0 || !(1..=50_000).contains(&spread) {
        return Err(Error::InvalidInput(
            "need m >= 1 and 1 <= spread <= 50000".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new();
    for &(cx, cy) in &CENTERS {
        let target = b.pts.len() + m;
        b.fill(target, || {
            (
                cx + rng.random_range(-spread..=spread),
                cy + rng.random_range(-spread..=spread),
            )
        })?;
    }
    let set = b.finish()?;
    let part = |c: usize| -> Vec<PointId> { (c * m..(c + 1) * m).map(PointId).collect() };
    let family = NonCrossingFamily {
        parts: [part(0), part(1), part(2), part(3)],
    };
    Ok((set, family))
}

/// Integer point helper for tests and examples.
pub fn points(coords: &[(i64, i64)]) -> Vec<Point> {
    coords
        .iter()
        .map(|&(x, y)| Point::from_ints(x, y))
        .collect()
}
