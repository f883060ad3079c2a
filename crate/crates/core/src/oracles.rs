//! Brute-force ground truth: maximum crossing families by clique search on
//! the segment crossing graph, and the quadruple test for non-crossing
//! families of size one.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::families::CrossingFamily;
use crate::geom::{point_in_triangle, segments_cross_pts, PointId, PointSet};
use crate::{Error, Result};

/// Limits for the exact searches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_segments: usize,
    pub max_nodes: u64,
    pub timeout: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_segments: 400,
            max_nodes: 200_000_000,
            timeout: Duration::from_secs(120),
        }
    }
}

/// An optimal family and the number of search nodes it took.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactFamily {
    pub family: CrossingFamily,
    pub nodes: u64,
}

/// Adjacency matrix of a graph.
pub(crate) struct Graph {
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub(crate) fn new(n: usize, edge: impl Fn(usize, usize) -> bool) -> Graph {
        let mut adj = vec![vec![false; n]; n];
        for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
            if edge(i, j) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        Graph { adj }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&e| e).count()
    }

    /// Vertices by descending degree, ties by index.
    fn degree_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        order
    }

    /// Maximal clique grown greedily in degree order.
    pub(crate) fn greedy_clique(&self) -> Vec<usize> {
        let mut clique: Vec<usize> = Vec::new();
        for v in self.degree_order() {
            if clique.iter().all(|&u| self.adj[u][v]) {
                clique.push(v);
            }
        }
        clique
    }
}

struct Search<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    out_of_budget: bool,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes || (self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline)
        {
            self.out_of_budget = true;
        }
        !self.out_of_budget
    }

    /// Branch and bound with greedy coloring: a candidate set that needs `c`
    /// colors holds no clique larger than `c`.
    fn colored(&mut self, clique: &mut Vec<usize>, cand: Vec<usize>) {
        if !self.tick() {
            return;
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &cand {
            match classes
                .iter_mut()
                .find(|c| c.iter().all(|&u| !self.g.adj[u][v]))
            {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut ordered: Vec<(usize, usize)> = Vec::with_capacity(cand.len());
        for (color, class) in classes.iter().enumerate() {
            ordered.extend(class.iter().map(|&v| (v, color + 1)));
        }
        let mut remaining: Vec<usize> = ordered.iter().map(|&(v, _)| v).collect();
        while let Some((v, color)) = ordered.pop() {
            if clique.len() + color <= self.best.len() || self.out_of_budget {
                return;
            }
            remaining.pop();
            clique.push(v);
            let next: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&u| self.g.adj[v][u])
                .collect();
            if next.is_empty() {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.colored(clique, next);
            }
            clique.pop();
        }
    }

    /// Include-or-exclude enumeration pruned only by `|clique| + |cand|`.
    fn plain(&mut self, clique: &mut Vec<usize>, cand: &[usize]) {
        if !self.tick() {
            return;
        }
        if clique.len() > self.best.len() {
            self.best = clique.clone();
        }
        for (i, &v) in cand.iter().enumerate() {
            if clique.len() + cand.len() - i <= self.best.len() || self.out_of_budget {
                return;
            }
            let next: Vec<usize> = cand[i + 1..]
                .iter()
                .copied()
                .filter(|&u| self.g.adj[v][u])
                .collect();
            clique.push(v);
            self.plain(clique, &next);
            clique.pop();
        }
    }
}

/// Outcome of a clique search: the clique, the node count, and whether the
/// search completed.
pub(crate) struct CliqueOutcome {
    pub clique: Vec<usize>,
    pub nodes: u64,
    pub complete: bool,
}

fn run_search(g: &Graph, budget: &OracleBudget, colored: bool) -> CliqueOutcome {
    let mut s = Search {
        g,
        best: g.greedy_clique(),
        nodes: 0,
        max_nodes: budget.max_nodes,
        deadline: Instant::now() + budget.timeout,
        out_of_budget: false,
    };
    let order = g.degree_order();
    if colored {
        // The coloring pass pops from the back, so put high degree last.
        s.colored(&mut Vec::new(), order.into_iter().rev().collect());
    } else {
        s.plain(&mut Vec::new(), &order);
    }
    let mut clique = s.best;
    clique.sort_unstable();
    CliqueOutcome {
        clique,
        nodes: s.nodes,
        complete: !s.out_of_budget,
    }
}

/// Maximum clique by coloring-bounded branch and bound.
pub(crate) fn max_clique(g: &Graph, budget: &OracleBudget) -> CliqueOutcome {
    run_search(g, budget, true)
}

/// Maximum clique by plain enumeration.
pub(crate) fn max_clique_plain(g: &Graph, budget: &OracleBudget) -> CliqueOutcome {
    run_search(g, budget, false)
}

fn crossing_graph(set: &PointSet, segs: &[(PointId, PointId)]) -> Graph {
    Graph::new(segs.len(), |i, j| {
        let ((a, b), (c, d)) = (segs[i], segs[j]);
        segments_cross_pts(set.get(a), set.get(b), set.get(c), set.get(d))
    })
}

fn finish(
    segs: &[(PointId, PointId)],
    out: CliqueOutcome,
    sides: Option<[Vec<PointId>; 2]>,
) -> Result<ExactFamily> {
    let family = CrossingFamily {
        segments: out.clique.iter().map(|&i| segs[i]).collect(),
        sides,
    };
    if out.complete {
        Ok(ExactFamily {
            family,
            nodes: out.nodes,
        })
    } else {
        Err(Error::OracleTimeout {
            nodes: out.nodes,
            best: family,
        })
    }
}

/// Largest crossing family of `set`.
///
/// Vertices of the search graph are all segments between points; segments
/// sharing an endpoint never cross properly, so every clique has distinct
/// endpoints.
pub fn max_crossing_family_exact(set: &PointSet, budget: &OracleBudget) -> Result<ExactFamily> {
    let ids = set.ids();
    let segs: Vec<(PointId, PointId)> = ids
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| ids[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    if segs.len() > budget.max_segments {
        return Err(Error::InvalidInput(format!(
            "{} segments exceed the oracle limit of {}",
            segs.len(),
            budget.max_segments
        )));
    }
    let g = crossing_graph(set, &segs);
    finish(&segs, max_clique(&g, budget), None)
}

/// Largest crossing family whose segments each join `a` to `b`, by plain
/// enumeration.
pub fn bipartite_family_exact(
    set: &PointSet,
    a: &[PointId],
    b: &[PointId],
    budget: &OracleBudget,
) -> Result<ExactFamily> {
    let segs = bipartite_segments(a, b);
    if segs.len() > budget.max_segments {
        return Err(Error::InvalidInput(format!(
            "{} segments exceed the oracle limit of {}",
            segs.len(),
            budget.max_segments
        )));
    }
    let g = crossing_graph(set, &segs);
    finish(
        &segs,
        max_clique_plain(&g, budget),
        Some([a.to_vec(), b.to_vec()]),
    )
}

pub(crate) fn bipartite_segments(a: &[PointId], b: &[PointId]) -> Vec<(PointId, PointId)> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .collect()
}

/// Whether some four points of `set` have one inside the triangle of the
/// other three.
pub fn exists_noncrossing_of_size_one(set: &PointSet) -> bool {
    let p = set.points();
    let n = p.len();
    (0..n).any(|i| {
        (0..n).any(|a| {
            a != i
                && (a + 1..n).any(|b| {
                    b != i
                        && (b + 1..n).any(|c| {
                            c != i && point_in_triangle(&p[i], &p[a], &p[b], &p[c]).unwrap_or(false)
                        })
                })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::verify_crossing_family;
    use crate::generate;
    use crate::geom::convex_position;

    fn set(c: &[(i64, i64)]) -> PointSet {
        PointSet::from_ints(c).unwrap()
    }

    #[test]
    fn small_examples() {
        let b = OracleBudget::default();
        let square = set(&[(0, 0), (10, 0), (10, 10), (0, 10)]);
        let r = max_crossing_family_exact(&square, &b).unwrap();
        assert_eq!(r.family.len(), 2);
        assert!(verify_crossing_family(&r.family, &square));

        let interior = set(&[(0, 0), (10, 0), (5, 10), (5, 3)]);
        assert_eq!(
            max_crossing_family_exact(&interior, &b)
                .unwrap()
                .family
                .len(),
            1
        );
    }

    #[test]
    fn convex_octagon() {
        let s = generate::convex(8, 2, 1 << 20).unwrap();
        let r = max_crossing_family_exact(&s, &OracleBudget::default()).unwrap();
        assert_eq!(r.family.len(), 4);
        assert!(verify_crossing_family(&r.family, &s));
    }

    #[test]
    fn noncrossing_of_size_one() {
        assert!(!exists_noncrossing_of_size_one(&set(&[
            (0, 0),
            (10, 0),
            (10, 10),
            (0, 10)
        ])));
        assert!(exists_noncrossing_of_size_one(&set(&[
            (0, 0),
            (10, 0),
            (10, 10),
            (0, 10),
            (4, 5)
        ])));
        for seed in 0..20 {
            let s = generate::random_disk(8, seed, 1000).unwrap();
            assert_eq!(
                exists_noncrossing_of_size_one(&s),
                !convex_position(s.points()).unwrap()
            );
        }
    }

    #[test]
    fn bipartite_examples() {
        let s = generate::convex(8, 4, 1 << 20).unwrap();
        let hull: Vec<PointId> = crate::geom::convex_hull(s.points())
            .into_iter()
            .map(PointId)
            .collect();
        let (a, b) = hull.split_at(4);
        let r = bipartite_family_exact(&s, a, b, &OracleBudget::default()).unwrap();
        assert_eq!(r.family.len(), 4);
        assert!(verify_crossing_family(&r.family, &s));

        let pair = set(&[(0, 0), (5, 1)]);
        let r = bipartite_family_exact(
            &pair,
            &[PointId(0)],
            &[PointId(1)],
            &OracleBudget::default(),
        )
        .unwrap();
        assert_eq!(r.family.len(), 1);
    }

    /// Largest pairwise crossing subset by enumerating subsets of every size.
    fn subset_oracle(s: &PointSet, segs: &[(PointId, PointId)]) -> usize {
        let cross = |i: usize, j: usize| {
            let ((a, b), (c, d)) = (segs[i], segs[j]);
            segments_cross_pts(s.get(a), s.get(b), s.get(c), s.get(d))
        };
        fn grow(
            chosen: &mut Vec<usize>,
            from: usize,
            n: usize,
            cross: &dyn Fn(usize, usize) -> bool,
        ) -> usize {
            let mut best = chosen.len();
            for v in from..n {
                if chosen.iter().all(|&u| cross(u, v)) {
                    chosen.push(v);
                    best = best.max(grow(chosen, v + 1, n, cross));
                    chosen.pop();
                }
            }
            best
        }
        grow(&mut Vec::new(), 0, segs.len(), &cross)
    }

    #[test]
    fn solvers_agree_with_subset_enumeration() {
        let budget = OracleBudget::default();
        for seed in 0..30 {
            let s = generate::random_disk(10, seed, 1000).unwrap();
            let ids = s.ids();
            let (a, b) = ids.split_at(5);
            let segs = bipartite_segments(a, b);
            let g = crossing_graph(&s, &segs);
            let expected = subset_oracle(&s, &segs);
            assert_eq!(max_clique(&g, &budget).clique.len(), expected);
            assert_eq!(max_clique_plain(&g, &budget).clique.len(), expected);
            assert!(g.greedy_clique().len() <= expected);
        }
    }

    #[test]
    fn node_budget_reports_best_so_far() {
        let s = generate::convex(12, 1, 1 << 20).unwrap();
        let tiny = OracleBudget {
            max_nodes: 3,
            ..OracleBudget::default()
        };
        match max_crossing_family_exact(&s, &tiny) {
            Err(Error::OracleTimeout { best, .. }) => assert!(verify_crossing_family(&best, &s)),
            other => panic!("expected timeout, got {other:?}"),
        }
    }
}
