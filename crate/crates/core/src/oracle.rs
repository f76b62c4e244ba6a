//! Exhaustive optimum of the edge-surplus objective on tiny graphs.
//!
//! Cluster labels are interchangeable, so only canonical labelings are
//! visited: vertex `i` may use a label at most one above the largest label
//! among vertices `0..i` (vertex 0 is pinned to cluster 0). Empty clusters
//! are allowed since `c(0) = 0`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::objective::{ObjectiveConfig, PartitionSnapshot, ResolvedObjective, SizeMode};

/// Refuse instances with more than this many labeled assignments.
pub const MAX_ASSIGNMENTS: f64 = 1e8;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_assignment: Vec<u32>,
    pub best_f: f64,
    pub best_g: f64,
    pub best_g_shifted: f64,
    pub partitions_enumerated: u64,
    pub objective: ResolvedObjective,
}

pub fn brute_force_optimal(g: &Graph, k: usize, config: &ObjectiveConfig) -> Result<OracleResult> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let bound = (k as f64).powi(n as i32);
    if bound > MAX_ASSIGNMENTS {
        return Err(Error::InstanceTooLarge {
            bound,
            limit: MAX_ASSIGNMENTS,
        });
    }
    let objective = config.resolve(g, k)?;
    // neighbors with smaller index, the only ones placed before each vertex
    let earlier: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&u| u as usize).filter(|&u| u < v).collect())
        .collect();
    let mut search = Search {
        objective: &objective,
        earlier: &earlier,
        k,
        assignment: vec![0; n],
        sizes: vec![0; k],
        internal: vec![0; k],
        cut: 0,
        best: f64::INFINITY,
        best_assignment: vec![0; n],
        visited: 0,
    };
    search.descend(0, 0);

    let snapshot = PartitionSnapshot::from_assignment(g, k, &search.best_assignment)?;
    Ok(OracleResult {
        best_f: objective.eval_f(&snapshot)?.value(),
        best_g: objective.eval_g(&snapshot)?.value(),
        best_g_shifted: objective.eval_g_shifted(&snapshot)?,
        best_assignment: search.best_assignment,
        partitions_enumerated: search.visited,
        objective,
    })
}

struct Search<'a> {
    objective: &'a ResolvedObjective,
    earlier: &'a [Vec<usize>],
    k: usize,
    assignment: Vec<u32>,
    sizes: Vec<usize>,
    internal: Vec<usize>,
    cut: usize,
    best: f64,
    best_assignment: Vec<u32>,
    visited: u64,
}

impl Search<'_> {
    /// `used` is the number of distinct labels among vertices `0..v`.
    fn descend(&mut self, v: usize, used: usize) {
        if v == self.assignment.len() {
            self.visited += 1;
            let f = self.value();
            if f < self.best {
                self.best = f;
                self.best_assignment.copy_from_slice(&self.assignment);
            }
            return;
        }
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            let same = self.earlier[v].iter().filter(|&&u| self.assignment[u] as usize == c).count();
            let across = self.earlier[v].len() - same;
            self.assignment[v] = c as u32;
            self.sizes[c] += 1;
            self.internal[c] += same;
            self.cut += across;
            self.descend(v + 1, used.max(c + 1));
            self.sizes[c] -= 1;
            self.internal[c] -= same;
            self.cut -= across;
        }
    }

    fn value(&self) -> f64 {
        let sigma = match self.objective.size_mode {
            SizeMode::VertexCardinality => &self.sizes,
            SizeMode::InteriorEdgeCardinality => &self.internal,
        };
        self.cut as f64 + sigma.iter().map(|&s| self.objective.cost(s as f64)).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(gamma: f64, alpha: f64) -> ObjectiveConfig {
        ObjectiveConfig::default().with_gamma(gamma).with_alpha(alpha)
    }

    /// Plain odometer over all k^n labelings, no symmetry reduction.
    fn naive_best(g: &Graph, k: usize, config: &ObjectiveConfig) -> f64 {
        let o = config.resolve(g, k).unwrap();
        let n = g.n();
        let mut best = f64::INFINITY;
        for mut code in 0..(k as u64).pow(n as u32) {
            let a: Vec<u32> = (0..n)
                .map(|_| {
                    let c = (code % k as u64) as u32;
                    code /= k as u64;
                    c
                })
                .collect();
            let s = PartitionSnapshot::from_assignment(g, k, &a).unwrap();
            best = best.min(o.eval_f(&s).unwrap().value());
        }
        best
    }

    fn stirling2(n: u64, k: u64) -> u64 {
        if n == 0 && k == 0 {
            return 1;
        }
        if n == 0 || k == 0 {
            return 0;
        }
        k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
    }

    #[test]
    fn single_cluster() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        let r = brute_force_optimal(&g, 1, &config(2.0, 1.0)).unwrap();
        assert_eq!(r.best_assignment, vec![0; 4]);
        assert_eq!(r.best_f, 16.0);
        assert_eq!(r.partitions_enumerated, 1);
    }

    /// 4-cycle, k = 2, c(x) = x^2. Splitting into two opposite edges gives
    /// f = 2 + 4 + 4 = 10; a 3+1 split gives 2 + 9 + 1 = 12; one cluster 16;
    /// the alternating split 4 + 4 + 4 = 12. So 10 is optimal.
    #[test]
    fn four_cycle() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let r = brute_force_optimal(&g, 2, &config(2.0, 1.0)).unwrap();
        assert_eq!(r.best_f, 10.0);
        assert_eq!(naive_best(&g, 2, &config(2.0, 1.0)), 10.0);
        let a = &r.best_assignment;
        assert!(a[0] == a[1] && a[2] == a[3] || a[0] == a[3] && a[1] == a[2]);
        assert_eq!(r.best_g, 4.0 - 10.0);
        assert_eq!(r.best_g_shifted, -6.0 + 16.0);
    }

    #[test]
    fn disjoint_triangles_separate() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let r = brute_force_optimal(&g, 2, &config(2.0, 0.1)).unwrap();
        let s = PartitionSnapshot::from_assignment(&g, 2, &r.best_assignment).unwrap();
        assert_eq!(s.cut_edges(), 0);
        assert_eq!(s.sizes(), &[3, 3]);
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        let graphs = [
            Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]),
            Graph::from_edges(6, [(0, 1), (2, 3), (4, 5), (1, 2)]),
            Graph::from_edges(4, []),
        ];
        for g in &graphs {
            for k in 1..=3 {
                for gamma in [1.0, 1.5, 2.0, 3.0] {
                    for alpha in [0.05, 0.4, 1.5] {
                        let c = config(gamma, alpha);
                        let r = brute_force_optimal(g, k, &c).unwrap();
                        assert!((r.best_f - naive_best(g, k, &c)).abs() < 1e-9);
                        assert!((r.best_g - (g.m() as f64 - r.best_f)).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn enumerates_canonical_labelings() {
        let g = Graph::from_edges(7, [(0, 1)]);
        for k in 1..=4 {
            let r = brute_force_optimal(&g, k, &config(1.5, 1.0)).unwrap();
            let expected: u64 = (1..=k as u64).map(|j| stirling2(7, j)).sum();
            assert_eq!(r.partitions_enumerated, expected);
        }
    }

    #[test]
    fn interior_edge_mode() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let c = config(2.0, 1.0).with_size_mode(SizeMode::InteriorEdgeCardinality);
        let r = brute_force_optimal(&g, 2, &c).unwrap();
        assert!((r.best_f - naive_best(&g, 2, &c)).abs() < 1e-12);
        // two opposite edges: cut 2, interior 1 + 1
        assert_eq!(r.best_f, 4.0);
    }

    #[test]
    fn guards_large_instances() {
        let g = Graph::from_edges(14, [(0, 1)]);
        match brute_force_optimal(&g, 4, &config(1.5, 1.0)) {
            Err(Error::InstanceTooLarge { bound, .. }) => assert_eq!(bound, 4f64.powi(14)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(brute_force_optimal(&g, 0, &config(1.5, 1.0)).is_err());
    }
}
