//! Partition quality measures and per-run result records.

use crate::graph::Graph;
use crate::objective::PartitionSnapshot;
use crate::partition::{Heuristic, PartitionOutcome};
use crate::stream::StreamOrder;

/// Fraction of edges cut. Defined as 0 for edgeless graphs.
pub fn compute_lambda(g: &Graph, snapshot: &PartitionSnapshot) -> f64 {
    debug_assert_eq!(snapshot.m(), g.m());
    if g.m() == 0 {
        0.0
    } else {
        snapshot.cut_edges() as f64 / g.m() as f64
    }
}

/// Largest cluster size over the ideal `n / k`.
pub fn compute_rho(snapshot: &PartitionSnapshot, n: usize, k: usize) -> f64 {
    let max = snapshot.sizes().iter().copied().max().unwrap_or(0);
    (max * k) as f64 / n as f64
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub gamma: f64,
    pub alpha: f64,
    pub nu: f64,
    pub order: Option<StreamOrder>,
    pub heuristic: Option<Heuristic>,
    pub seed: u64,
    pub lambda: f64,
    pub rho: f64,
    pub f_value: f64,
    pub g_value: f64,
    pub runtime_ms: f64,
    pub threshold_violations: usize,
}

impl RunResult {
    pub const CSV_HEADER: [&'static str; 16] = [
        "graph",
        "n",
        "m",
        "k",
        "gamma",
        "alpha",
        "nu",
        "order",
        "heuristic",
        "seed",
        "lambda",
        "rho",
        "f",
        "g",
        "runtime_ms",
        "threshold_violations",
    ];

    pub fn from_outcome(
        graph_id: impl Into<String>,
        g: &Graph,
        order: StreamOrder,
        heuristic: Heuristic,
        seed: u64,
        outcome: &PartitionOutcome,
    ) -> RunResult {
        let mut result = RunResult::from_snapshot(graph_id, g, &outcome.snapshot, &outcome.objective);
        result.order = Some(order);
        result.heuristic = Some(heuristic);
        result.seed = seed;
        result.runtime_ms = outcome.runtime.as_secs_f64() * 1e3;
        result.threshold_violations = outcome.threshold_violations;
        result
    }

    /// Scores a complete assignment from scratch.
    pub fn from_snapshot(
        graph_id: impl Into<String>,
        g: &Graph,
        snapshot: &PartitionSnapshot,
        objective: &crate::ResolvedObjective,
    ) -> RunResult {
        let k = snapshot.k();
        RunResult {
            graph: graph_id.into(),
            n: g.n(),
            m: g.m(),
            k,
            gamma: objective.gamma,
            alpha: objective.alpha,
            nu: objective.nu,
            order: None,
            heuristic: None,
            seed: 0,
            lambda: compute_lambda(g, snapshot),
            rho: compute_rho(snapshot, g.n(), k),
            f_value: objective.eval_f(snapshot).map(|t| t.value()).unwrap_or(f64::NAN),
            g_value: objective.eval_g(snapshot).map(|t| t.value()).unwrap_or(f64::NAN),
            runtime_ms: 0.0,
            threshold_violations: 0,
        }
    }

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.graph.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.k.to_string(),
            self.gamma.to_string(),
            self.alpha.to_string(),
            self.nu.to_string(),
            self.order.map(|o| o.to_string()).unwrap_or_default(),
            self.heuristic.map(|h| h.to_string()).unwrap_or_default(),
            self.seed.to_string(),
            self.lambda.to_string(),
            self.rho.to_string(),
            self.f_value.to_string(),
            self.g_value.to_string(),
            format!("{:.3}", self.runtime_ms),
            self.threshold_violations.to_string(),
        ]
    }
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Summary {
        let values: Vec<f64> = values.into_iter().collect();
        let count = values.len();
        if count == 0 {
            return Summary { count, mean: f64::NAN, std: f64::NAN };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Summary { count, mean, std }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        self.std / (self.count as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate_hp, HpParams};
    use crate::objective::ObjectiveConfig;
    use crate::partition::partition_stream;
    use crate::stream::make_stream;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn lambda_examples() {
        let g = triangle();
        let one = PartitionSnapshot::from_assignment(&g, 2, &[0, 0, 0]).unwrap();
        assert_eq!(compute_lambda(&g, &one), 0.0);
        let split = PartitionSnapshot::from_assignment(&g, 2, &[0, 0, 1]).unwrap();
        assert_eq!(compute_lambda(&g, &split), 2.0 / 3.0);
        let inner: usize = split.internal_edges().iter().sum();
        assert_eq!(split.cut_edges() + inner, g.m());

        let empty = Graph::from_edges(3, []);
        let s = PartitionSnapshot::from_assignment(&empty, 2, &[0, 1, 0]).unwrap();
        assert_eq!(compute_lambda(&empty, &s), 0.0);
    }

    #[test]
    fn rho_examples() {
        let g = Graph::from_edges(4, []);
        let balanced = PartitionSnapshot::from_assignment(&g, 2, &[0, 1, 0, 1]).unwrap();
        assert_eq!(compute_rho(&balanced, 4, 2), 1.0);
        let skewed = PartitionSnapshot::from_assignment(&g, 2, &[0, 0, 0, 1]).unwrap();
        assert_eq!(compute_rho(&skewed, 4, 2), 1.5);
        let collapsed = PartitionSnapshot::from_assignment(&g, 4, &[2, 2, 2, 2]).unwrap();
        assert_eq!(compute_rho(&collapsed, 4, 4), 4.0);
    }

    #[test]
    fn summary_statistics() {
        let s = Summary::of([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(Summary::of([7.0]).std, 0.0);
        assert!(Summary::of([]).mean.is_nan());
    }

    /// Hash over many seeds cuts about 1 - 1/k of the edges.
    #[test]
    fn hash_lambda_concentrates() {
        let g = generate_hp(&HpParams { n: 300, k: 4, p: 0.3, q: 0.1, seed: 1 }).unwrap().graph;
        let plan = make_stream(&g, StreamOrder::Random, 0).unwrap();
        for k in [2usize, 4] {
            let lambdas = (0..60).map(|seed| {
                let out = partition_stream(&g, &plan, k, Heuristic::Hash, &ObjectiveConfig::default(), seed).unwrap();
                let lambda = compute_lambda(&g, &out.snapshot);
                let rho = compute_rho(&out.snapshot, g.n(), k);
                assert!((0.0..=1.0).contains(&lambda));
                assert!((1.0..=k as f64).contains(&rho));
                lambda
            });
            let s = Summary::of(lambdas);
            let target = 1.0 - 1.0 / k as f64;
            assert!((s.mean - target).abs() < 3.0 * s.std_error(), "k={k}: {} vs {target}", s.mean);
        }
    }

    #[test]
    fn csv_record_matches_header() {
        let g = triangle();
        let plan = make_stream(&g, StreamOrder::Bfs, 0).unwrap();
        let out = partition_stream(&g, &plan, 2, Heuristic::Fennel, &ObjectiveConfig::default(), 0).unwrap();
        let r = RunResult::from_outcome("tri", &g, StreamOrder::Bfs, Heuristic::Fennel, 0, &out);
        let record = r.csv_record();
        assert_eq!(record.len(), RunResult::CSV_HEADER.len());
        assert_eq!(record[0], "tri");
        assert_eq!(record[6], "inf");
        assert_eq!(record[7], "bfs");
        assert_eq!(record[8], "fennel");
        assert!((r.f_value + r.g_value - 3.0).abs() < 1e-12);
    }
}
