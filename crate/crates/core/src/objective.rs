//! The edge-surplus objective and its incremental bookkeeping.
//!
//! For a partition `P = (S_1, .., S_k)` of a graph with `m` edges:
//!
//! * `f(P) = |cut(P)| + sum_i c(sigma(S_i))` is minimized,
//! * `g(P) = sum_i [e(S_i, S_i) - c(sigma(S_i))] = m - f(P)` is maximized,
//! * `g~(P) = g(P) + c(sigma(V))` is the shifted, nonnegative form,
//!
//! where `c(x) = alpha * x^gamma` and `sigma` is either the vertex count of a
//! cluster or its number of interior edges. With `gamma = 2` the shifted
//! objective equals `sum_i e(S_i, S_i) + 2 alpha * #(vertex pairs split by P)`,
//! the integer program behind the semidefinite relaxation in [`crate::sdp`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SizeMode {
    /// `sigma(S) = |S|`.
    #[default]
    VertexCardinality,
    /// `sigma(S) = e(S, S)`: balances the number of interior edges instead.
    InteriorEdgeCardinality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MarginalMode {
    /// `c(x + 1) - c(x)`.
    DiscreteDifference,
    /// `c'(x) = alpha * gamma * x^(gamma - 1)`.
    #[default]
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    /// `m * k^(gamma - 1) / n^gamma`, see [`resolve_alpha`].
    Auto,
    Fixed(f64),
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Auto => f.write_str("auto"),
            Alpha::Fixed(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Alpha::Auto);
        }
        match s.parse::<f64>() {
            Ok(a) if a > 0.0 && a.is_finite() => Ok(Alpha::Fixed(a)),
            _ => Err(Error::invalid(format!("alpha must be \"auto\" or a positive number, got {s:?}"))),
        }
    }
}

impl FromStr for SizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vertex" | "vertices" => Ok(SizeMode::VertexCardinality),
            "edge" | "edges" | "interior-edges" => Ok(SizeMode::InteriorEdgeCardinality),
            _ => Err(Error::invalid(format!("unknown size mode {s:?} (vertex|edge)"))),
        }
    }
}

impl FromStr for MarginalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "derivative" => Ok(MarginalMode::Derivative),
            "discrete" | "difference" => Ok(MarginalMode::DiscreteDifference),
            _ => Err(Error::invalid(format!("unknown marginal mode {s:?} (derivative|discrete)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveConfig {
    pub gamma: f64,
    pub alpha: Alpha,
    /// Load threshold factor; clusters holding more than `nu * n / k`
    /// vertices stop accepting. `f64::INFINITY` disables the threshold.
    pub nu: f64,
    pub size_mode: SizeMode,
    pub marginal_mode: MarginalMode,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        ObjectiveConfig {
            gamma: 1.5,
            alpha: Alpha::Auto,
            nu: f64::INFINITY,
            size_mode: SizeMode::default(),
            marginal_mode: MarginalMode::default(),
        }
    }
}

impl ObjectiveConfig {
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Alpha::Fixed(alpha);
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_marginal_mode(mut self, mode: MarginalMode) -> Self {
        self.marginal_mode = mode;
        self
    }

    pub fn with_size_mode(mut self, mode: SizeMode) -> Self {
        self.size_mode = mode;
        self
    }

    /// Quadratic cost whose shifted objective is the semidefinite program's
    /// integer objective `sum_E [same cluster] + pair_weight * sum_{i<j} [split]`.
    pub fn quasi_clique(pair_weight: f64) -> Self {
        ObjectiveConfig::default()
            .with_gamma(2.0)
            .with_alpha(pair_weight / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(format!("gamma must be >= 1, got {}", self.gamma)));
        }
        if let Alpha::Fixed(a) = self.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::invalid(format!("alpha must be positive, got {a}")));
            }
        }
        if self.nu.is_nan() || self.nu < 1.0 {
            return Err(Error::invalid(format!("nu must be >= 1, got {}", self.nu)));
        }
        Ok(())
    }

    pub fn resolve(&self, g: &Graph, k: usize) -> Result<ResolvedObjective> {
        self.resolve_for(g.n(), g.m(), k)
    }

    pub fn resolve_for(&self, n: usize, m: usize, k: usize) -> Result<ResolvedObjective> {
        self.validate()?;
        let alpha = match self.alpha {
            Alpha::Fixed(a) => a,
            Alpha::Auto => alpha_for(n, m, k, self.gamma)?,
        };
        Ok(ResolvedObjective {
            gamma: self.gamma,
            alpha,
            nu: self.nu,
            size_mode: self.size_mode,
            marginal_mode: self.marginal_mode,
        })
    }
}

/// `alpha = m * k^(gamma - 1) / n^gamma`, which makes the objective
/// equivalent to `cut / m + (1/k) * sum_i (|S_i| / (n/k))^gamma`.
pub fn resolve_alpha(g: &Graph, k: usize, gamma: f64) -> Result<f64> {
    alpha_for(g.n(), g.m(), k, gamma)
}

pub fn alpha_for(n: usize, m: usize, k: usize, gamma: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    // Edgeless graphs are scored as if m = 1; any positive alpha ranks their
    // partitions the same way.
    let m = m.max(1) as f64;
    Ok(m * (k as f64).powf(gamma - 1.0) / (n as f64).powf(gamma))
}

/// Objective configuration with `alpha` fixed to a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedObjective {
    pub gamma: f64,
    pub alpha: f64,
    pub nu: f64,
    pub size_mode: SizeMode,
    pub marginal_mode: MarginalMode,
}

/// An objective value split into its exact integer edge part and its real
/// cost part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveTerms {
    pub edges: i64,
    pub cost: f64,
}

impl ObjectiveTerms {
    pub fn value(&self) -> f64 {
        self.edges as f64 + self.cost
    }
}

impl ResolvedObjective {
    pub fn cost(&self, x: f64) -> f64 {
        self.alpha * x.powf(self.gamma)
    }

    /// Price of growing a cluster of size `x` by one.
    pub fn marginal_cost(&self, x: usize) -> f64 {
        let x = x as f64;
        match self.marginal_mode {
            MarginalMode::DiscreteDifference => self.alpha * ((x + 1.0).powf(self.gamma) - x.powf(self.gamma)),
            MarginalMode::Derivative => self.alpha * self.gamma * x.powf(self.gamma - 1.0),
        }
    }

    /// Change of `g` when the vertex joins `cluster`, given how many of its
    /// neighbors already sit there. Edges to unassigned neighbors do not
    /// count yet.
    pub fn delta_g(&self, snapshot: &PartitionSnapshot, cluster: usize, neighbors_in_cluster: usize) -> f64 {
        let a = neighbors_in_cluster as f64;
        match self.size_mode {
            SizeMode::VertexCardinality => a - self.marginal_cost(snapshot.sizes[cluster]),
            SizeMode::InteriorEdgeCardinality => {
                let e = snapshot.internal[cluster] as f64;
                a - (self.cost(e + a) - self.cost(e))
            }
        }
    }

    fn sigma(&self, snapshot: &PartitionSnapshot, cluster: usize) -> usize {
        match self.size_mode {
            SizeMode::VertexCardinality => snapshot.sizes[cluster],
            SizeMode::InteriorEdgeCardinality => snapshot.internal[cluster],
        }
    }

    fn total_cost(&self, snapshot: &PartitionSnapshot) -> f64 {
        (0..snapshot.k())
            .map(|i| self.cost(self.sigma(snapshot, i) as f64))
            .sum()
    }

    pub fn eval_f(&self, snapshot: &PartitionSnapshot) -> Result<ObjectiveTerms> {
        snapshot.require_complete()?;
        Ok(ObjectiveTerms {
            edges: snapshot.cut as i64,
            cost: self.total_cost(snapshot),
        })
    }

    pub fn eval_g(&self, snapshot: &PartitionSnapshot) -> Result<ObjectiveTerms> {
        snapshot.require_complete()?;
        Ok(ObjectiveTerms {
            edges: snapshot.internal.iter().sum::<usize>() as i64,
            cost: -self.total_cost(snapshot),
        })
    }

    /// `c(sigma(V))`: the largest value `sum_i c(sigma(S_i))` can take, since
    /// `sum_i s_i^gamma <= (sum_i s_i)^gamma` for `gamma >= 1`.
    pub fn shift(&self, snapshot: &PartitionSnapshot) -> f64 {
        let total = match self.size_mode {
            SizeMode::VertexCardinality => snapshot.n(),
            SizeMode::InteriorEdgeCardinality => snapshot.m,
        };
        self.cost(total as f64)
    }

    /// `g + c(sigma(V))`, with the cost terms combined before scaling by
    /// `alpha` so the result is exact whenever the powers are.
    pub fn eval_g_shifted(&self, snapshot: &PartitionSnapshot) -> Result<f64> {
        let inner = self.eval_g(snapshot)?.edges as f64;
        let total = match self.size_mode {
            SizeMode::VertexCardinality => snapshot.n(),
            SizeMode::InteriorEdgeCardinality => snapshot.m,
        };
        let parts: f64 = (0..snapshot.k())
            .map(|i| (self.sigma(snapshot, i) as f64).powf(self.gamma))
            .sum();
        Ok(inner + self.alpha * ((total as f64).powf(self.gamma) - parts))
    }
}

/// `sum_i [e(S_i, S_i) - p * C(|S_i|, 2)]`.
///
/// For `c(x) = alpha * x^2` this differs from `g` by the constant
/// `alpha * n`, with `p = 2 * alpha`.
pub fn eval_modularity_form(snapshot: &PartitionSnapshot, p: f64) -> Result<f64> {
    snapshot.require_complete()?;
    Ok((0..snapshot.k())
        .map(|i| {
            let s = snapshot.sizes[i] as f64;
            snapshot.internal[i] as f64 - p * s * (s - 1.0) / 2.0
        })
        .sum())
}

pub const UNASSIGNED: u32 = u32::MAX;

/// Assignment of vertices to `k` clusters with incrementally maintained
/// cluster sizes, interior edge counts and cut size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSnapshot {
    assignment: Vec<u32>,
    sizes: Vec<usize>,
    internal: Vec<usize>,
    cut: usize,
    assigned: usize,
    m: usize,
}

impl PartitionSnapshot {
    pub fn new(g: &Graph, k: usize) -> PartitionSnapshot {
        PartitionSnapshot {
            assignment: vec![UNASSIGNED; g.n()],
            sizes: vec![0; k],
            internal: vec![0; k],
            cut: 0,
            assigned: 0,
            m: g.m(),
        }
    }

    /// Builds a snapshot from a complete assignment, counting from scratch.
    pub fn from_assignment(g: &Graph, k: usize, assignment: &[u32]) -> Result<PartitionSnapshot> {
        if assignment.len() != g.n() {
            return Err(Error::invalid(format!(
                "assignment covers {} vertices, graph has {}",
                assignment.len(),
                g.n()
            )));
        }
        if let Some((v, &c)) = assignment.iter().enumerate().find(|&(_, &c)| c as usize >= k) {
            return Err(Error::invalid(format!("vertex {v} assigned to cluster {c}, k = {k}")));
        }
        let mut snapshot = PartitionSnapshot::new(g, k);
        for (v, &c) in assignment.iter().enumerate() {
            snapshot.assignment[v] = c;
            snapshot.sizes[c as usize] += 1;
        }
        for (u, v) in g.edges() {
            if assignment[u] == assignment[v] {
                snapshot.internal[assignment[u] as usize] += 1;
            } else {
                snapshot.cut += 1;
            }
        }
        snapshot.assigned = g.n();
        Ok(snapshot)
    }

    /// Places `v` into `cluster`, scanning its neighbors to update the edge
    /// counters. Panics if `v` is already assigned or `cluster >= k`.
    pub fn assign(&mut self, g: &Graph, v: usize, cluster: usize) {
        let mut same = 0;
        let mut assigned = 0;
        for &u in g.neighbors(v) {
            let c = self.assignment[u as usize];
            if c != UNASSIGNED {
                assigned += 1;
                same += usize::from(c as usize == cluster);
            }
        }
        self.place(v, cluster, same, assigned);
    }

    /// Counter update once the caller has counted `v`'s assigned neighbors.
    pub(crate) fn place(&mut self, v: usize, cluster: usize, same_cluster: usize, assigned_neighbors: usize) {
        assert_eq!(self.assignment[v], UNASSIGNED, "vertex {v} is already assigned");
        assert!(cluster < self.k(), "cluster {cluster} out of range");
        self.assignment[v] = cluster as u32;
        self.sizes[cluster] += 1;
        self.internal[cluster] += same_cluster;
        self.cut += assigned_neighbors - same_cluster;
        self.assigned += 1;
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Edge count of the underlying graph.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cluster_of(&self, v: usize) -> Option<usize> {
        match self.assignment[v] {
            UNASSIGNED => None,
            c => Some(c as usize),
        }
    }

    /// Raw assignment, [`UNASSIGNED`] for vertices not yet placed.
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn internal_edges(&self) -> &[usize] {
        &self.internal
    }

    pub fn cut_edges(&self) -> usize {
        self.cut
    }

    pub fn assigned(&self) -> usize {
        self.assigned
    }

    pub fn is_complete(&self) -> bool {
        self.assigned == self.n()
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::Unassigned {
                unassigned: self.n() - self.assigned,
            })
        }
    }
}
