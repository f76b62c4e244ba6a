//! One-pass streaming graph partitioning.
//!
//! The crate implements the edge-surplus partitioning objective
//! `f(P) = |cut(P)| + sum_i c(|S_i|)` with `c(x) = alpha * x^gamma`, the
//! greedy streaming assignment that maximizes the marginal gain of the
//! equivalent maximization `g(P) = m - f(P)`, the usual streaming baselines
//! (hash, balanced, deterministic greedy and its weighted variants, triangle
//! heuristics, non-neighbors), synthetic graph models, evaluation metrics,
//! an exhaustive oracle for tiny instances and a small semidefinite
//! relaxation with random-hyperplane rounding.

pub mod error;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod objective;
pub mod oracle;
pub mod partition;
pub mod sdp;
pub mod stream;

pub use error::{Error, Result};
pub use generators::{
    chung_lu, generate_cl, generate_hp, power_law_weights, ClGraph, ClParams, ClSampling, HpParams,
    PlantedGraph, PowerLawWeights,
};
pub use graph::{load_edge_list, parse_edge_list, Graph, LoadOptions};
pub use metrics::{compute_lambda, compute_rho, RunResult, Summary};
pub use objective::{
    Alpha, MarginalMode, ObjectiveConfig, ObjectiveTerms, PartitionSnapshot, ResolvedObjective,
    SizeMode,
};
pub use oracle::{brute_force_optimal, OracleResult};
pub use partition::{partition_stream, partition_stream_with, Heuristic, PartitionOutcome, Partitioner, TiePolicy};
pub use sdp::{
    approximation_ratio_bound, round_hyperplanes, solve_sdp, GramSolution, RoundingOutcome, SdpProblem,
};
pub use stream::{make_stream, StreamOrder, StreamPlan};

/// Seeded generator used for every random choice in the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

pub(crate) fn seeded(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
