//! Semidefinite relaxation of quasi-clique partitioning and hyperplane
//! rounding.
//!
//! The integer program scores a partition by the number of edges kept
//! inside clusters plus `alpha` for every vertex pair that is split. Writing
//! `y_ij = 1` for same-cluster pairs, the relaxation maximizes
//!
//! ```text
//! sum_{(i,j) in E} y_ij + alpha * sum_{i<j} (1 - y_ij)
//! ```
//!
//! over Gram matrices `Y` (PSD, unit diagonal, nonnegative entries). Rounding
//! cuts the Gram vectors with `t = log2 k` random hyperplanes and reads each
//! vertex's cluster off its sign pattern.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng as _, SeedableRng};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::Rng;

/// Largest vertex count accepted by [`solve_sdp`].
pub const MAX_SDP_VERTICES: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    n: usize,
    edges: Vec<(usize, usize)>,
    alpha: f64,
    adjacency: Vec<bool>,
}

impl SdpProblem {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, alpha: f64) -> Result<SdpProblem> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        let mut adjacency = vec![false; n * n];
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v || adjacency[u * n + v] {
                continue;
            }
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        Ok(SdpProblem {
            n,
            edges: list,
            alpha,
            adjacency,
        })
    }

    pub fn from_graph(g: &Graph, alpha: f64) -> Result<SdpProblem> {
        SdpProblem::new(g.n(), g.edges(), alpha)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn pairs(&self) -> f64 {
        (self.n * (self.n - 1) / 2) as f64
    }

    /// Relaxed objective of a Gram matrix.
    pub fn gram_value(&self, gram: &DMatrix<f64>) -> f64 {
        let mut value = self.alpha * self.pairs();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let a = if self.adjacency[i * self.n + j] { 1.0 } else { 0.0 };
                value += (a - self.alpha) * gram[(i, j)];
            }
        }
        value
    }

    /// Integer objective of a labeled partition: edges kept inside clusters
    /// plus `alpha` per split pair.
    pub fn partition_value(&self, assignment: &[u32]) -> f64 {
        debug_assert_eq!(assignment.len(), self.n);
        let kept = self.edges.iter().filter(|&&(u, v)| assignment[u] == assignment[v]).count();
        let mut split = 0usize;
        for i in 0..self.n {
            split += assignment[i + 1..].iter().filter(|&&c| c != assignment[i]).count();
        }
        kept as f64 + self.alpha * split as f64
    }

    /// Objective coefficients, halved so that `<C, Y>` counts each pair once.
    fn cost_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                0.0
            } else if self.adjacency[i * self.n + j] {
                0.5 * (1.0 - self.alpha)
            } else {
                -0.5 * self.alpha
            }
        })
    }
}

/// Unit vectors whose inner products approximate an optimal `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSolution {
    /// One row per vertex.
    pub vectors: DMatrix<f64>,
    pub sdp_value: f64,
    /// Largest violation among unit norm, nonnegativity and the gap between
    /// the PSD and box iterates.
    pub feasibility_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl GramSolution {
    /// Wraps explicit vectors (normalized here) and scores them.
    pub fn from_vectors(problem: &SdpProblem, vectors: DMatrix<f64>) -> Result<GramSolution> {
        if vectors.nrows() != problem.n() {
            return Err(Error::invalid(format!(
                "expected {} vectors, got {}",
                problem.n(),
                vectors.nrows()
            )));
        }
        let vectors = normalize_rows(vectors)?;
        let gram = &vectors * vectors.transpose();
        let residual = box_violation(&gram);
        Ok(GramSolution {
            sdp_value: problem.gram_value(&gram),
            vectors,
            feasibility_residual: residual,
            iterations: 0,
            converged: true,
        })
    }

    pub fn gram(&self) -> DMatrix<f64> {
        &self.vectors * self.vectors.transpose()
    }
}

fn normalize_rows(mut vectors: DMatrix<f64>) -> Result<DMatrix<f64>> {
    for mut row in vectors.row_iter_mut() {
        let norm = row.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid("zero or non-finite Gram vector"));
        }
        row /= norm;
    }
    Ok(vectors)
}

fn box_violation(gram: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..gram.nrows() {
        worst = worst.max((gram[(i, i)] - 1.0).abs());
        for j in 0..i {
            worst = worst.max(-gram[(i, j)]);
        }
    }
    worst
}

fn project_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let clamped = eig.eigenvalues.map(|x| x.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&clamped) * eig.eigenvectors.transpose()
}

fn project_box(m: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| if i == j { 1.0 } else { m[(i, j)].max(0.0) })
}

/// Solves the relaxation by ADMM, splitting the PSD cone from the
/// unit-diagonal nonnegative box. Stops when both residuals fall below
/// `tol`; otherwise returns the last iterate with `converged = false`.
pub fn solve_sdp(problem: &SdpProblem, tol: f64, max_iters: usize) -> Result<GramSolution> {
    let n = problem.n();
    if n > MAX_SDP_VERTICES {
        return Err(Error::InstanceTooLarge {
            bound: n as f64,
            limit: MAX_SDP_VERTICES as f64,
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let cost = problem.cost_matrix();
    let mut step = 1.0;
    let mut z = DMatrix::<f64>::identity(n, n);
    let mut u = DMatrix::<f64>::zeros(n, n);
    let mut y = z.clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        y = project_psd(&(&z - &u + &cost / step));
        let z_prev = std::mem::replace(&mut z, project_box(&(&y + &u)));
        u += &y - &z;

        let primal = (&y - &z).norm();
        let dual = step * (&z - &z_prev).norm();
        let scale = (n as f64).max(1.0);
        if primal <= tol * scale && dual <= tol * scale {
            converged = true;
            break;
        }
        // residual balancing; the scaled dual variable moves with the step
        if primal > 10.0 * dual {
            step *= 2.0;
            u /= 2.0;
        } else if dual > 10.0 * primal {
            step /= 2.0;
            u *= 2.0;
        }
    }

    let eig = SymmetricEigen::new((&y + y.transpose()) * 0.5);
    let roots = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    let vectors = normalize_rows(&eig.eigenvectors * DMatrix::from_diagonal(&roots))?;
    let gram = &vectors * vectors.transpose();
    Ok(GramSolution {
        sdp_value: problem.gram_value(&gram),
        feasibility_residual: box_violation(&gram).max((&y - &z).amax()),
        vectors,
        iterations,
        converged,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingOutcome {
    pub partitions: Vec<Vec<u32>>,
    /// Integer objective of each trial's partition.
    pub values: Vec<f64>,
    pub mean: f64,
    pub std_error: f64,
}

impl RoundingOutcome {
    pub fn best(&self) -> Option<(&[u32], f64)> {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, &v)| (self.partitions[i].as_slice(), v))
    }
}

/// Number of hyperplanes for `k` clusters; `k` must be a power of two.
pub fn hyperplane_count(k: usize) -> Result<u32> {
    if k < 2 || !k.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(k));
    }
    Ok(k.trailing_zeros())
}

/// Labels every vertex by the sign pattern of its vector against `t`
/// Gaussian directions: bit `j` is set when the `j`-th product is negative.
pub fn round_once(vectors: &DMatrix<f64>, hyperplanes: u32, rng: &mut Rng) -> Vec<u32> {
    let dim = vectors.ncols();
    let normals: Vec<Vec<f64>> = (0..hyperplanes)
        .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    vectors
        .row_iter()
        .map(|row| {
            normals.iter().enumerate().fold(0u32, |label, (bit, r)| {
                let dot: f64 = row.iter().zip(r).map(|(a, b)| a * b).sum();
                if dot < 0.0 {
                    label | (1 << bit)
                } else {
                    label
                }
            })
        })
        .collect()
}

/// Runs `trials` independent roundings. Trial `i` draws from stream `i` of
/// the generator seeded with `seed`, so any trial can be replayed alone.
pub fn round_hyperplanes(
    problem: &SdpProblem,
    solution: &GramSolution,
    k: usize,
    seed: u64,
    trials: usize,
) -> Result<RoundingOutcome> {
    let hyperplanes = hyperplane_count(k)?;
    if solution.vectors.nrows() != problem.n() {
        return Err(Error::invalid("solution does not match the problem size"));
    }
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let mut partitions = Vec::with_capacity(trials);
    let mut values = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let labels = round_once(&solution.vectors, hyperplanes, &mut rng);
        values.push(problem.partition_value(&labels));
        partitions.push(labels);
    }
    let summary = crate::Summary::of(values.iter().copied());
    Ok(RoundingOutcome {
        partitions,
        values,
        mean: summary.mean,
        std_error: if trials > 1 { summary.std_error() } else { 0.0 },
    })
}

/// Guaranteed fraction of the relaxation value that rounding achieves in
/// expectation: `min(log2(k) / (pi * k), 1/2)`.
pub fn approximation_ratio_bound(k: usize) -> f64 {
    let k = k as f64;
    (k.ln() / (std::f64::consts::PI * std::f64::consts::LN_2 * k)).min(0.5)
}
