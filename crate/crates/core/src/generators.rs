//! Synthetic graph models.
//!
//! * Hidden partition `HP(n, k, p, q)`: every vertex gets a uniform label in
//!   `0..k`; same-label pairs are joined with probability `p`, other pairs
//!   with probability `q`, all independently.
//! * Chung-Lu `CL(n, slope)`: pair `(i, j)` is joined with probability
//!   `min(1, w_i w_j / W)` for a power-law expected-degree sequence `w`.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeded;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpParams {
    pub n: usize,
    pub k: usize,
    /// Same-cluster edge probability.
    pub p: f64,
    /// Cross-cluster edge probability.
    pub q: f64,
    pub seed: u64,
}

impl HpParams {
    /// `q <= p`: the planted labels are denser inside than across. Other
    /// settings are generated as asked but have no planted structure to
    /// recover.
    pub fn is_assortative(&self) -> bool {
        self.q <= self.p
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        for (name, x) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1], got {x}")));
            }
        }
        Ok(())
    }
}

/// A generated graph together with its planted cluster labels.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: Graph,
    pub labels: Vec<u32>,
}

pub fn generate_hp(params: &HpParams) -> Result<PlantedGraph> {
    params.validate()?;
    let HpParams { n, k, p, q, seed } = *params;
    let mut rng = seeded(seed);
    let labels: Vec<u32> = (0..n).map(|_| rng.random_range(0..k as u32)).collect();

    let pairs = n * (n - 1) / 2;
    let expected = (pairs as f64 * (p / k as f64 + q * (1.0 - 1.0 / k as f64))) as usize;
    let mut edges = Vec::with_capacity(expected + expected / 64);
    for (i, &li) in labels.iter().enumerate() {
        for (j, &lj) in labels.iter().enumerate().skip(i + 1) {
            let prob = if lj == li { p } else { q };
            if rng.random::<f64>() < prob {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Ok(PlantedGraph {
        graph: Graph::from_simple_edges(n, &edges),
        labels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClSampling {
    /// One Bernoulli draw per vertex pair, `O(n^2)`.
    #[default]
    PairLoop,
    /// Geometric skipping over weight-sorted candidates (Miller and
    /// Hagberg), `O(n + m)` expected; same distribution.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClParams {
    pub n: usize,
    /// Power-law exponent of the degree distribution, `> 1`.
    pub slope: f64,
    pub avg_degree: f64,
    pub seed: u64,
    pub sampling: ClSampling,
}

impl ClParams {
    pub fn new(n: usize, slope: f64, seed: u64) -> ClParams {
        ClParams {
            n,
            slope,
            avg_degree: 10.0,
            seed,
            sampling: ClSampling::default(),
        }
    }
}

/// Expected-degree sequence `w_i = scale * (i + offset)^(-1/(slope - 1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawWeights {
    pub weights: Vec<f64>,
    pub offset: f64,
    pub scale: f64,
}

impl PowerLawWeights {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Builds the weight sequence for `CL(n, slope)` with mean `avg_degree`.
///
/// `offset` is the smallest value `>= 1` that keeps the largest weight at
/// most `sqrt(W)`, so no pair probability needs truncation at 1.
pub fn power_law_weights(n: usize, slope: f64, avg_degree: f64) -> Result<PowerLawWeights> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(slope > 1.0 && slope.is_finite()) {
        return Err(Error::invalid(format!("slope must be > 1, got {slope}")));
    }
    if avg_degree.is_nan() || avg_degree <= 0.0 {
        return Err(Error::invalid("average degree must be positive (all-zero weights)"));
    }
    if avg_degree > n as f64 {
        return Err(Error::invalid(format!(
            "average degree {avg_degree} cannot be reached with {n} vertices"
        )));
    }
    let exponent = -1.0 / (slope - 1.0);
    let total = n as f64 * avg_degree;
    let root = total.sqrt();
    let top_weight = |offset: f64| {
        let sum: f64 = (0..n).map(|i| (i as f64 + offset).powf(exponent)).sum();
        total * offset.powf(exponent) / sum
    };
    let offset = if top_weight(1.0) <= root {
        1.0
    } else {
        let (mut lo, mut hi) = (1.0, 2.0);
        while top_weight(hi) > root {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if top_weight(mid) > root {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let raw: Vec<f64> = (0..n).map(|i| (i as f64 + offset).powf(exponent)).collect();
    let scale = total / raw.iter().sum::<f64>();
    Ok(PowerLawWeights {
        weights: raw.into_iter().map(|x| x * scale).collect(),
        offset,
        scale,
    })
}

#[derive(Debug, Clone)]
pub struct ClGraph {
    pub graph: Graph,
    pub weights: PowerLawWeights,
}

pub fn generate_cl(params: &ClParams) -> Result<ClGraph> {
    let weights = power_law_weights(params.n, params.slope, params.avg_degree)?;
    let graph = chung_lu(&weights.weights, params.seed, params.sampling)?;
    Ok(ClGraph { graph, weights })
}

/// Chung-Lu sampling for an arbitrary nonnegative weight sequence.
/// [`ClSampling::Skip`] requires nonincreasing weights.
pub fn chung_lu(weights: &[f64], seed: u64, sampling: ClSampling) -> Result<Graph> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::invalid("weights must be finite and nonnegative"));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("degenerate weight sequence (all zero)"));
    }
    let mut rng = seeded(seed);
    let prob = |i: usize, j: usize| (weights[i] * weights[j] / total).min(1.0);
    let mut edges = Vec::with_capacity(total as usize / 2 + 16);
    match sampling {
        ClSampling::PairLoop => {
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < prob(i, j) {
                        edges.push((i as u32, j as u32));
                    }
                }
            }
        }
        ClSampling::Skip => {
            if weights.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::invalid("skip sampling needs nonincreasing weights"));
            }
            for u in 0..n.saturating_sub(1) {
                let mut v = u + 1;
                let mut p = prob(u, v);
                while v < n && p > 0.0 {
                    if p < 1.0 {
                        let r: f64 = rng.random();
                        // geometric jump over candidates that share bound p
                        let skip = ((1.0 - r).ln() / (1.0 - p).ln()).floor();
                        if skip >= (n - v) as f64 {
                            break;
                        }
                        v += skip as usize;
                    }
                    if v >= n {
                        break;
                    }
                    let q = prob(u, v);
                    if rng.random::<f64>() < q / p {
                        edges.push((u as u32, v as u32));
                    }
                    p = q;
                    v += 1;
                }
            }
        }
    }
    Ok(Graph::from_simple_edges(n, &edges))
}
