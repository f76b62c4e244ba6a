//! Vertex arrival orders.
//!
//! Traversals start from a uniformly random vertex, visit neighbors in
//! ascending index order and restart from a uniformly random unvisited
//! vertex when a component is exhausted.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::{seeded, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamOrder {
    Random,
    Bfs,
    Dfs,
}

impl StreamOrder {
    pub const ALL: [StreamOrder; 3] = [StreamOrder::Random, StreamOrder::Bfs, StreamOrder::Dfs];

    pub fn name(self) -> &'static str {
        match self {
            StreamOrder::Random => "random",
            StreamOrder::Bfs => "bfs",
            StreamOrder::Dfs => "dfs",
        }
    }
}

impl fmt::Display for StreamOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StreamOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StreamOrder::ALL
            .into_iter()
            .find(|o| o.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown stream order {s:?} (random|bfs|dfs)")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamPlan {
    pub order: StreamOrder,
    pub seed: u64,
    pub sequence: Vec<u32>,
}

impl StreamPlan {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

pub fn make_stream(g: &Graph, order: StreamOrder, seed: u64) -> Result<StreamPlan> {
    build(g, order, seed, None)
}

/// Like [`make_stream`] but with the first traversal root fixed. Restarts
/// after the first component are still drawn from the seeded generator.
/// For `Random` the start is ignored.
pub fn make_stream_from(g: &Graph, order: StreamOrder, seed: u64, start: usize) -> Result<StreamPlan> {
    g.try_degree(start)?;
    build(g, order, seed, Some(start))
}

fn build(g: &Graph, order: StreamOrder, seed: u64, start: Option<usize>) -> Result<StreamPlan> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = seeded(seed);
    let sequence = match order {
        StreamOrder::Random => {
            let mut seq: Vec<u32> = (0..n as u32).collect();
            seq.shuffle(&mut rng);
            seq
        }
        StreamOrder::Bfs | StreamOrder::Dfs => traverse(g, order == StreamOrder::Dfs, start, &mut rng),
    };
    Ok(StreamPlan { order, seed, sequence })
}

fn traverse(g: &Graph, depth_first: bool, start: Option<usize>, rng: &mut Rng) -> Vec<u32> {
    let n = g.n();
    let mut visited = vec![false; n];
    let mut sequence = Vec::with_capacity(n);
    // Unvisited vertices, kept for uniform restarts: `pool[..live]` holds
    // candidates, visited ones are swapped out lazily.
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut live = n;
    let mut next_root = start;
    while sequence.len() < n {
        let root = match next_root.take() {
            Some(r) => r,
            None => loop {
                let i = rng.random_range(0..live);
                let candidate = pool[i] as usize;
                if !visited[candidate] {
                    break candidate;
                }
                live -= 1;
                pool.swap(i, live);
            },
        };
        if depth_first {
            dfs(g, root, &mut visited, &mut sequence);
        } else {
            bfs(g, root, &mut visited, &mut sequence);
        }
    }
    sequence
}

fn bfs(g: &Graph, root: usize, visited: &mut [bool], sequence: &mut Vec<u32>) {
    let mut queue = VecDeque::from([root]);
    visited[root] = true;
    while let Some(u) = queue.pop_front() {
        sequence.push(u as u32);
        for &w in g.neighbors(u) {
            if !visited[w as usize] {
                visited[w as usize] = true;
                queue.push_back(w as usize);
            }
        }
    }
}

/// Preorder DFS with an explicit stack of (vertex, next neighbor position).
fn dfs(g: &Graph, root: usize, visited: &mut [bool], sequence: &mut Vec<u32>) {
    let mut stack = vec![(root, 0usize)];
    visited[root] = true;
    sequence.push(root as u32);
    while let Some((u, pos)) = stack.last_mut() {
        let adj = g.neighbors(*u);
        match adj[*pos..].iter().position(|&w| !visited[w as usize]) {
            Some(offset) => {
                let w = adj[*pos + offset] as usize;
                *pos += offset + 1;
                visited[w] = true;
                sequence.push(w as u32);
                stack.push((w, 0));
            }
            None => {
                stack.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)])
    }

    #[test]
    fn bfs_from_middle_of_path() {
        let plan = make_stream_from(&path3(), StreamOrder::Bfs, 0, 1).unwrap();
        assert_eq!(plan.sequence, vec![1, 0, 2]);
    }

    #[test]
    fn dfs_differs_from_bfs() {
        // 0 - 1 - 3, 0 - 2
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 3)]);
        assert_eq!(make_stream_from(&g, StreamOrder::Bfs, 0, 0).unwrap().sequence, [0, 1, 2, 3]);
        assert_eq!(make_stream_from(&g, StreamOrder::Dfs, 0, 0).unwrap().sequence, [0, 1, 3, 2]);
    }

    #[test]
    fn random_order_is_deterministic() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let a = make_stream(&g, StreamOrder::Random, 17).unwrap();
        let b = make_stream(&g, StreamOrder::Random, 17).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn restarts_cover_disconnected_graphs() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        for order in [StreamOrder::Bfs, StreamOrder::Dfs] {
            for seed in 0..20 {
                let seq = make_stream(&g, order, seed).unwrap().sequence;
                let mut sorted = seq.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, [0, 1, 2, 3]);
                // each component is emitted contiguously
                assert_eq!(seq[0] / 2, seq[1] / 2);
                assert_eq!(seq[2] / 2, seq[3] / 2);
            }
        }
    }

    #[test]
    fn long_chain_dfs_does_not_recurse() {
        let n = 200_000;
        let g = Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)));
        let plan = make_stream_from(&g, StreamOrder::Dfs, 1, 0).unwrap();
        assert!(plan.sequence.iter().enumerate().all(|(i, &v)| v as usize == i));
    }

    #[test]
    fn bad_start_is_rejected() {
        assert!(make_stream_from(&path3(), StreamOrder::Bfs, 0, 3).is_err());
    }

    /// Union-find over the prefix: every BFS/DFS prefix of a connected graph
    /// stays connected.
    fn prefixes_connected(g: &Graph, seq: &[u32]) -> bool {
        let n = g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut seen = vec![false; n];
        let mut components = 0usize;
        for &v in seq {
            let v = v as usize;
            seen[v] = true;
            components += 1;
            for &u in g.neighbors(v) {
                if seen[u as usize] {
                    let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v));
                    if a != b {
                        parent[a] = b;
                        components -= 1;
                    }
                }
            }
            if components != 1 {
                return false;
            }
        }
        true
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..max_n).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |e| Graph::from_edges(n, e))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn every_order_is_a_permutation(g in arb_graph(300), seed in any::<u64>()) {
            for order in StreamOrder::ALL {
                let mut seq = make_stream(&g, order, seed).unwrap().sequence;
                seq.sort_unstable();
                prop_assert!(seq.iter().enumerate().all(|(i, &v)| v as usize == i));
            }
        }

        #[test]
        fn traversal_prefixes_stay_connected(g in arb_graph(120), seed in any::<u64>()) {
            let g = g.largest_connected_component();
            for order in [StreamOrder::Bfs, StreamOrder::Dfs] {
                let seq = make_stream(&g, order, seed).unwrap().sequence;
                prop_assert!(prefixes_connected(&g, &seq));
            }
        }
    }

    #[test]
    fn permutation_at_ten_thousand_vertices() {
        let n = 10_000;
        let g = Graph::from_edges(n, (0..n).map(|i| (i, (i * 7 + 3) % n)));
        for order in StreamOrder::ALL {
            let mut seq = make_stream(&g, order, 5).unwrap().sequence;
            seq.sort_unstable();
            assert!(seq.iter().enumerate().all(|(i, &v)| v as usize == i));
        }
    }
}
