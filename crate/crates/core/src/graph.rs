//! Immutable undirected simple graphs in compressed adjacency form, plus
//! edge-list ingestion.
//!
//! Input files are whitespace-separated `u v` pairs, one per line. Lines
//! starting with `#` are comments and any columns after the second (signs,
//! weights, timestamps) are ignored. Labels are arbitrary nonnegative
//! integers; they are remapped to dense indices in ascending label order and
//! the mapping is kept so results can be reported in the original labels.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Keep only the largest connected component.
    pub lcc: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { lcc: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph on vertices `0..n` from arbitrary (possibly directed,
    /// repeated or looping) edges. Labels are the indices themselves.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        assert!(n <= u32::MAX as usize, "vertex count exceeds u32 range");
        let pairs: Vec<(u32, u32)> = edges
            .into_iter()
            .map(|(u, v)| {
                assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
                (u as u32, v as u32)
            })
            .collect();
        Self::build(n, &pairs, (0..n as u64).collect(), true)
    }

    /// Builds a graph from edges that are already simple: `u < v` and no
    /// pair repeats. Skips the dedup pass, which matters for the dense
    /// generators.
    pub(crate) fn from_simple_edges(n: usize, pairs: &[(u32, u32)]) -> Graph {
        debug_assert!(pairs.iter().all(|&(u, v)| u < v));
        Self::build(n, pairs, (0..n as u64).collect(), false)
    }

    /// Builds a graph from edges between arbitrary labels, remapping them to
    /// dense indices in ascending label order. Self loops are dropped and do
    /// not introduce vertices on their own.
    pub fn from_labeled_edges(edges: &[(u64, u64)]) -> Graph {
        let mut labels: Vec<u64> = edges
            .iter()
            .filter(|(u, v)| u != v)
            .flat_map(|&(u, v)| [u, v])
            .collect();
        labels.sort_unstable();
        labels.dedup();
        let index = |label: u64| labels.binary_search(&label).unwrap() as u32;
        let pairs: Vec<(u32, u32)> = edges
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| (index(u), index(v)))
            .collect();
        let n = labels.len();
        Self::build(n, &pairs, labels, true)
    }

    fn build(n: usize, pairs: &[(u32, u32)], labels: Vec<u64>, dedup: bool) -> Graph {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            if u != v {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in pairs {
            if u != v {
                targets[cursor[u as usize]] = v;
                cursor[u as usize] += 1;
                targets[cursor[v as usize]] = u;
                cursor[v as usize] += 1;
            }
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        let mut graph = Graph {
            offsets,
            targets,
            labels,
        };
        if dedup {
            graph.compact();
        }
        graph
    }

    /// Removes repeated neighbors from the (sorted) adjacency lists.
    fn compact(&mut self) {
        let n = self.n();
        let mut write = 0;
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for v in 0..n {
            let (start, end) = (self.offsets[v], self.offsets[v + 1]);
            let mut last = None;
            for i in start..end {
                let u = self.targets[i];
                if last != Some(u) {
                    self.targets[write] = u;
                    write += 1;
                    last = Some(u);
                }
            }
            offsets.push(write);
        }
        self.targets.truncate(write);
        self.targets.shrink_to_fit();
        self.offsets = offsets;
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    /// Panics if `v >= n`; see [`Graph::try_degree`].
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbor indices of `v`. Panics if `v >= n`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn try_degree(&self, v: usize) -> Result<usize> {
        self.check(v).map(|_| self.degree(v))
    }

    pub fn try_neighbors(&self, v: usize) -> Result<&[u32]> {
        self.check(v).map(|_| self.neighbors(v))
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Original label of dense vertex `v`.
    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    /// Dense index → original label.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense index of an original label, if present.
    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Connected component id per vertex, components numbered in order of
    /// their smallest vertex.
    pub fn components(&self) -> (usize, Vec<u32>) {
        let n = self.n();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w as usize);
                    }
                }
            }
            count += 1;
        }
        (count as usize, comp)
    }

    /// Subgraph induced by the largest connected component (ties go to the
    /// component containing the smallest vertex). Original labels are kept.
    pub fn largest_connected_component(&self) -> Graph {
        let (count, comp) = self.components();
        if count <= 1 {
            return self.clone();
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c as usize] += 1;
        }
        let best = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap() as u32;
        self.induced(|v| comp[v] == best)
    }

    fn induced(&self, keep: impl Fn(usize) -> bool) -> Graph {
        let mut new_index = vec![u32::MAX; self.n()];
        let mut labels = Vec::new();
        for (v, index) in new_index.iter_mut().enumerate() {
            if keep(v) {
                *index = labels.len() as u32;
                labels.push(self.labels[v]);
            }
        }
        let pairs: Vec<(u32, u32)> = self
            .edges()
            .filter(|&(u, v)| new_index[u] != u32::MAX && new_index[v] != u32::MAX)
            .map(|(u, v)| (new_index[u], new_index[v]))
            .collect();
        Self::build(labels.len(), &pairs, labels, false)
    }

    /// Writes `u v` lines (original labels, `u < v` by index) that
    /// [`parse_edge_list`] reads back into the same graph.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }
}

/// Parses an edge list from a reader. See the module docs for the format.
pub fn parse_edge_list<R: BufRead>(reader: R, options: LoadOptions) -> Result<Graph> {
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_label = |what: &str| -> Result<u64> {
            let field = fields.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("missing {what} vertex"),
            })?;
            field.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid vertex label {field:?}"),
            })
        };
        let u = next_label("source")?;
        let v = next_label("target")?;
        edges.push((u, v));
    }
    let mut graph = Graph::from_labeled_edges(&edges);
    if options.lcc {
        graph = graph.largest_connected_component();
    }
    if graph.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(graph)
}

pub fn load_edge_list(path: impl AsRef<Path>, options: LoadOptions) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(BufReader::new(file), options)
}
