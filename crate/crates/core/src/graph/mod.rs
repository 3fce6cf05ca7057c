//! Weighted undirected graphs and their degree statistics.
//!
//! A [`WeightedGraph`] stores each unordered pair once, so the adjacency
//! matrix it produces is symmetric by construction. Self-loops are allowed and
//! contribute their weight once to the degree of their vertex (`d = A 1`).

mod edgelist;
mod generate;
mod graph6;

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use edgelist::{parse_edgelist, write_edgelist};
pub use generate::{generate, Generated, Model, DEFAULT_RETRIES};
pub use graph6::{parse_graph6, write_graph6, MAX_GRAPH6_ORDER};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
    name: Option<String>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples. Pairs are normalised to
    /// `u <= v`; repeated pairs and non-positive weights are rejected.
    ///
    /// Connectivity is not required here; see [`WeightedGraph::require_connected`].
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "graph needs at least 2 vertices, got {n}"
            )));
        }
        let mut map = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            let key = (u.min(v), u.max(v));
            if map.insert(key, w).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge ({}, {})",
                    key.0, key.1
                )));
            }
        }
        Ok(Self {
            n,
            edges: map,
            name: None,
        })
    }

    /// Unweighted simple graph from vertex pairs.
    pub fn unweighted<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn require_connected(self) -> Result<Self> {
        if is_connected(&self) {
            Ok(self)
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Edges as `(u, v, w)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.edges
            .get(&(u.min(v), u.max(v)))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.keys().any(|&(u, v)| u == v)
    }

    /// All weights equal to one and no self-loops.
    pub fn is_simple_unweighted(&self) -> bool {
        !self.has_self_loops() && self.edges.values().all(|&w| w == 1.0)
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (u, v, w) in self.edges() {
            a[(u, v)] = w;
            a[(v, u)] = w;
        }
        a
    }

    /// Weighted degrees `d_i = sum_j a_ij`; a self-loop is counted once.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for (u, v, w) in self.edges() {
            d[u] += w;
            if u != v {
                d[v] += w;
            }
        }
        d
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, _) in self.edges() {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        adj
    }
}

/// True iff the positive-weight adjacency has a single component.
pub fn is_connected(g: &WeightedGraph) -> bool {
    let adj = g.neighbours();
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == g.n
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub degrees: Vec<f64>,
    /// Sum of all degrees (twice the edge weight for loop-free graphs).
    pub volume: f64,
    pub d_max: f64,
    pub d_mean: f64,
    pub d_second_moment: f64,
    /// `d_mean^2 / d_second_moment`, in `(0, 1]`.
    pub snr: f64,
}

impl DegreeStats {
    pub fn from_degrees(degrees: Vec<f64>) -> Self {
        let n = degrees.len() as f64;
        let volume: f64 = degrees.iter().sum();
        let sum_sq: f64 = degrees.iter().map(|d| d * d).sum();
        let d_max = degrees.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let d_mean = volume / n;
        let d_second_moment = sum_sq / n;
        let uniform = degrees.iter().all(|&d| d == degrees[0]);
        let snr = if uniform {
            1.0
        } else {
            (volume * volume / (n * sum_sq)).min(1.0)
        };
        Self {
            degrees,
            volume,
            d_max,
            d_mean,
            d_second_moment,
            snr,
        }
    }

    pub fn d_min(&self) -> f64 {
        self.degrees.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn degree_stats(g: &WeightedGraph) -> DegreeStats {
    DegreeStats::from_degrees(g.degrees())
}

/// Small deterministic families used throughout tests and the CLI.
pub mod families {
    use super::WeightedGraph;

    pub fn path(n: usize) -> WeightedGraph {
        WeightedGraph::unweighted(n, (1..n).map(|i| (i - 1, i)))
            .expect("valid path")
            .with_name(format!("path{n}"))
    }

    pub fn cycle(n: usize) -> WeightedGraph {
        WeightedGraph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))
            .expect("valid cycle")
            .with_name(format!("cycle{n}"))
    }

    pub fn star(n: usize) -> WeightedGraph {
        WeightedGraph::unweighted(n, (1..n).map(|i| (0, i)))
            .expect("valid star")
            .with_name(format!("star{n}"))
    }

    pub fn complete(n: usize) -> WeightedGraph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        WeightedGraph::unweighted(n, pairs)
            .expect("valid complete graph")
            .with_name(format!("complete{n}"))
    }

    /// Two vertices with self-loop weights `a11`, `a22` and edge weight `a12`.
    /// Zero self-loop weights are omitted.
    pub fn two_node(a11: f64, a12: f64, a22: f64) -> crate::Result<WeightedGraph> {
        let mut edges = vec![(0, 1, a12)];
        if a11 > 0.0 {
            edges.push((0, 0, a11));
        }
        if a22 > 0.0 {
            edges.push((1, 1, a22));
        }
        WeightedGraph::from_edges(2, edges)
    }
}
