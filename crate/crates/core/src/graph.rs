//! Simple undirected graphs on dense vertex labels `0..n`.
//!
//! Every structure in this crate — dataset graphs, sampled patterns, generated
//! benchmark families — is a [`Graph`]. Edges are 2-element subsets of the
//! vertex set: no self-loops, no parallel edges, no attributes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {endpoint} out of range for graph on {vertex_count} vertices")]
    VertexOutOfRange { endpoint: usize, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("{family} requires at least {min} vertices, got {got}")]
    OrderTooSmall {
        family: &'static str,
        min: usize,
        got: usize,
    },
    #[error("csl skip {skip} must lie in 2..=n-2 for n = {n}")]
    InvalidSkip { skip: usize, n: usize },
    #[error("{op} supports at most {limit} vertices, got {got}")]
    TooLarge {
        op: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
}

/// An undirected graph with vertices `0..vertex_count` and a set of
/// unordered edges. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertex_count.hash(state);
        self.edges.hash(state);
    }
}

impl Graph {
    /// Builds a graph from an edge list. Edges are normalized to `(min, max)`
    /// and deduplicated; self-loops and out-of-range endpoints are rejected.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        endpoint,
                        vertex_count,
                    });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_edge_set(vertex_count, set))
    }

    /// Graph with `vertex_count` isolated vertices.
    pub fn empty(vertex_count: usize) -> Self {
        Self::from_edge_set(vertex_count, BTreeSet::new())
    }

    fn from_edge_set(vertex_count: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self {
            vertex_count,
            edges,
            neighbors,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Sorted degree sequence.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = (0..self.vertex_count).map(|v| self.degree(v)).collect();
        degrees.sort_unstable();
        degrees
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        visited == self.vertex_count
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`. `perm` must be a
    /// permutation of `0..vertex_count`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.vertex_count);
        let edges = self.edges().map(|(u, v)| (perm[u], perm[v]));
        Graph::new(self.vertex_count, edges).expect("permutation preserves validity")
    }

    /// Induced subgraph on `kept` (ascending), relabeled densely to `0..kept.len()`.
    pub fn induced(&self, kept: &BTreeSet<usize>) -> Graph {
        let index: std::collections::BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self
            .edges()
            .filter(|(u, v)| kept.contains(u) && kept.contains(v))
            .map(|(u, v)| (index[&u], index[&v]));
        Graph::new(kept.len(), edges).expect("induced subgraph is valid")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.vertex_count, self.edge_count())
    }
}

/// Generated graph families used throughout tests and experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cycle,
    Path,
    Complete,
    Edgeless,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Complete => "complete",
            Family::Edgeless => "edgeless",
        }
    }
}

impl FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "complete" => Ok(Family::Complete),
            "edgeless" => Ok(Family::Edgeless),
            other => Err(GraphError::UnknownFamily(other.to_string())),
        }
    }
}

/// The named graph on `n` vertices with consecutive labeling.
/// Cycles require `n >= 3`; everything else `n >= 1`.
pub fn generate(family: Family, n: usize) -> Result<Graph, GraphError> {
    let min = match family {
        Family::Cycle => 3,
        _ => 1,
    };
    if n < min {
        return Err(GraphError::OrderTooSmall {
            family: family.name(),
            min,
            got: n,
        });
    }
    let edges: Vec<(usize, usize)> = match family {
        Family::Cycle => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        Family::Path => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        Family::Complete => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        Family::Edgeless => Vec::new(),
    };
    Graph::new(n, edges)
}

/// Circular skip link graph: cycle `{i, i+1}` plus chords `{i, i+skip}`,
/// indices mod `n`. Requires `n >= 5` and `2 <= skip <= n-2`.
pub fn generate_csl(n: usize, skip: usize) -> Result<Graph, GraphError> {
    if n < 5 {
        return Err(GraphError::OrderTooSmall {
            family: "csl",
            min: 5,
            got: n,
        });
    }
    if skip < 2 || skip > n - 2 {
        return Err(GraphError::InvalidSkip { skip, n });
    }
    let edges = (0..n)
        .map(|i| (i, (i + 1) % n))
        .chain((0..n).map(|i| (i, (i + skip) % n)));
    Graph::new(n, edges)
}

/// Disjoint union: `h`'s labels shifted by `v(g)`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let n = g.vertex_count() + h.vertex_count();
    let edges = g.edges().chain(
        h.edges()
            .map(|(u, v)| (u + g.vertex_count(), v + g.vertex_count())),
    );
    Graph::new(n, edges).expect("shifted labels stay in range")
}
