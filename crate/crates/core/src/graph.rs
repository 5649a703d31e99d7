//! Simple undirected graphs and the families the games are played on.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed graph spec {0:?} (expected complete:N, hypercube:D, gnp:N:P:SEED or file:PATH)")]
    BadSpec(String),
    #[error("edge list {path}: line {line}: {reason}")]
    BadEdgeList {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Unordered vertex pair, stored with the smaller index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(Vertex, Vertex)", into = "(Vertex, Vertex)")]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Canonical edge between two distinct vertices.
    ///
    /// Panics on a self-loop; use `Edge::try_new` for untrusted input.
    pub fn new(u: Vertex, v: Vertex) -> Edge {
        Edge::try_new(u, v).expect("self-loop edge")
    }

    pub fn try_new(u: Vertex, v: Vertex) -> Option<Edge> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(Edge(u, v)),
            std::cmp::Ordering::Greater => Some(Edge(v, u)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }
}

impl TryFrom<(Vertex, Vertex)> for Edge {
    type Error = String;

    fn try_from((u, v): (Vertex, Vertex)) -> Result<Self, Self::Error> {
        Edge::try_new(u, v).ok_or_else(|| format!("self-loop ({u}, {v}) is not an edge"))
    }
}

impl From<Edge> for (Vertex, Vertex) {
    fn from(e: Edge) -> Self {
        (e.0, e.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// How a graph was built. The `Display` form is the spec string accepted by
/// the CLI and the service.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSpec {
    Complete { n: usize },
    Hypercube { dim: usize },
    Gnp { n: usize, p: f64, seed: u64 },
    File { path: PathBuf },
    /// Built in code from an explicit edge list.
    Custom,
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph, GraphError> {
        match self {
            GraphSpec::Complete { n } => Graph::complete(*n),
            GraphSpec::Hypercube { dim } => Graph::hypercube(*dim),
            GraphSpec::Gnp { n, p, seed } => Graph::random_dense(*n, *p, *seed),
            GraphSpec::File { path } => Graph::from_edge_list_file(path),
            GraphSpec::Custom => Err(GraphError::InvalidParameter(
                "a custom graph cannot be rebuilt from its spec".into(),
            )),
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, GraphSpec::Complete { .. })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Complete { n } => write!(f, "complete:{n}"),
            GraphSpec::Hypercube { dim } => write!(f, "hypercube:{dim}"),
            GraphSpec::Gnp { n, p, seed } => write!(f, "gnp:{n}:{p}:{seed}"),
            GraphSpec::File { path } => write!(f, "file:{}", path.display()),
            GraphSpec::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadSpec(s.to_string());
        let (family, rest) = s.split_once(':').ok_or_else(bad)?;
        match family {
            "complete" => Ok(GraphSpec::Complete {
                n: rest.parse().map_err(|_| bad())?,
            }),
            "hypercube" => Ok(GraphSpec::Hypercube {
                dim: rest.parse().map_err(|_| bad())?,
            }),
            "gnp" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                Ok(GraphSpec::Gnp {
                    n: parts[0].parse().map_err(|_| bad())?,
                    p: parts[1].parse().map_err(|_| bad())?,
                    seed: parts[2].parse().map_err(|_| bad())?,
                })
            }
            "file" if !rest.is_empty() => Ok(GraphSpec::File {
                path: PathBuf::from(rest),
            }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for GraphSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GraphSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "custom" {
            return Ok(GraphSpec::Custom);
        }
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Edges are numbered in lexicographic order of their canonical pairs; that
/// order is what every "lowest index" tie-break in the strategies refers to.
#[derive(Clone, Debug)]
pub struct Graph {
    spec: GraphSpec,
    adj: Vec<Vec<Vertex>>,
    adj_edge: Vec<Vec<u32>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// K_n.
    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidParameter(format!(
                "complete graph needs n >= 2, got {n}"
            )));
        }
        let n32 = n as Vertex;
        let edges = (0..n32).flat_map(|u| (u + 1..n32).map(move |v| Edge(u, v)));
        Ok(Graph::assemble(n, edges, GraphSpec::Complete { n }))
    }

    /// Q_d. Vertex `v` carries the bit string of `v` written with `d` digits,
    /// most significant bit first.
    pub fn hypercube(dim: usize) -> Result<Graph, GraphError> {
        if !(1..=24).contains(&dim) {
            return Err(GraphError::InvalidParameter(format!(
                "hypercube dimension must be in 1..=24, got {dim}"
            )));
        }
        let n = 1usize << dim;
        let mut edges = Vec::with_capacity(dim * n / 2);
        for u in 0..n as Vertex {
            for bit in 0..dim {
                let v = u ^ (1 << bit);
                if u < v {
                    edges.push(Edge(u, v));
                }
            }
        }
        edges.sort_unstable();
        Ok(Graph::assemble(n, edges, GraphSpec::Hypercube { dim }))
    }

    /// G(n, p): each pair independently with probability `p`, drawn from a
    /// ChaCha8 stream seeded by `seed` in lexicographic pair order.
    pub fn random_dense(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidParameter(format!(
                "random graph needs n >= 2, got {n}"
            )));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(GraphError::InvalidParameter(format!(
                "edge probability must lie in (0, 1], got {p}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                if rng.gen_bool(p) {
                    edges.push(Edge(u, v));
                }
            }
        }
        Ok(Graph::assemble(n, edges, GraphSpec::Gnp { n, p, seed }))
    }

    /// Graph on `0..n` from explicit edges. Duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        Graph::from_edges_with_spec(n, edges, GraphSpec::Custom)
    }

    fn from_edges_with_spec(
        n: usize,
        edges: &[(Vertex, Vertex)],
        spec: GraphSpec,
    ) -> Result<Graph, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidParameter(format!(
                "graph needs at least 2 vertices, got {n}"
            )));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            canon.push(Edge::try_new(u, v).ok_or_else(|| {
                GraphError::InvalidParameter(format!("self-loop at vertex {u}"))
            })?);
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Graph::assemble(n, canon, spec))
    }

    /// Whitespace-separated edge list, one `u v` pair per line, 0-based.
    /// Blank lines and `#` comments are skipped; n is one more than the
    /// largest index mentioned.
    pub fn from_edge_list_file(path: &Path) -> Result<Graph, GraphError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| GraphError::Io {
            path: shown.clone(),
            source,
        })?;
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| GraphError::BadEdgeList {
                path: shown.clone(),
                line: i + 1,
                reason: reason.to_string(),
            };
            let mut it = line.split_whitespace();
            let u: Vertex = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("expected two vertex indices"))?;
            let v: Vertex = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("expected two vertex indices"))?;
            if it.next().is_some() {
                return Err(bad("trailing tokens"));
            }
            if u == v {
                return Err(bad("self-loop"));
            }
            pairs.push((u, v));
        }
        let n = pairs
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0);
        Graph::from_edges_with_spec(
            n,
            &pairs,
            GraphSpec::File {
                path: path.to_path_buf(),
            },
        )
    }

    fn assemble(n: usize, edges: impl IntoIterator<Item = Edge>, spec: GraphSpec) -> Graph {
        let edges: Vec<Edge> = edges.into_iter().collect();
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut adj = vec![Vec::new(); n];
        let mut adj_edge = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adj[e.0 as usize].push(e.1);
            adj_edge[e.0 as usize].push(id as u32);
            adj[e.1 as usize].push(e.0);
            adj_edge[e.1 as usize].push(id as u32);
        }
        // Lexicographic edge order yields sorted adjacency lists.
        debug_assert!(adj.iter().all(|a| a.windows(2).all(|w| w[0] < w[1])));
        Graph {
            spec,
            adj,
            adj_edge,
            edges,
        }
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges in lexicographic order; position = edge id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: u32) -> Edge {
        self.edges[id as usize]
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    /// Edge ids incident to `v`, parallel to `neighbors(v)`.
    pub fn incident_edge_ids(&self, v: Vertex) -> &[u32] {
        &self.adj_edge[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        (v as usize) < self.adj.len()
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<u32> {
        if !self.contains_vertex(u) || !self.contains_vertex(v) {
            return None;
        }
        let (a, b) = if self.adj[u as usize].len() <= self.adj[v as usize].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize]
            .binary_search(&b)
            .ok()
            .map(|pos| self.adj_edge[a as usize][pos])
    }

    pub fn edge_id_of(&self, e: Edge) -> Option<u32> {
        self.edge_id(e.0, e.1)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Hypercube dimension, when this graph is one.
    pub fn hypercube_dim(&self) -> Option<usize> {
        match self.spec {
            GraphSpec::Hypercube { dim } => Some(dim),
            _ => None,
        }
    }

    /// Bit-string label of a hypercube vertex, most significant bit first.
    pub fn label(&self, v: Vertex) -> Option<String> {
        let dim = self.hypercube_dim()?;
        Some(format!("{:0width$b}", v, width = dim))
    }

    /// Hypercube vertex index for a bit-string label.
    pub fn vertex_for_label(&self, label: &str) -> Option<Vertex> {
        let dim = self.hypercube_dim()?;
        if label.len() != dim {
            return None;
        }
        Vertex::from_str_radix(label, 2).ok()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn codegree(&self, u: Vertex, v: Vertex) -> usize {
        let (a, b) = (&self.adj[u as usize], &self.adj[v as usize]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Minimum co-degree over all unordered vertex pairs.
    pub fn min_codegree(&self) -> usize {
        let n = self.vertex_count();
        let rows: Vec<FixedBitSet> = (0..n)
            .map(|u| {
                let mut row = FixedBitSet::with_capacity(n);
                for &v in &self.adj[u] {
                    row.insert(v as usize);
                }
                row
            })
            .collect();
        let mut best = usize::MAX;
        for u in 0..n {
            for v in u + 1..n {
                best = best.min(rows[u].intersection_count(&rows[v]));
            }
        }
        best
    }
}

/// Coordinate `c` (0 = leftmost character of the label) of a hypercube
/// vertex.
pub fn hypercube_coordinate(dim: usize, v: Vertex, c: usize) -> bool {
    (v >> (dim - 1 - c)) & 1 == 1
}

/// The neighbour of `v` across coordinate `c`.
pub fn hypercube_flip(dim: usize, v: Vertex, c: usize) -> Vertex {
    v ^ (1 << (dim - 1 - c))
}
