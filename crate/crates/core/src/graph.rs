//! Finite undirected simple graphs, the standard generator families, and the
//! graph Laplacian.
//!
//! The Laplacian follows the transfer-matrix sign convention: off-diagonal
//! entries are `1` on edges and the diagonal holds `-d_j`, so the matrix is
//! negative semidefinite and `e^{Lt}` is the classical heat kernel.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral;

/// An undirected simple graph on nodes `0..n`.
///
/// Edges are stored canonically as `(u, v)` with `u < v`, sorted
/// lexicographically, so two graphs with the same edge set compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an explicit edge list.
    ///
    /// Self-loops, out-of-range endpoints, and repeated edges (in either
    /// orientation) are rejected rather than silently dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::EndpointOutOfRange(u, v, n));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            edges,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, j: usize) -> Result<&[usize]> {
        self.check_node(j)?;
        Ok(&self.adjacency[j])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn check_node(&self, j: usize) -> Result<()> {
        if j < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: j, n: self.n })
        }
    }

    pub fn degree(&self, j: usize) -> Result<usize> {
        self.check_node(j)?;
        Ok(self.adjacency[j].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Largest degree and the lowest-indexed node attaining it.
    pub fn max_degree(&self) -> (usize, usize) {
        let mut best = (self.adjacency[0].len(), 0);
        for (j, list) in self.adjacency.iter().enumerate().skip(1) {
            if list.len() > best.0 {
                best = (list.len(), j);
            }
        }
        best
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    pub fn is_regular(&self) -> bool {
        let d = self.adjacency[0].len();
        self.adjacency.iter().all(|list| list.len() == d)
    }

    /// Breadth-first reachability from node 0.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    pub fn laplacian(&self) -> Laplacian {
        let mut m = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            m[(u, v)] = 1.0;
            m[(v, u)] = 1.0;
        }
        for (j, list) in self.adjacency.iter().enumerate() {
            m[(j, j)] = -(list.len() as f64);
        }
        Laplacian(m)
    }

    /// Algebraic connectivity: the magnitude of the smallest nonzero Laplacian
    /// eigenvalue. Disconnected graphs report `0`.
    pub fn fiedler_value(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::InvalidSize {
                kind: "fiedler",
                n: self.n,
                reason: "need at least 2 nodes".into(),
            });
        }
        if !self.is_connected() {
            return Ok(0.0);
        }
        let spectrum = spectral::eigendecompose(&self.laplacian())?;
        Ok(spectrum.fiedler_value())
    }

    /// Serializes to the edge-list text format: the node count on the first
    /// line, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format. Lines starting with `#` and blank
    /// lines are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = |tok: &str| {
                tok.parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no,
                    reason: format!("`{tok}`: {e}"),
                })
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (n, fields.as_slice()) {
                (None, [count]) => n = Some(parse(count)?),
                (None, _) => {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: "expected the node count".into(),
                    })
                }
                (Some(_), [u, v]) => edges.push((parse(u)?, parse(v)?)),
                (Some(_), _) => {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: "expected `u v`".into(),
                    })
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            reason: "missing node count".into(),
        })?;
        Self::from_edges(n, &edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={})", self.n, self.edges.len())
    }
}

/// Dense graph Laplacian with diagonal `-d_j` and unit off-diagonals on edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian(DMatrix<f64>);

impl Laplacian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Complete,
    Ring,
    Path,
    Star,
    Wheel,
    RandomConnected,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::Ring => "ring",
            GraphKind::Path => "path",
            GraphKind::Star => "star",
            GraphKind::Wheel => "wheel",
            GraphKind::RandomConnected => "random_connected",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "complete" => GraphKind::Complete,
            "ring" | "cycle" => GraphKind::Ring,
            "path" => GraphKind::Path,
            "star" => GraphKind::Star,
            "wheel" => GraphKind::Wheel,
            "random_connected" | "random" => GraphKind::RandomConnected,
            other => return Err(Error::UnknownKind(other.to_string())),
        })
    }
}

fn invalid(kind: GraphKind, n: usize, reason: &str) -> Error {
    Error::InvalidSize {
        kind: kind.name(),
        n,
        reason: reason.into(),
    }
}

fn ring_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|k| (k, (k + 1) % n)).collect()
}

/// Builds a graph from one of the generator families.
///
/// Star and wheel graphs put the hub at node 0; wheel rims are the cycle
/// `1, 2, ..., n-1`. `extra` is only read by [`GraphKind::RandomConnected`],
/// where it is the target degree of node 1; `seed` is only read there too.
///
/// The random family starts from `ring(n)` and joins node 1 to `d - 2`
/// distinct non-neighbours drawn uniformly without replacement. The draw uses
/// a ChaCha8 stream (`ChaCha8Rng::seed_from_u64(seed)`) and `rand`'s
/// `seq::index::sample` over the ascending list of non-neighbours.
pub fn generate(kind: GraphKind, n: usize, extra: Option<usize>, seed: u64) -> Result<Graph> {
    match kind {
        GraphKind::Complete => {
            if n == 0 {
                return Err(invalid(kind, n, "need n >= 1"));
            }
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            Graph::from_edges(n, &edges)
        }
        GraphKind::Ring => {
            if n < 3 {
                return Err(invalid(kind, n, "need n >= 3"));
            }
            Graph::from_edges(n, &ring_edges(n))
        }
        GraphKind::Path => {
            if n == 0 {
                return Err(invalid(kind, n, "need n >= 1"));
            }
            let edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
            Graph::from_edges(n, &edges)
        }
        GraphKind::Star => {
            if n < 2 {
                return Err(invalid(kind, n, "need n >= 2"));
            }
            let edges: Vec<_> = (1..n).map(|k| (0, k)).collect();
            Graph::from_edges(n, &edges)
        }
        GraphKind::Wheel => {
            if n < 4 {
                return Err(invalid(kind, n, "need n >= 4"));
            }
            let rim = n - 1;
            let mut edges: Vec<_> = (1..n).map(|k| (0, k)).collect();
            edges.extend((0..rim).map(|k| (1 + k, 1 + (k + 1) % rim)));
            Graph::from_edges(n, &edges)
        }
        GraphKind::RandomConnected => {
            if n < 3 {
                return Err(invalid(kind, n, "need n >= 3"));
            }
            let target = extra.unwrap_or(2);
            if target < 2 || target > n - 1 {
                return Err(Error::UnreachableDegree { n, target });
            }
            let mut edges = ring_edges(n);
            let candidates: Vec<usize> = (3..n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<usize> = index::sample(&mut rng, candidates.len(), target - 2)
                .into_iter()
                .map(|i| candidates[i])
                .collect();
            picked.sort_unstable();
            edges.extend(picked.into_iter().map(|v| (1, v)));
            Graph::from_edges(n, &edges)
        }
    }
}
