//! Problem graphs, exact combinatorial oracles and the hypercube walk graph.
//!
//! Vertex indices are 0-based. A bitstring `x` over the vertices is read with
//! vertex 0 as the least significant bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HqwError, Result};
use crate::hamiltonian::DiagonalHamiltonian;

/// Largest vertex count accepted by the brute-force oracles.
pub const ORACLE_MAX_VERTICES: usize = 24;

/// Largest hypercube dimension for [`hypercube_walk_graph`].
pub const WALK_GRAPH_MAX_QUBITS: usize = 12;

const MAX_SAMPLING_ATTEMPTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Undirected weighted graph with canonically ordered edges (`u < v`, sorted,
/// no duplicates, no self-loops).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, swapping endpoints into `u < v` order and sorting.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        if n_vertices == 0 {
            return Err(HqwError::Parameter(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(HqwError::Parameter(format!("self-loop at vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= n_vertices {
                return Err(HqwError::Parameter(format!(
                    "edge ({u},{v}) out of range for {n_vertices} vertices"
                )));
            }
            if !w.is_finite() {
                return Err(HqwError::Parameter(format!(
                    "edge ({u},{v}) has non-finite weight"
                )));
            }
            out.push(Edge { u, v, w });
        }
        out.sort_by_key(|a| (a.u, a.v));
        if let Some(dup) = out
            .windows(2)
            .find(|p| (p[0].u, p[0].v) == (p[1].u, p[1].v))
        {
            return Err(HqwError::Parameter(format!(
                "duplicate edge ({},{})",
                dup[0].u, dup[0].v
            )));
        }
        Ok(Self {
            n_vertices,
            edges: out,
        })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n_vertices, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1.0)));
        Self::new(n, edges).expect("complete graph is well formed")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(HqwError::Parameter(
                "cycle needs at least 3 vertices".into(),
            ));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// True when the graph is the complete graph on its vertex set.
    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n_vertices * (self.n_vertices - 1) / 2
    }

    /// Breadth-first connectivity check.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.n_vertices];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.n_vertices
    }

    /// Neighbour bitmasks (vertex count ≤ 64).
    pub fn adjacency_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.n_vertices];
        for e in &self.edges {
            masks[e.u] |= 1 << e.v;
            masks[e.v] |= 1 << e.u;
        }
        masks
    }

    /// Total weight of edges cut by bipartition `x`.
    pub fn cut_value(&self, x: u64) -> f64 {
        self.edges
            .iter()
            .filter(|e| ((x >> e.u) ^ (x >> e.v)) & 1 == 1)
            .fold(0.0, |acc, e| acc + e.w)
    }

    /// Edge-list text: `n m` then one `u v w` line per edge.
    pub fn to_edgelist(&self) -> String {
        let mut s = format!("{} {}\n", self.n_vertices, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.w);
        }
        s
    }

    pub fn from_edgelist(text: &str) -> Result<Self> {
        Self::read_edgelist(text.as_bytes())
    }

    pub fn read_edgelist(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| HqwError::Parse("empty edge list".into()))??;
        let mut it = header.split_whitespace();
        let n: usize = parse_field(it.next(), "vertex count")?;
        let m: usize = parse_field(it.next(), "edge count")?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: usize = parse_field(it.next(), "u")?;
            let v: usize = parse_field(it.next(), "v")?;
            let w: f64 = parse_field(it.next(), "w")?;
            edges.push((u, v, w));
        }
        if edges.len() != m {
            return Err(HqwError::Parse(format!(
                "header declares {m} edges, found {}",
                edges.len()
            )));
        }
        Self::new(n, edges)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_edgelist().as_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_edgelist(std::io::BufReader::new(f))
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.ok_or_else(|| HqwError::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| HqwError::Parse(format!("bad {what}")))
}

/// Samples a connected graph with `m ∈ [m_min, m_max]` unit-weight edges.
///
/// The edge count is drawn uniformly, then an edge set uniformly among all
/// `m`-subsets of vertex pairs; disconnected draws are rejected.
pub fn random_connected_graph(n: usize, m_min: usize, m_max: usize, seed: u64) -> Result<Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    if n < 2 || m_min + 1 < n || m_min > m_max || m_max > pairs {
        return Err(HqwError::Parameter(format!(
            "infeasible bounds n={n}, m in [{m_min}, {m_max}]"
        )));
    }
    let all: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(m_min..=m_max);
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let picked = index::sample(&mut rng, pairs, m);
        let g = Graph::new(n, picked.iter().map(|i| (all[i].0, all[i].1, 1.0)))?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(HqwError::Parameter(format!(
        "no connected graph found for n={n}, m={m} after {MAX_SAMPLING_ATTEMPTS} draws"
    )))
}

fn check_oracle_size(g: &Graph) -> Result<()> {
    if g.n_vertices() > ORACLE_MAX_VERTICES {
        return Err(HqwError::Capacity {
            what: "oracle vertex count",
            got: g.n_vertices(),
            limit: ORACLE_MAX_VERTICES,
        });
    }
    Ok(())
}

/// Exact max-cut by exhaustive enumeration of bipartitions.
pub fn max_cut_value(g: &Graph) -> Result<f64> {
    check_oracle_size(g)?;
    let n = g.n_vertices();
    // Fixing vertex n-1 on side 0 halves the work (cut(x) = cut(!x)).
    let half = 1u64 << (n - 1);
    Ok((0..half).map(|x| g.cut_value(x)).fold(0.0, f64::max))
}

/// Size of a maximum independent set (branch and bound over bitmasks).
pub fn mis_optimum(g: &Graph) -> Result<usize> {
    check_oracle_size(g)?;
    let adj = g.adjacency_masks();
    let all = if g.n_vertices() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n_vertices()) - 1
    };
    let mut best = 0;
    mis_branch(&adj, all, 0, &mut best);
    Ok(best)
}

fn mis_branch(adj: &[u64], candidates: u64, size: usize, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let rest = candidates & !(1 << v);
    mis_branch(adj, rest & !adj[v], size + 1, best);
    // Excluding v only helps if v has a neighbour among the candidates.
    if adj[v] & rest != 0 {
        mis_branch(adj, rest, size, best);
    }
}

/// Edge label of the hypercube walk graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkLabel {
    /// Hamming-distance-1 hypercube edge (mixer branch).
    Hypercube = 0,
    /// Self-loop carrying the objective value (problem branch).
    SelfLoop = 1,
}

/// The `n`-cube with label-0 edges between bitstrings at Hamming distance 1
/// and one label-1 self-loop of weight `N(x)` at every vertex `x`.
#[derive(Debug, Clone)]
pub struct WalkGraph {
    n_qubits: usize,
    base: Graph,
    self_loops: BTreeMap<usize, f64>,
}

impl WalkGraph {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Hypercube edges (all labeled [`WalkLabel::Hypercube`]).
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn self_loops(&self) -> &BTreeMap<usize, f64> {
        &self.self_loops
    }

    /// Label of edge `{a, b}`; `a == b` addresses the self-loop.
    pub fn edge_label(&self, a: usize, b: usize) -> Option<WalkLabel> {
        let dim = 1usize << self.n_qubits;
        if a >= dim || b >= dim {
            return None;
        }
        if a == b {
            return Some(WalkLabel::SelfLoop);
        }
        ((a ^ b).count_ones() == 1).then_some(WalkLabel::Hypercube)
    }

    /// Dense real matrix of the subgraph carrying `label`: the hypercube
    /// adjacency (the action of `ΣX_i`) or the diagonal of self-loop weights.
    pub fn subgraph_matrix(&self, label: WalkLabel) -> nalgebra::DMatrix<f64> {
        let dim = 1usize << self.n_qubits;
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        match label {
            WalkLabel::Hypercube => {
                for e in self.base.edges() {
                    m[(e.u, e.v)] = e.w;
                    m[(e.v, e.u)] = e.w;
                }
            }
            WalkLabel::SelfLoop => {
                for (&x, &w) in &self.self_loops {
                    m[(x, x)] = w;
                }
            }
        }
        m
    }
}

/// Builds the labeled hypercube walk graph for a diagonal objective.
pub fn hypercube_walk_graph(diag: &DiagonalHamiltonian) -> Result<WalkGraph> {
    let dim = diag.energies().len();
    if !dim.is_power_of_two() {
        return Err(HqwError::Parameter(format!(
            "diagonal length {dim} is not a power of two"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if n > WALK_GRAPH_MAX_QUBITS {
        return Err(HqwError::Capacity {
            what: "walk graph qubits",
            got: n,
            limit: WALK_GRAPH_MAX_QUBITS,
        });
    }
    let edges = (0..dim).flat_map(|x| {
        (0..n).filter_map(move |i| {
            let y = x ^ (1 << i);
            (x < y).then_some((x, y, 1.0))
        })
    });
    let base = Graph::new(dim, edges)?;
    let self_loops = diag.energies().iter().copied().enumerate().collect();
    Ok(WalkGraph {
        n_qubits: n,
        base,
        self_loops,
    })
}
