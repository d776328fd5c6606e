//! Labeled simple graphs on up to 62 vertices, stored as adjacency bitrows.
//!
//! This module is the arithmetic substrate for everything else: graph6
//! serialization, vertex deletion, and exact clique counting via
//! neighborhood-intersection recursion over the bitrows.

use crate::error::GraphError;

/// Largest supported order. graph6 encodes n <= 62 in a single header byte,
/// and a u64 bitrow holds 62 neighbor bits with room to spare.
pub const MAX_ORDER: usize = 62;

/// A labeled simple graph on `1..=62` vertices.
///
/// Invariants: the adjacency relation is symmetric, there are no self-loops,
/// and only bits below `n` are ever set. All operations are pure; values are
/// immutable after construction in practice and freely shareable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The empty graph on `n` vertices. Panics outside `1..=62`.
    pub fn empty(n: usize) -> Graph {
        assert!((1..=MAX_ORDER).contains(&n), "order {n} out of range 1..=62");
        Graph { n, rows: vec![0; n] }
    }

    /// Builds a graph from an edge list. Panics on out-of-range endpoints
    /// or self-loops; duplicate edges are harmless.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// The complete graph K_n.
    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// The cycle C_n (n >= 3).
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = Graph::empty(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    /// The path P_n on n vertices.
    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    /// The star K_{1,n-1} with vertex 0 as center.
    pub fn star(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(0, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge ({u},{v}) on order {}", self.n);
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Neighbor bitmask of `v`.
    pub fn row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> u64 {
        self.rows.iter().map(|r| r.count_ones() as u64).sum::<u64>() / 2
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap()
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == (self.n as u64 * (self.n as u64 - 1)) / 2
    }

    /// Bitmask with the low `n` bits set (the full vertex set).
    fn full_mask(&self) -> u64 {
        if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 }
    }

    /// The card G - v: the induced subgraph on the other n-1 vertices,
    /// compacted preserving relative vertex order so decks are deterministic.
    pub fn delete_vertex(&self, v: usize) -> Graph {
        assert!(v < self.n && self.n >= 2, "cannot delete vertex {v} from order {}", self.n);
        let low = (1u64 << v) - 1;
        let mut rows = Vec::with_capacity(self.n - 1);
        for u in (0..self.n).filter(|&u| u != v) {
            let r = self.rows[u] & !(1 << v);
            rows.push((r & low) | ((r >> (v + 1)) << v));
        }
        Graph { n: self.n - 1, rows }
    }

    /// Relabels the graph: `pos_to_old[i]` is the original vertex placed at
    /// position `i`. `pos_to_old` must be a permutation of `0..n`.
    pub fn relabeled(&self, pos_to_old: &[usize]) -> Graph {
        assert_eq!(pos_to_old.len(), self.n);
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(pos_to_old[i], pos_to_old[j]) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Counts r-subsets of `mask` that induce a clique, taking vertices in
    /// increasing order so each clique is counted once.
    fn cliques_in(&self, mask: u64, r: usize) -> u128 {
        if r == 0 {
            return 1;
        }
        if r == 1 {
            return mask.count_ones() as u128;
        }
        let mut total = 0u128;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let candidates = self.rows[v] & rest;
            if (candidates.count_ones() as usize) + 1 >= r {
                total += self.cliques_in(candidates, r - 1);
            }
        }
        total
    }

    /// The number of complete subgraphs on `r` vertices. `r > n` gives 0 and
    /// `r = 1` gives n. Accumulates in 128 bits so card-sum aggregates of
    /// counts stay exact.
    pub fn count_cliques(&self, r: usize) -> u128 {
        if r == 0 {
            return 1;
        }
        if r > self.n {
            return 0;
        }
        self.cliques_in(self.full_mask(), r)
    }

    /// The number of r-cliques containing `v`: for r >= 2 this is the number
    /// of (r-1)-cliques inside N(v).
    pub fn clique_degree(&self, v: usize, r: usize) -> u128 {
        assert!(v < self.n && r >= 1);
        if r == 1 {
            return 1;
        }
        self.cliques_in(self.rows[v], r - 1)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph({})", emit_graph6(self))
    }
}

/// Parses one graph6 line (no `>>graph6<<` header, order 1..=62).
pub fn parse_graph6(line: &str) -> Result<Graph, GraphError> {
    let bytes = line.trim_end_matches(['\r', '\n']).as_bytes();
    if bytes.is_empty() {
        return Err(GraphError::MalformedEncoding("empty line".into()));
    }
    if bytes[0] == b'~' {
        // long-form order header: the order is at least 63
        return Err(GraphError::OrderTooLarge(63));
    }
    if !(63..=126).contains(&bytes[0]) {
        return Err(GraphError::MalformedEncoding(format!("bad header byte {}", bytes[0])));
    }
    let n = (bytes[0] - 63) as usize;
    if n == 0 {
        return Err(GraphError::MalformedEncoding("order 0 is not supported".into()));
    }
    let bits = n * (n - 1) / 2;
    let body_len = bits.div_ceil(6);
    if bytes.len() != 1 + body_len {
        return Err(GraphError::MalformedEncoding(format!(
            "expected {} body bytes for order {n}, found {}",
            body_len,
            bytes.len() - 1
        )));
    }
    let mut g = Graph::empty(n);
    let mut idx = 0usize; // bit index into the upper triangle stream
    for &b in &bytes[1..] {
        if !(63..=126).contains(&b) {
            return Err(GraphError::MalformedEncoding(format!("bad body byte {b}")));
        }
        let group = b - 63;
        for k in 0..6 {
            let bit = group >> (5 - k) & 1;
            if idx >= bits {
                if bit != 0 {
                    return Err(GraphError::MalformedEncoding("nonzero padding bits".into()));
                }
                continue;
            }
            if bit == 1 {
                let (u, v) = triangle_coords(idx);
                g.add_edge(u, v);
            }
            idx += 1;
        }
    }
    Ok(g)
}

/// Maps a bit index in the column-major upper-triangle stream to its edge:
/// bits run (0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...
fn triangle_coords(idx: usize) -> (usize, usize) {
    let mut v = 1usize;
    let mut base = 0usize;
    while base + v <= idx {
        base += v;
        v += 1;
    }
    (idx - base, v)
}

/// Emits the canonical-per-labeling graph6 line: byte n+63, then the upper
/// triangle column-major, 6 bits per byte, each byte offset by 63.
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + (n * (n - 1) / 2).div_ceil(6));
    out.push(n as u8 + 63);
    let mut group = 0u8;
    let mut filled = 0u8;
    for v in 1..n {
        for u in 0..v {
            group = (group << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).unwrap()
}
