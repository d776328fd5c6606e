//! Exact canonical forms for unlabeled-card semantics.
//!
//! Cards are unlabeled, so multiset comparisons need a relabeling-invariant,
//! class-separating certificate. The certificate here is exact (not a hash):
//! equitable degree refinement followed by backtracking over individualized
//! orderings, taking the lexicographically smallest adjacency bit string over
//! all refinement-consistent labelings. Interchangeable (twin) vertices are
//! pruned, which keeps highly symmetric graphs cheap.

use crate::graph::{emit_graph6, Graph};

/// A byte string identifying the isomorphism class of a graph at fixed
/// order. It is the graph6 line of the canonical relabeling, so it doubles
/// as a parseable representative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCertificate(String);

impl CanonicalCertificate {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Debug for CanonicalCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cert({})", self.0)
    }
}

impl std::fmt::Display for CanonicalCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// The canonically relabeled representative of the isomorphism class of `g`.
pub fn canonical_form(g: &Graph) -> Graph {
    let perm = Search::new(g).run();
    g.relabeled(&perm)
}

/// Relabeling-invariant certificate: `cert(g) == cert(h)` iff `g` and `h`
/// are isomorphic (they must have equal order for the encodings to match).
pub fn canonical_certificate(g: &Graph) -> CanonicalCertificate {
    CanonicalCertificate(emit_graph6(&canonical_form(g)))
}

/// Ordered partition of the vertex set; cell order is part of the state and
/// is derived only from isomorphism-invariant data.
type Partition = Vec<Vec<usize>>;

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    best: Option<Vec<u8>>,
    best_perm: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        Search { g, n: g.order(), best: None, best_perm: Vec::new() }
    }

    fn run(mut self) -> Vec<usize> {
        let mut start: Partition = vec![(0..self.n).collect()];
        refine(self.g, &mut start);
        self.descend(start);
        self.best_perm
    }

    fn descend(&mut self, partition: Partition) {
        if let Some(cell_idx) = partition.iter().position(|c| c.len() > 1) {
            for &v in &prune_twins(self.g, &partition[cell_idx]) {
                let mut child = partition.clone();
                let rest: Vec<usize> =
                    partition[cell_idx].iter().copied().filter(|&u| u != v).collect();
                child[cell_idx] = vec![v];
                child.insert(cell_idx + 1, rest);
                refine(self.g, &mut child);
                self.descend(child);
            }
        } else {
            let perm: Vec<usize> = partition.iter().map(|c| c[0]).collect();
            let code = triangle_code(self.g, &perm);
            if self.best.as_ref().is_none_or(|b| code < *b) {
                self.best = Some(code);
                self.best_perm = perm;
            }
        }
    }
}

/// Upper-triangle adjacency bits of the relabeled graph, packed 6 per byte in
/// the same column-major order graph6 uses, so leaf comparison matches the
/// certificate ordering.
fn triangle_code(g: &Graph, perm: &[usize]) -> Vec<u8> {
    let n = perm.len();
    let mut out = Vec::with_capacity((n * (n - 1) / 2).div_ceil(6));
    let mut group = 0u8;
    let mut filled = 0u8;
    for v in 1..n {
        for u in 0..v {
            group = (group << 1) | g.has_edge(perm[u], perm[v]) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(group << (6 - filled));
    }
    out
}

/// Equitable refinement to a fixpoint: every cell is split by neighbor counts
/// into every cell, sub-cells ordered by ascending count. Splitting decisions
/// depend only on cell positions and counts, so the refined partition is
/// invariant under relabeling.
fn refine(g: &Graph, partition: &mut Partition) {
    loop {
        let mut changed = false;
        'outer: for splitter_idx in 0..partition.len() {
            let mask: u64 = partition[splitter_idx].iter().fold(0u64, |m, &v| m | 1 << v);
            for cell_idx in 0..partition.len() {
                if partition[cell_idx].len() < 2 {
                    continue;
                }
                let mut groups: Vec<(u32, Vec<usize>)> = Vec::new();
                for &v in &partition[cell_idx] {
                    let c = (g.row(v) & mask).count_ones();
                    match groups.binary_search_by_key(&c, |e| e.0) {
                        Ok(i) => groups[i].1.push(v),
                        Err(i) => groups.insert(i, (c, vec![v])),
                    }
                }
                if groups.len() > 1 {
                    partition.splice(cell_idx..=cell_idx, groups.into_iter().map(|(_, vs)| vs));
                    changed = true;
                    continue 'outer;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Keeps one representative per twin class within a cell. Two vertices are
/// twins when swapping them is an automorphism (equal neighborhoods outside
/// the pair), so the pruned branches explore isomorphic subtrees.
fn prune_twins(g: &Graph, cell: &[usize]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::with_capacity(cell.len());
    for &v in cell {
        let twin_of_kept = kept.iter().any(|&u| {
            let pair = (1u64 << u) | (1u64 << v);
            g.row(u) & !pair == g.row(v) & !pair
        });
        if !twin_of_kept {
            kept.push(v);
        }
    }
    kept
}
