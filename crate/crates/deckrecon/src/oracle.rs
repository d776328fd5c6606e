//! Independent ground truth: a naive clique counter that shares no code
//! path with the bitrow recursion, and an isomorph-free enumerator for
//! small orders.

use rayon::prelude::*;

use crate::canon::canonical_form;
use crate::error::VerifyError;
use crate::graph::Graph;

/// Exact r-clique count by scanning every r-subset and checking all pairs
/// against a plain boolean adjacency matrix. Deliberately naive; guarded to
/// n <= 16 or r <= 4 to stay tractable.
pub fn brute_force_kr(g: &Graph, r: usize) -> Result<u128, VerifyError> {
    let n = g.order();
    if n > 16 && r > 4 {
        return Err(VerifyError::TooLarge(format!(
            "brute-force clique scan needs n <= 16 or r <= 4, got n = {n}, r = {r}"
        )));
    }
    if r == 0 {
        return Ok(1);
    }
    if r > n {
        return Ok(0);
    }
    let mut adj = vec![vec![false; n]; n];
    for u in 0..n {
        for v in 0..n {
            adj[u][v] = u != v && g.has_edge(u, v);
        }
    }
    // index-vector combination walk over r-subsets
    let mut subset: Vec<usize> = (0..r).collect();
    let mut count = 0u128;
    loop {
        let mut clique = true;
        'pairs: for i in 0..r {
            for j in (i + 1)..r {
                if !adj[subset[i]][subset[j]] {
                    clique = false;
                    break 'pairs;
                }
            }
        }
        count += clique as u128;

        // advance to the next combination
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            if subset[i] != i + n - r {
                break;
            }
        }
        subset[i] += 1;
        for j in (i + 1)..r {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Known isomorphism-class counts for orders 1..=7, asserted by tests.
pub const CLASS_COUNTS: [usize; 7] = [1, 2, 4, 11, 34, 156, 1044];

/// One canonical representative per isomorphism class of order n, in a
/// deterministic order. Built in from scratch for n <= 7 by deduplicating
/// all 2^(n choose 2) labeled graphs under the canonical form; larger
/// orders need a corpus file.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>, VerifyError> {
    if n == 0 || n > 7 {
        return Err(VerifyError::TooLarge(format!(
            "built-in enumeration covers 1 <= n <= 7, got n = {n}; supply a corpus file"
        )));
    }
    let bits = n * (n - 1) / 2;
    let mut keys: Vec<u64> = (0u64..1 << bits)
        .into_par_iter()
        .map(|mask| canonical_key(&graph_from_mask(n, mask)))
        .collect();
    keys.par_sort_unstable();
    keys.dedup();
    Ok(keys.into_iter().map(|k| graph_from_mask(n, k)).collect())
}

/// Packs the upper triangle of the canonical form into an integer; two
/// graphs of equal order collide exactly when they are isomorphic.
fn canonical_key(g: &Graph) -> u64 {
    let c = canonical_form(g);
    let n = c.order();
    let mut mask = 0u64;
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            mask |= (c.has_edge(u, v) as u64) << idx;
            idx += 1;
        }
    }
    mask
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            if mask >> idx & 1 == 1 {
                g.add_edge(u, v);
            }
            idx += 1;
        }
    }
    g
}
