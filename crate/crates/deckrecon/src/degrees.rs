//! Degree-sequence recovery from n-1 cards.
//!
//! The edge count m is pinned to at most two candidates by the missing-edge
//! arithmetic, then each candidate must survive three filters: owner degrees
//! in range, a graphical full degree multiset, and per-card feasibility of
//! matching card degrees against the putative degrees of the other vertices.
//! Exactly one survivor is required; anything else is surfaced as an error,
//! never silently guessed.

use crate::deck::{Card, PartialDeck};
use crate::error::ReconError;

/// Everything the cards reveal about the degree structure of the hidden
/// graph: edge count, per-card owner degrees, the hidden vertex's degree,
/// and the shape of the degree sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    /// Edge count of the original graph.
    pub m: u64,
    /// Degree of the vertex owning visible card i (same order as the deck's
    /// cards): m minus the card's edge count.
    pub owner_degrees: Vec<usize>,
    /// Degree of the hidden vertex.
    pub hidden_degree: usize,
    /// Maximum degree over all n vertices.
    pub max_degree: usize,
    /// Minimum degree over all n vertices.
    pub min_degree: usize,
    /// Number of vertices of maximum degree (hidden vertex included).
    pub max_degree_count: usize,
    /// Average degree 2m/n as a reduced fraction.
    pub avg_degree: (u64, u64),
    /// All values a with min < a < max realized by no vertex, ascending.
    pub holes: Vec<usize>,
}

impl DegreeProfile {
    /// The full degree multiset, descending (owners plus hidden vertex).
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut all = self.owner_degrees.clone();
        all.push(self.hidden_degree);
        all.sort_unstable_by(|a, b| b.cmp(a));
        all
    }
}

/// Degree of the vertex owning `card` given the edge count of the original
/// graph: every edge missing from the card is incident to the owner.
pub fn owner_degree(card: &Card, m: u64) -> Result<usize, ReconError> {
    let e = card.edge_count();
    if m < e {
        return Err(ReconError::NegativeDegree);
    }
    Ok((m - e) as usize)
}

/// Recovers the unique degree profile consistent with the deck.
///
/// Requires n >= 7; below that distinct graphs share n-1 cards with
/// different edge counts. A zero-survivor outcome means the input is not a
/// legitimate partial deck; multiple survivors are reported as
/// `AmbiguousDegreeSequence` (expected never to occur at n >= 7).
pub fn reconstruct_degrees(deck: &PartialDeck) -> Result<DegreeProfile, ReconError> {
    let n = deck.original_order();
    if n < 7 {
        return Err(ReconError::UnsupportedOrder(n));
    }
    let visible_edge_sum: u64 = deck.cards().iter().map(|c| c.edge_count()).sum();

    // Kelly's identity over the full deck leaves deg(v_n) = S - (n-3)m for a
    // partial deck, and 0 <= deg(v_n) <= n-1 pins m to at most two integers.
    let nm3 = (n - 3) as u64;
    let m_high = visible_edge_sum / nm3;
    let m_low = (visible_edge_sum.saturating_sub(n as u64 - 1)).div_ceil(nm3);

    let mut survivors: Vec<(u64, Vec<usize>, usize)> = Vec::new();
    for m in m_low..=m_high {
        if let Some(profile) = try_candidate(deck, m, visible_edge_sum) {
            survivors.push(profile);
        }
    }

    match survivors.len() {
        0 => Err(ReconError::InconsistentDeck),
        1 => {
            let (m, owner_degrees, hidden_degree) = survivors.pop().unwrap();
            Ok(build_profile(n, m, owner_degrees, hidden_degree))
        }
        _ => Err(ReconError::AmbiguousDegreeSequence {
            candidates: survivors.into_iter().map(|(m, _, _)| m).collect(),
        }),
    }
}

fn try_candidate(
    deck: &PartialDeck,
    m: u64,
    visible_edge_sum: u64,
) -> Option<(u64, Vec<usize>, usize)> {
    let n = deck.original_order();
    let hidden = (visible_edge_sum - (n as u64 - 3) * m) as usize;
    debug_assert!(hidden <= n - 1);

    // filter (a): every owner degree in [0, n-1]
    let mut owner_degrees = Vec::with_capacity(n - 1);
    for card in deck.cards() {
        let d = owner_degree(card, m).ok()?;
        if d > n - 1 {
            return None;
        }
        owner_degrees.push(d);
    }

    // filter (b): the full multiset must be graphical
    let mut all: Vec<usize> = owner_degrees.clone();
    all.push(hidden);
    if !is_graphical(&all) {
        return None;
    }

    // filter (c): per-card feasibility against the putative degrees
    let mut counts = vec![0i64; n]; // degree value -> multiplicity over all n vertices
    for &d in &all {
        counts[d] += 1;
    }
    for (card, &own) in deck.cards().iter().zip(&owner_degrees) {
        counts[own] -= 1;
        let ok = card_feasible(card, &counts, own, n);
        counts[own] += 1;
        if !ok {
            return None;
        }
    }

    // filters (d)-(f): the deck-wide appearance counts force the hidden
    // vertex's adjacency profile, which must be consistent on its own and
    // against the star-count identities
    if !hidden_profile_feasible(deck, &counts, hidden, n) {
        return None;
    }

    Some((m, owner_degrees, hidden))
}

/// Whole-deck filter. Appearances of card-degree t across the visible cards
/// come from degree-t vertices seen in full, degree-(t+1) vertices seen next
/// to their deleted neighbor, and the hidden vertex itself; the only
/// unknowns are x_d, the number of visible degree-d vertices adjacent to the
/// hidden vertex, and those telescope out of the appearance counts exactly.
/// The forced x_d must be in range, sum to the hidden degree, leave the
/// hidden card graphical, and satisfy the star-count identities (a k-star
/// lives on n-1-k cards and its total is a pure degree functional).
fn hidden_profile_feasible(deck: &PartialDeck, counts: &[i64], hidden: usize, n: usize) -> bool {
    // observed appearances of each card-degree value
    let mut observed = vec![0i64; n + 1];
    for card in deck.cards() {
        for v in 0..card.order() {
            observed[card.graph().degree(v)] += 1;
        }
    }
    // visible-vertex degree counts
    let mut visible = counts.to_vec();
    visible[hidden] -= 1;
    if visible[hidden] < 0 {
        return false;
    }

    let h = hidden as i64;
    let mut x = vec![0i64; n + 1];
    for t in (0..n).rev() {
        let vn_t = if t == hidden { (n - 1) as i64 - h } else { 0 }
            + if t + 1 == hidden { h } else { 0 };
        let next = if t + 1 < n { visible[t + 1] * (t as i64 + 1) } else { 0 };
        let c_t = observed[t] - visible[t] * (n as i64 - 2 - t as i64) - next - vn_t;
        x[t] = x[t + 1] + c_t;
        if x[t] < 0 || x[t] > visible[t] {
            return false;
        }
    }
    if x[0] != 0 || (0..n).map(|d| x[d]).sum::<i64>() != h {
        return false;
    }

    // hidden card: x_d vertices drop to degree d-1, the rest keep d
    let mut hidden_card: Vec<usize> = Vec::with_capacity(n - 1);
    for d in 0..n {
        for _ in 0..x[d] {
            hidden_card.push(d - 1);
        }
        for _ in 0..(visible[d] - x[d]) {
            hidden_card.push(d);
        }
    }
    if !is_graphical(&hidden_card) {
        return false;
    }

    // k-star identities for k = 2 (paths) and k = 3
    for k in [2usize, 3] {
        if n < k + 2 {
            continue;
        }
        let stars_g: i64 = (0..n).map(|d| counts[d] * choose(d, k)).sum();
        let stars_hidden: i64 = hidden_card.iter().map(|&d| choose(d, k)).sum();
        let observed_stars: i64 = deck
            .cards()
            .iter()
            .map(|card| {
                (0..card.order()).map(|v| choose(card.graph().degree(v), k)).sum::<i64>()
            })
            .sum();
        if observed_stars != (n as i64 - 1 - k as i64) * stars_g - stars_hidden {
            return false;
        }
    }
    true
}

fn choose(d: usize, k: usize) -> i64 {
    if k > d {
        return 0;
    }
    let mut num = 1i64;
    for i in 0..k {
        num = num * (d - i) as i64 / (i + 1) as i64;
    }
    num
}

/// Decides whether the card's degree sequence can arise from the putative
/// degrees of the other n-1 vertices, with exactly `own` of them adjacent to
/// the owner (showing one lower) and the rest showing their exact degree.
///
/// Card vertices of degree c can only absorb putative degrees c or c+1, so
/// the bipartite assignment decomposes along a path and the number of
/// "adjacent" matches at each degree value is forced by a running balance.
fn card_feasible(card: &Card, putative: &[i64], own: usize, n: usize) -> bool {
    let mut card_counts = vec![0i64; n]; // card-degree value -> count, values 0..=n-2
    for v in 0..card.order() {
        card_counts[card.graph().degree(v)] += 1;
    }
    let mut lowered = 0i64; // z_c: forced number of degree-(c+1) vertices showing c
    let mut lowered_total = 0i64;
    for c in 0..=(n - 2) {
        lowered = card_counts[c] - putative[c] + lowered;
        if lowered < 0 || lowered > card_counts[c] {
            return false;
        }
        lowered_total += lowered;
    }
    debug_assert_eq!(lowered, putative[n - 1]);
    lowered_total == own as i64
}

/// Erdos-Gallai test: even degree sum and the k prefix inequalities.
pub fn is_graphical(degrees: &[usize]) -> bool {
    let n = degrees.len();
    let mut d: Vec<u64> = degrees.iter().map(|&x| x as u64).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().any(|&x| x >= n as u64) {
        return false;
    }
    let total: u64 = d.iter().sum();
    if total % 2 != 0 {
        return false;
    }
    let mut prefix = 0u64;
    for k in 1..=n {
        prefix += d[k - 1];
        let tail: u64 = d[k..].iter().map(|&x| x.min(k as u64)).sum();
        if prefix > (k * (k - 1)) as u64 + tail {
            return false;
        }
    }
    true
}

fn build_profile(n: usize, m: u64, owner_degrees: Vec<usize>, hidden_degree: usize) -> DegreeProfile {
    let max_degree = owner_degrees.iter().copied().chain([hidden_degree]).max().unwrap();
    let min_degree = owner_degrees.iter().copied().chain([hidden_degree]).min().unwrap();
    let max_degree_count = owner_degrees
        .iter()
        .copied()
        .chain([hidden_degree])
        .filter(|&d| d == max_degree)
        .count();
    let mut present = vec![false; n];
    for &d in owner_degrees.iter().chain([&hidden_degree]) {
        present[d] = true;
    }
    let holes = ((min_degree + 1)..max_degree).filter(|&a| !present[a]).collect();
    let g = gcd(2 * m, n as u64);
    DegreeProfile {
        m,
        owner_degrees,
        hidden_degree,
        max_degree,
        min_degree,
        max_degree_count,
        avg_degree: (2 * m / g, n as u64 / g),
        holes,
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
