//! Decks of vertex-deleted cards with unlabeled-multiset semantics.
//!
//! A card keeps an arbitrary labeled representative plus its canonical
//! certificate; consumers may use the representative's structure but must be
//! invariant to it. The multiset is stored as a certificate-sorted list,
//! which makes serialization and comparison deterministic.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::canon::{canonical_certificate, CanonicalCertificate};
use crate::error::DeckError;
use crate::graph::{emit_graph6, parse_graph6, Graph};

/// One unlabeled card: an order n-1 induced subgraph of the original graph.
#[derive(Clone, Debug)]
pub struct Card {
    graph: Graph,
    certificate: CanonicalCertificate,
}

impl Card {
    pub fn new(graph: Graph) -> Card {
        let certificate = canonical_certificate(&graph);
        Card { graph, certificate }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn certificate(&self) -> &CanonicalCertificate {
        &self.certificate
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn edge_count(&self) -> u64 {
        self.graph.edge_count()
    }
}

/// All n cards of an order-n graph.
#[derive(Clone, Debug)]
pub struct FullDeck {
    original_order: usize,
    cards: Vec<Card>,
}

/// Any n-1 of the n cards of an unknown order-n graph. Card order within the
/// container carries no meaning; it is certificate-sorted for determinism.
#[derive(Clone, Debug)]
pub struct PartialDeck {
    original_order: usize,
    cards: Vec<Card>,
}

fn sort_cards(cards: &mut [Card]) {
    cards.sort_by(|a, b| a.certificate().cmp(b.certificate()));
}

impl FullDeck {
    pub fn original_order(&self) -> usize {
        self.original_order
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }
}

impl PartialDeck {
    /// Assembles a partial deck directly from cards. All cards must share
    /// one order n-1; used by deck file loading and by tests.
    pub fn from_cards(original_order: usize, mut cards: Vec<Card>) -> Result<PartialDeck, DeckError> {
        if original_order < 2 || cards.len() + 1 != original_order {
            return Err(DeckError::WrongCardCount {
                expected: original_order.saturating_sub(1),
                found: cards.len(),
            });
        }
        if cards.iter().any(|c| c.order() != original_order - 1) {
            return Err(DeckError::MixedOrders);
        }
        sort_cards(&mut cards);
        Ok(PartialDeck { original_order, cards })
    }

    pub fn original_order(&self) -> usize {
        self.original_order
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }
}

/// Deals the full deck of `g`: card i is `g` with vertex i deleted.
pub fn deal(g: &Graph) -> FullDeck {
    assert!(g.order() >= 2, "dealing needs at least 2 vertices");
    let mut cards: Vec<Card> = (0..g.order()).map(|v| Card::new(g.delete_vertex(v))).collect();
    sort_cards(&mut cards);
    FullDeck { original_order: g.order(), cards }
}

/// Removes one card isomorphic to `g - v` from the full deck of `g`.
pub fn hide(deck: &FullDeck, g: &Graph, v: usize) -> Result<PartialDeck, DeckError> {
    assert!(v < g.order());
    let target = canonical_certificate(&g.delete_vertex(v));
    let pos = deck
        .cards
        .iter()
        .position(|c| *c.certificate() == target)
        .ok_or(DeckError::CardNotFound)?;
    let mut cards = deck.cards.clone();
    cards.remove(pos);
    Ok(PartialDeck { original_order: deck.original_order, cards })
}

/// True iff the two card multisets have equal certificate multisets.
pub fn deck_equal(a: &[Card], b: &[Card]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut xs: Vec<&CanonicalCertificate> = a.iter().map(|c| c.certificate()).collect();
    let mut ys: Vec<&CanonicalCertificate> = b.iter().map(|c| c.certificate()).collect();
    xs.sort();
    ys.sort();
    xs == ys
}

/// Writes a partial deck: header `deck n=<n> cards=<k>`, then one graph6
/// line per card in certificate-sorted order, UTF-8 with LF endings.
pub fn save_deck(deck: &PartialDeck, path: &Path) -> Result<(), DeckError> {
    let mut out = String::new();
    out.push_str(&format!("deck n={} cards={}\n", deck.original_order, deck.cards.len()));
    for card in &deck.cards {
        out.push_str(&emit_graph6(card.graph()));
        out.push('\n');
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Reads a deck file written by [`save_deck`] (or by hand in the same
/// format) back into a partial deck.
pub fn load_deck(path: &Path) -> Result<PartialDeck, DeckError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| DeckError::MalformedFile("empty file".into()))?;
    let (n, declared) = parse_header(header)?;
    let cards: Vec<Card> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(Card::new(parse_graph6(l)?)))
        .collect::<Result<_, DeckError>>()?;
    if cards.len() != declared {
        return Err(DeckError::WrongCardCount { expected: declared, found: cards.len() });
    }
    PartialDeck::from_cards(n, cards)
}

fn parse_header(header: &str) -> Result<(usize, usize), DeckError> {
    let bad = |msg: &str| DeckError::MalformedFile(format!("{msg}: {header:?}"));
    let mut parts = header.split_whitespace();
    if parts.next() != Some("deck") {
        return Err(bad("header must start with 'deck'"));
    }
    let n = parts
        .next()
        .and_then(|p| p.strip_prefix("n="))
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| bad("missing n=<n>"))?;
    let k = parts
        .next()
        .and_then(|p| p.strip_prefix("cards="))
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| bad("missing cards=<k>"))?;
    if parts.next().is_some() {
        return Err(bad("trailing tokens in header"));
    }
    Ok((n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn deal_known_decks() {
        let k4_deck = deal(&Graph::complete(4));
        assert_eq!(k4_deck.cards().len(), 4);
        let k3_cert = canonical_certificate(&Graph::complete(3));
        assert!(k4_deck.cards().iter().all(|c| *c.certificate() == k3_cert));

        let c7_deck = deal(&Graph::cycle(7));
        let p6_cert = canonical_certificate(&Graph::path(6));
        assert!(c7_deck.cards().iter().all(|c| *c.certificate() == p6_cert));

        let star_deck = deal(&Graph::star(7));
        let leafless = canonical_certificate(&Graph::star(6));
        let centerless = canonical_certificate(&Graph::empty(6));
        let leafless_count =
            star_deck.cards().iter().filter(|c| *c.certificate() == leafless).count();
        let centerless_count =
            star_deck.cards().iter().filter(|c| *c.certificate() == centerless).count();
        assert_eq!((leafless_count, centerless_count), (6, 1));
    }

    #[test]
    fn hide_removes_one_matching_card() {
        let k4 = Graph::complete(4);
        let pd = hide(&deal(&k4), &k4, 0).unwrap();
        assert_eq!(pd.cards().len(), 3);

        let star = Graph::star(7);
        let pd = hide(&deal(&star), &star, 0).unwrap();
        let leafless = canonical_certificate(&Graph::star(6));
        assert!(pd.cards().iter().all(|c| *c.certificate() == leafless));

        let c7 = Graph::cycle(7);
        let pd = hide(&deal(&c7), &c7, 3).unwrap();
        assert_eq!(pd.cards().len(), 6);

        // inconsistent inputs: the deck of C_7 has no card of K_7
        assert!(matches!(
            hide(&deal(&c7), &Graph::complete(7), 0),
            Err(DeckError::CardNotFound)
        ));
    }

    #[test]
    fn deck_equality_is_isomorphism_invariant() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(3..=9);
            let g = random_graph(&mut rng, n, 0.5);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.relabeled(&perm);
            assert!(deck_equal(deal(&g).cards(), deal(&h).cards()));
        }
        assert!(!deck_equal(deal(&Graph::complete(4)).cards(), deal(&Graph::cycle(4)).cards()));
        // multiplicity differences matter
        let a = deal(&Graph::star(5));
        let b = deal(&Graph::star(5));
        let mut shrunk = b.cards().to_vec();
        shrunk.pop();
        assert!(!deck_equal(a.cards(), &shrunk));
    }

    #[test]
    fn hide_leaves_exactly_the_hidden_card_out() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..20 {
            let n = rng.gen_range(3..=9);
            let g = random_graph(&mut rng, n, 0.4);
            let full = deal(&g);
            for v in 0..n {
                let pd = hide(&full, &g, v).unwrap();
                let mut rest = pd.cards().to_vec();
                rest.push(Card::new(g.delete_vertex(v)));
                assert!(deck_equal(full.cards(), &rest));
            }
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dir = std::env::temp_dir().join(format!("deckrecon-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c7.deck");
        let c7 = Graph::cycle(7);
        let pd = hide(&deal(&c7), &c7, 0).unwrap();
        save_deck(&pd, &path).unwrap();
        let loaded = load_deck(&path).unwrap();
        assert_eq!(loaded.original_order(), 7);
        assert!(deck_equal(pd.cards(), loaded.cards()));
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn load_rejects_bad_files() {
        let dir = std::env::temp_dir().join(format!("deckrecon-badfiles-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();

        let short = dir.join("short.deck");
        fs::write(&short, "deck n=7 cards=5\nE???\nE???\nE???\nE???\nE???\n").unwrap();
        assert!(matches!(load_deck(&short), Err(DeckError::WrongCardCount { .. })));

        let mismatch = dir.join("mismatch.deck");
        fs::write(&mismatch, "deck n=7 cards=6\nE???\nE???\nE???\nE???\nE???\n").unwrap();
        assert!(matches!(load_deck(&mismatch), Err(DeckError::WrongCardCount { .. })));

        let mixed = dir.join("mixed.deck");
        let order6 = emit_graph6(&Graph::empty(6));
        let order5 = emit_graph6(&Graph::empty(5));
        fs::write(
            &mixed,
            format!("deck n=7 cards=6\n{order6}\n{order6}\n{order6}\n{order6}\n{order6}\n{order5}\n"),
        )
        .unwrap();
        assert!(matches!(load_deck(&mixed), Err(DeckError::MixedOrders)));

        let header = dir.join("header.deck");
        fs::write(&header, "cards n=7\n").unwrap();
        assert!(matches!(load_deck(&header), Err(DeckError::MalformedFile(_))));

        fs::remove_dir_all(&dir).ok();
    }
}
