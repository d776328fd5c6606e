//! Reconstruction of clique counts and degree sequences from n-1
//! vertex-deleted cards of an unknown n-vertex graph, together with an
//! exhaustive small-order verifier that checks every reconstruction against
//! a brute-force oracle and measures how often the single residual clique
//! size r = n - l actually blocks reconstruction.
//!
//! The main entry points:
//!
//! * [`graph::Graph`] with exact clique counting and graph6 serialization;
//! * [`deck`] for dealing, hiding, and (de)serializing card multisets;
//! * [`degrees::reconstruct_degrees`] to recover the degree profile;
//! * [`recon::reconstruct_all`] for the per-size clique-count outcomes;
//! * [`verify`] for exhaustive and randomized oracle comparison.

pub mod canon;
pub mod deck;
pub mod degrees;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod recon;
pub mod verify;

pub use canon::{canonical_certificate, canonical_form, CanonicalCertificate};
pub use deck::{deal, deck_equal, hide, load_deck, save_deck, Card, FullDeck, PartialDeck};
pub use degrees::{reconstruct_degrees, DegreeProfile};
pub use error::{DeckError, GraphError, ReconError, VerifyError};
pub use graph::{emit_graph6, parse_graph6, Graph};
pub use recon::{reconstruct_all, Outcome, Reconstruction, Resolver};
pub use verify::{verify_exhaustive, verify_instance, verify_random, VerificationReport};
