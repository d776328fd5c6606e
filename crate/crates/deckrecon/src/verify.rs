//! Exhaustive and randomized verification of the reconstruction pipeline
//! against the brute-force oracle.
//!
//! Instances run in parallel and reduce into an order-independent report:
//! histograms are sorted maps and instance lists are sorted, so a fixed seed
//! or corpus yields the same report bytes regardless of scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::deck::{deal, hide};
use crate::degrees::reconstruct_degrees;
use crate::error::VerifyError;
use crate::graph::{emit_graph6, parse_graph6, Graph};
use crate::oracle::{brute_force_kr, enumerate_graphs};
use crate::recon::{reconstruct_all, Outcome};

/// A clique size that ended as two candidates, with the ground truth.
#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwoCandidateRow {
    pub graph6: String,
    pub hidden: usize,
    pub r: usize,
    pub low: u64,
    pub high: u64,
    pub truth: u64,
}

/// Any disagreement between the pipeline and ground truth.
#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct MismatchRow {
    pub graph6: String,
    pub hidden: usize,
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Default, PartialEq, Eq)]
pub struct Totals {
    pub graphs: u64,
    pub instances: u64,
    pub rows: u64,
    pub determined: u64,
    pub two_candidate: u64,
}

/// Aggregate result of a verification sweep. Serialized field order is part
/// of the report contract.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub totals: Totals,
    pub resolver_histogram: BTreeMap<String, u64>,
    pub two_candidates: Vec<TwoCandidateRow>,
    pub mismatches: Vec<MismatchRow>,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Two-line CSV summary plus one line per resolver.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        let _ = writeln!(out, "n,{}", self.n);
        let _ = writeln!(out, "graphs,{}", self.totals.graphs);
        let _ = writeln!(out, "instances,{}", self.totals.instances);
        let _ = writeln!(out, "rows,{}", self.totals.rows);
        let _ = writeln!(out, "determined,{}", self.totals.determined);
        let _ = writeln!(out, "two_candidates,{}", self.totals.two_candidate);
        let _ = writeln!(out, "mismatches,{}", self.mismatches.len());
        let _ = writeln!(out, "seconds,{}", self.seconds);
        for (resolver, hits) in &self.resolver_histogram {
            let _ = writeln!(out, "resolver.{resolver},{hits}");
        }
        out
    }
}

/// Outcome of checking one (graph, hidden vertex) instance for every r.
#[derive(Clone, Debug, Default)]
pub struct InstanceRecord {
    pub resolver_hits: BTreeMap<String, u64>,
    pub two_candidates: Vec<TwoCandidateRow>,
    pub mismatches: Vec<MismatchRow>,
}

/// Runs degree and clique reconstruction on the partial deck that hides
/// `hidden`, comparing everything against ground truth computed from `g`.
/// Requires n >= 7. Mismatches are recorded, never thrown.
pub fn verify_instance(g: &Graph, hidden: usize) -> InstanceRecord {
    let n = g.order();
    let graph6 = emit_graph6(g);
    let mut record = InstanceRecord::default();
    let mismatch = |kind: &str, detail: String| MismatchRow {
        graph6: graph6.clone(),
        hidden,
        kind: kind.to_string(),
        detail,
    };

    let full = deal(g);
    let deck = match hide(&full, g, hidden) {
        Ok(d) => d,
        Err(e) => {
            record.mismatches.push(mismatch("hide_failed", e.to_string()));
            return record;
        }
    };

    let profile = match reconstruct_degrees(&deck) {
        Ok(p) => p,
        Err(e) => {
            record.mismatches.push(mismatch("degree_error", e.to_string()));
            return record;
        }
    };
    if profile.m != g.edge_count() {
        record
            .mismatches
            .push(mismatch("edge_count", format!("got {}, truth {}", profile.m, g.edge_count())));
    }
    let mut true_degrees = g.degrees();
    true_degrees.sort_unstable_by(|a, b| b.cmp(a));
    if profile.degree_multiset() != true_degrees {
        record.mismatches.push(mismatch(
            "degree_multiset",
            format!("got {:?}, truth {:?}", profile.degree_multiset(), true_degrees),
        ));
    }
    if profile.hidden_degree != g.degree(hidden) {
        record.mismatches.push(mismatch(
            "hidden_degree",
            format!("got {}, truth {}", profile.hidden_degree, g.degree(hidden)),
        ));
    }

    let rec = match reconstruct_all(&deck, &profile) {
        Ok(r) => r,
        Err(e) => {
            record.mismatches.push(mismatch("recon_error", e.to_string()));
            return record;
        }
    };

    let blocked_r = n - profile.max_degree_count;
    for (r, outcome) in rec.iter() {
        let truth = brute_force_kr(g, r).expect("oracle guard admits n <= 16");
        match outcome {
            Outcome::Determined { count, resolver } => {
                *record.resolver_hits.entry(resolver.name().to_string()).or_insert(0) += 1;
                if *count != truth {
                    record.mismatches.push(mismatch(
                        "clique_count",
                        format!("r = {r}: resolver {resolver} got {count}, truth {truth}"),
                    ));
                }
            }
            Outcome::TwoCandidates { low, high } => {
                record.two_candidates.push(TwoCandidateRow {
                    graph6: graph6.clone(),
                    hidden,
                    r,
                    low: *low as u64,
                    high: *high as u64,
                    truth: truth as u64,
                });
                if r != blocked_r {
                    record.mismatches.push(mismatch(
                        "two_candidates_wrong_r",
                        format!("r = {r} but n - l = {blocked_r}"),
                    ));
                }
                if truth != *low && truth != *high {
                    record.mismatches.push(mismatch(
                        "two_candidates_miss",
                        format!("r = {r}: truth {truth} not in {{{low}, {high}}}"),
                    ));
                }
            }
        }
    }
    record
}

/// Verifies a list of (graph, hidden vertex) instances in parallel and
/// reduces the records into a deterministic report.
pub fn verify_samples(n: usize, instances: &[(Graph, usize)], graphs: u64) -> VerificationReport {
    let start = Instant::now();
    let records: Vec<InstanceRecord> =
        instances.par_iter().map(|(g, hidden)| verify_instance(g, *hidden)).collect();

    let mut resolver_histogram: BTreeMap<String, u64> = BTreeMap::new();
    let mut two_candidates = Vec::new();
    let mut mismatches = Vec::new();
    let mut determined = 0u64;
    for rec in records {
        for (k, v) in rec.resolver_hits {
            determined += v;
            *resolver_histogram.entry(k).or_insert(0) += v;
        }
        two_candidates.extend(rec.two_candidates);
        mismatches.extend(rec.mismatches);
    }
    two_candidates.sort();
    mismatches.sort();
    let totals = Totals {
        graphs,
        instances: instances.len() as u64,
        rows: determined + two_candidates.len() as u64,
        determined,
        two_candidate: two_candidates.len() as u64,
    };
    VerificationReport {
        n,
        totals,
        resolver_histogram,
        two_candidates,
        mismatches,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Checks every isomorphism class of order n against every hidden vertex.
/// Orders above 7 need a corpus file of graph6 lines, one class per line.
pub fn verify_exhaustive(n: usize, corpus: Option<&Path>) -> Result<VerificationReport, VerifyError> {
    if n > 16 {
        return Err(VerifyError::TooLarge(format!(
            "exhaustive verification is oracle-bound to n <= 16, got {n}"
        )));
    }
    let classes: Vec<Graph> = match corpus {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let mut graphs = Vec::new();
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let g = parse_graph6(line)?;
                if g.order() != n {
                    return Err(VerifyError::TooLarge(format!(
                        "corpus line has order {}, expected {n}",
                        g.order()
                    )));
                }
                graphs.push(g);
            }
            graphs
        }
        None => enumerate_graphs(n)?,
    };
    let instances: Vec<(Graph, usize)> =
        classes.iter().flat_map(|g| (0..n).map(move |v| (g.clone(), v))).collect();
    Ok(verify_samples(n, &instances, classes.len() as u64))
}

/// Erdos-Renyi graph with edge probability `p` drawn from `rng`.
pub fn sample_gnp(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
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

/// Verifies `samples` seeded random graphs with one random hidden vertex
/// each. The ChaCha stream makes reports reproducible across platforms.
pub fn verify_random(
    n: usize,
    samples: usize,
    edge_probability: f64,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if n > 16 {
        return Err(VerifyError::TooLarge(format!(
            "randomized verification is oracle-bound to n <= 16, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances: Vec<(Graph, usize)> = (0..samples)
        .map(|_| {
            let g = sample_gnp(&mut rng, n, edge_probability);
            let hidden = rng.gen_range(0..n);
            (g, hidden)
        })
        .collect();
    Ok(verify_samples(n, &instances, samples as u64))
}
