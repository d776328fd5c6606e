//! deckrecon: reconstruct clique counts and degree sequences from n-1
//! vertex-deleted cards, and verify the pipeline against a brute-force
//! oracle.
//!
//! Exit codes: 0 success, 2 input error, 3 unsupported or infeasible
//! request, 4 internal contradiction (soundness alarm) or verification
//! mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use deckrecon::deck::{deal, hide, load_deck, save_deck};
use deckrecon::degrees::reconstruct_degrees;
use deckrecon::error::{DeckError, GraphError, ReconError, VerifyError};
use deckrecon::graph::parse_graph6;
use deckrecon::recon::{reconstruct_all, Outcome};
use deckrecon::verify::{verify_exhaustive, verify_random, VerificationReport};

#[derive(Parser)]
#[command(name = "deckrecon", version, about = "clique-count and degree reconstruction from n-1 cards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deal the cards of a graph6-encoded graph into deck files.
    Deal(DealArgs),
    /// Recover the degree profile of a deck file as JSON.
    Degrees {
        /// Deck file produced by `deal` (or in the same format).
        deckfile: PathBuf,
    },
    /// Reconstruct clique counts of a deck file as JSON.
    Cliques(CliquesArgs),
    /// Check reconstruction against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DealArgs {
    /// The graph, as a single graph6 line.
    graph6: String,
    /// Hide this vertex and write one deck file to --out.
    #[arg(long, conflicts_with = "hide_all", required_unless_present = "hide_all")]
    hide: Option<usize>,
    /// Write one deck file per hidden vertex into --out-dir.
    #[arg(long)]
    hide_all: bool,
    /// Output deck file (with --hide).
    #[arg(long, required_unless_present = "hide_all")]
    out: Option<PathBuf>,
    /// Output directory (with --hide-all); files are named deck_hide<v>.deck.
    #[arg(long, required_if_eq("hide_all", "true"))]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CliquesArgs {
    deckfile: PathBuf,
    /// Report a single clique size.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    r: Option<usize>,
    /// Report every clique size 1..=n.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exhaustive sweep over every isomorphism class of this order.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    n: Option<usize>,
    /// Corpus of graph6 lines for orders the built-in enumerator lacks.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Randomized sweep: <N> <SAMPLES> <EDGE_PROBABILITY> <SEED>.
    #[arg(long, num_args = 4, value_names = ["N", "SAMPLES", "P", "SEED"])]
    random: Option<Vec<String>>,
    /// Also write the JSON report here (it always goes to stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write a CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Process failure with the exit code the shell sees.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Failure {
        Failure::new(2, e.to_string())
    }
}

impl From<DeckError> for Failure {
    fn from(e: DeckError) -> Failure {
        Failure::new(2, e.to_string())
    }
}

impl From<ReconError> for Failure {
    fn from(e: ReconError) -> Failure {
        let code = match e {
            ReconError::UnsupportedOrder(_) | ReconError::AmbiguousDegreeSequence { .. } => 3,
            ReconError::InconsistentDeck
            | ReconError::NegativeDegree
            | ReconError::NonDivisible => 2,
            ReconError::IdentificationAmbiguous | ReconError::InternalContradiction(_) => 4,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        let code = match e {
            VerifyError::TooLarge(_) => 3,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(2, e.to_string())
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("DECKRECON_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("deckrecon: ignoring invalid DECKRECON_THREADS={threads}");
            }
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Deal(args) => cmd_deal(args),
        Command::Degrees { deckfile } => cmd_degrees(&deckfile),
        Command::Cliques(args) => cmd_cliques(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("deckrecon: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_deal(args: DealArgs) -> Result<(), Failure> {
    let g = parse_graph6(&args.graph6)?;
    if g.order() < 2 {
        return Err(Failure::new(2, "dealing needs at least 2 vertices"));
    }
    let full = deal(&g);
    if args.hide_all {
        let dir = args.out_dir.expect("clap enforces --out-dir with --hide-all");
        std::fs::create_dir_all(&dir)?;
        for v in 0..g.order() {
            let deck = hide(&full, &g, v)?;
            save_deck(&deck, &dir.join(format!("deck_hide{v}.deck")))?;
        }
        println!("wrote {} deck files to {}", g.order(), dir.display());
    } else {
        let v = args.hide.expect("clap enforces --hide without --hide-all");
        if v >= g.order() {
            return Err(Failure::new(2, format!("vertex {v} out of range for order {}", g.order())));
        }
        let out = args.out.expect("clap enforces --out with --hide");
        let deck = hide(&full, &g, v)?;
        save_deck(&deck, &out)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_degrees(deckfile: &Path) -> Result<(), Failure> {
    let deck = load_deck(deckfile)?;
    let profile = reconstruct_degrees(&deck)?;
    let value = json!({
        "m": profile.m,
        "degrees": profile.degree_multiset(),
        "hidden_degree": profile.hidden_degree,
        "delta": profile.max_degree,
        "ell": profile.max_degree_count,
        "holes": profile.holes,
    });
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
    Ok(())
}

fn cmd_cliques(args: CliquesArgs) -> Result<(), Failure> {
    let deck = load_deck(&args.deckfile)?;
    let n = deck.original_order();
    if let Some(r) = args.r {
        if !(1..=n).contains(&r) {
            return Err(Failure::new(3, format!("clique size {r} out of range 1..={n}")));
        }
    }
    let profile = reconstruct_degrees(&deck)?;
    let rec = reconstruct_all(&deck, &profile)?;
    let rows: Vec<Value> = rec
        .iter()
        .filter(|(r, _)| args.all || Some(*r) == args.r)
        .map(|(r, outcome)| match outcome {
            Outcome::Determined { count, resolver } => json!({
                "r": r,
                "status": "determined",
                "count": u64::try_from(*count).expect("counts at n <= 62 fit u64"),
                "resolver": resolver.name(),
            }),
            Outcome::TwoCandidates { low, high } => json!({
                "r": r,
                "status": "two_candidates",
                "low": u64::try_from(*low).unwrap(),
                "high": u64::try_from(*high).unwrap(),
            }),
        })
        .collect();
    let value = json!({ "n": n, "outcomes": rows });
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let report: VerificationReport = if let Some(spec) = &args.random {
        let parse = |i: usize, what: &str| {
            spec[i]
                .parse::<f64>()
                .map_err(|_| Failure::new(2, format!("bad {what}: {:?}", spec[i])))
        };
        let n = parse(0, "order")? as usize;
        let samples = parse(1, "sample count")? as usize;
        let p = parse(2, "edge probability")?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Failure::new(2, format!("edge probability {p} outside [0, 1]")));
        }
        let seed = parse(3, "seed")? as u64;
        verify_random(n, samples, p, seed)?
    } else {
        let n = args.n.expect("clap enforces --n without --random");
        verify_exhaustive(n, args.corpus.as_deref())?
    };

    let json = report.to_json();
    println!("{json}");
    if let Some(path) = &args.json {
        std::fs::write(path, &json)?;
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, report.to_csv())?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::new(4, format!("{} mismatches against the oracle", report.mismatches.len())))
    }
}
