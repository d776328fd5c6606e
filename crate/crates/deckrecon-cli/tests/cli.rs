//! End-to-end tests of the installed binary: deal a deck, read it back
//! through degrees and cliques, and check the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn deckrecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deckrecon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("deckrecon-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn deal_degrees_cliques_pipeline() {
    let dir = tmpdir("pipeline");
    let deck = dir.join("c7.deck");
    // C_7 in graph6
    let out = deckrecon(&["deal", "F?AZo", "--hide", "2", "--out", deck.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&deck).unwrap();
    assert!(text.starts_with("deck n=7 cards=6\n"), "{text}");
    assert_eq!(text.lines().count(), 7);

    let out = deckrecon(&["degrees", deck.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["m"], 7);
    assert_eq!(v["hidden_degree"], 2);
    assert_eq!(v["delta"], 2);
    assert_eq!(v["ell"], 7);

    let out = deckrecon(&["cliques", deck.to_str().unwrap(), "--all"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let outcomes = v["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 7);
    assert_eq!(outcomes[1]["count"], 7); // r = 2
    assert_eq!(outcomes[2]["count"], 0); // r = 3

    let out = deckrecon(&["cliques", deck.to_str().unwrap(), "--r", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 1);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn hide_all_writes_every_deck() {
    let dir = tmpdir("hideall");
    let out = deckrecon(&["deal", "F?AZo", "--hide-all", "--out-dir", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let decks = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(decks, 7);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // 2: malformed graph6
    let out = deckrecon(&["deal", "@@not-graph6", "--hide", "0", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));

    // 3: degree reconstruction below order 7
    let dir = tmpdir("exitcodes");
    let deck6 = dir.join("c6.deck");
    let out = deckrecon(&["deal", "EhEG", "--hide", "0", "--out", deck6.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = deckrecon(&["degrees", deck6.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    // 3: exhaustive verification without a corpus beyond the built-in range
    let out = deckrecon(&["verify", "--n", "9"]);
    assert_eq!(out.status.code(), Some(3));

    // 2: missing deck file
    let out = deckrecon(&["degrees", "/nonexistent.deck"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_random_small() {
    let dir = tmpdir("verify");
    let json_path = dir.join("report.json");
    let csv_path = dir.join("report.csv");
    let out = deckrecon(&[
        "verify",
        "--random",
        "9",
        "25",
        "0.5",
        "7",
        "--json",
        json_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 9);
    assert_eq!(v["totals"]["instances"], 25);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);
    let file_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(file_json["totals"], v["totals"]);
    assert!(std::fs::read_to_string(&csv_path).unwrap().starts_with("metric,value\n"));
    std::fs::remove_dir_all(&dir).ok();
}
