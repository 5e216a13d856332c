mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use mischief::manifest::sha256_hex;
use mischief::synth::english_like_corpus;
use mischief::{perturb_batch, PerturbConfig};

fn mischief(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mischief"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = mischief(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

fn digest(path: &Path) -> String {
    sha256_hex(&std::fs::read(path).unwrap())
}

fn corpus_text(lines: usize) -> String {
    english_like_corpus(lines, 5).join("\n") + "\n"
}

fn perturb(input: &str, output: &str, extra: &[&str]) {
    let mut args = vec!["perturb", "--input", input, "--output", output];
    args.extend_from_slice(extra);
    ok(&args);
}

#[test]
fn perturb_repeats_byte_for_byte() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", &corpus_text(500));
    let (a, b) = (ws.arg("a.txt"), ws.arg("b.txt"));
    let flags = ["--p", "1", "--r", "0.5", "--seed", "13"];
    perturb(&input, &a, &flags);
    perturb(&input, &b, &flags);
    assert_eq!(digest(&ws.path("a.txt")), digest(&ws.path("b.txt")));
    assert_ne!(digest(&ws.path("a.txt")), digest(&ws.path("in.txt")));
}

#[test]
fn zero_rate_leaves_input_bytes() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", &corpus_text(300));
    perturb(&input, &ws.arg("out.txt"), &["--p", "1", "--r", "0", "--seed", "1"]);
    assert_eq!(digest(&ws.path("out.txt")), digest(&ws.path("in.txt")));
}

#[test]
fn rate_sweep_changes_more_lines_as_r_grows() {
    let ws = Workspace::new();
    let text = corpus_text(400);
    let input = ws.write("in.txt", &text);
    let mut changed = Vec::new();
    for r in ["0.25", "0.5", "0.75", "1"] {
        let out = ws.arg(&format!("r{r}.txt"));
        perturb(&input, &out, &["--p", "1", "--r", r, "--seed", "3"]);
        let produced = std::fs::read_to_string(&out).unwrap();
        changed.push(produced.lines().zip(text.lines()).filter(|(a, b)| a != b).count());
    }
    assert!(changed.windows(2).all(|w| w[0] <= w[1]), "{changed:?}");
    assert!(changed[0] > 0);
}

#[test]
fn manifest_records_config_and_digests() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", &corpus_text(50));
    let output = ws.arg("out.txt");
    perturb(&input, &output, &["--p", "0.5", "--r", "0.25", "--seed", "8", "--min-len", "5"]);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(ws.path("out.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["perturb"]["seed"], 8);
    assert_eq!(manifest["config"]["perturb"]["min_length"], 5);
    assert_eq!(manifest["inputs"][0]["sha256"], digest(&ws.path("in.txt")));
    assert_eq!(manifest["outputs"][0]["sha256"], digest(&ws.path("out.txt")));
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["command_line"].as_array().unwrap().len() > 5);
}

#[test]
fn perturb_never_touches_its_input() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", "some words here\n");
    let out = mischief(&["perturb", "--input", &input, "--output", &input, "--p", "1", "--r", "1", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(&input).unwrap(), "some words here\n");
}

#[test]
fn seed_is_required() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", "text\n");
    let out = mischief(&["perturb", "--input", &input, "--output", &ws.arg("o.txt"), "--p", "1", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn out_of_range_probability_is_a_usage_error() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", "text\n");
    let out = mischief(&["perturb", "--input", &input, "--output", &ws.arg("o.txt"), "--p", "1.5", "--r", "1", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn collide_reports_exact_fraction() {
    let v: Value = serde_json::from_str(&ok(&["collide", "--n", "5"])).unwrap();
    assert_eq!(v["exact"], "1/36");
    assert_eq!(v["agreement"], "1/6");
    let v: Value = serde_json::from_str(&ok(&["collide", "--n", "3"])).unwrap();
    assert_eq!(v["exact"], "1");
}

#[test]
fn collide_samples_words() {
    let v: Value = serde_json::from_str(&ok(&["collide", "--word", "seen", "--trials", "500"])).unwrap();
    assert_eq!(v["empirical"], 1.0);
    assert_eq!(v["enumerated"], "1");
    let v: Value = serde_json::from_str(&ok(&["collide", "--n", "6", "--trials", "2000", "--seed", "4"])).unwrap();
    assert_eq!(v["trials"], 2000);
    assert_eq!(v["enumerated"], "1/24");
    assert_eq!(mischief(&["collide", "--n", "2"]).status.code(), Some(2));
    assert_eq!(mischief(&["collide"]).status.code(), Some(1));
}

#[test]
fn bpe_train_and_apply() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", &corpus_text(300));
    let (t1, t2) = (ws.arg("t1.bpe"), ws.arg("t2.bpe"));
    ok(&["bpe", "train", "--input", &input, "--vocab-size", "300", "--output-table", &t1]);
    ok(&["bpe", "train", "--input", &input, "--vocab-size", "300", "--output-table", &t2]);
    assert_eq!(digest(&ws.path("t1.bpe")), digest(&ws.path("t2.bpe")));
    assert!(ws.path("t1.bpe.manifest.json").exists());

    let out = ws.arg("tok.txt");
    ok(&["bpe", "apply", "--input", &input, "--table", &t1, "--output", &out]);
    let original = std::fs::read_to_string(ws.path("in.txt")).unwrap();
    let tokenized = std::fs::read_to_string(&out).unwrap();
    for (a, b) in original.lines().zip(tokenized.lines()) {
        let rebuilt: String = b.split(' ').collect::<String>().replace("</w>", " ");
        assert_eq!(rebuilt.trim_end(), a);
    }
}

#[test]
fn divergence_of_identical_corpora_is_zero() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", &corpus_text(200));
    let copy = ws.write("copy.txt", &corpus_text(200));
    let v: Value = serde_json::from_str(&ok(&[
        "divergence", "--original", &input, "--perturbed", &copy, "--vocab-size", "200",
    ]))
    .unwrap();
    assert_eq!(v["report"]["changed_words"], 0);
    assert_eq!(v["report"]["mean_token_edit_distance"], 0.0);
    assert_eq!(v["vocabulary"]["source"], "clean");
}

#[test]
fn divergence_sweep_and_stats() {
    let ws = Workspace::new();
    let input = ws.write("in.txt", &corpus_text(200));
    let report = ws.arg("report.json");
    ok(&[
        "divergence", "--original", &input, "--sweep", "--r", "0,0.5,1", "--seed", "1,2",
        "--vocab-size", "300", "--stats", "--output-report", &report,
    ]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let sweep = v["sweep"].as_array().unwrap();
    assert_eq!(sweep.len(), 6);
    for seed in [1, 2] {
        let rates: Vec<f64> = sweep
            .iter()
            .filter(|e| e["seed"] == seed)
            .map(|e| e["report"]["changed_token_sequence_rate"].as_f64().unwrap())
            .collect();
        assert_eq!(rates[0], 0.0);
        assert!(rates.windows(2).all(|w| w[0] <= w[1]));
    }
    assert!(v["stats"]["mean_word_length"].as_f64().unwrap() > 2.0);
    assert!(ws.path("report.json.manifest.json").exists());
}

#[test]
fn misaligned_corpora_name_the_record() {
    let ws = Workspace::new();
    let a = ws.write("a.txt", "one two three\nfour five six\nseven eight\n");
    let b = ws.write("b.txt", "one two three\nfour five\nseven eight\n");
    let out = mischief(&["divergence", "--original", &a, "--perturbed", &b, "--vocab-size", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("record 1"), "{err}");
}

#[test]
fn malformed_tsv_is_a_data_error() {
    let ws = Workspace::new();
    let input = ws.write("in.tsv", "id\tsentence\tlabel\n1\tfine sentence\t0\n2\tmissing label\n");
    let out = mischief(&[
        "perturb", "--input", &input, "--output", &ws.arg("o.tsv"), "--format", "tsv", "--header",
        "--columns", "sentence", "--p", "1", "--r", "1", "--seed", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn tsv_ids_and_labels_survive() {
    let ws = Workspace::new();
    let input = ws.write("in.tsv", &common::glue_tsv(1_000, 12));
    let output = ws.arg("out.tsv");
    perturb(
        &input,
        &output,
        &["--format", "tsv", "--header", "--columns", "sentence", "--p", "1", "--r", "1", "--seed", "2"],
    );
    let a = std::fs::read_to_string(ws.path("in.tsv")).unwrap();
    let b = std::fs::read_to_string(&output).unwrap();
    let column = |text: &str, k: usize| -> Vec<String> {
        text.lines().map(|l| l.split('\t').nth(k).unwrap().to_owned()).collect()
    };
    assert_eq!(column(&a, 0), column(&b, 0));
    assert_eq!(column(&a, 2), column(&b, 2));
    assert_ne!(column(&a, 1), column(&b, 1));

    let refused = mischief(&[
        "perturb", "--input", &input, "--output", &ws.arg("x.tsv"), "--format", "tsv", "--header",
        "--columns", "label", "--p", "1", "--r", "1", "--seed", "2",
    ]);
    assert_eq!(refused.status.code(), Some(1));
}

#[test]
fn library_batch_matches_cli() {
    let ws = Workspace::new();
    let lines = english_like_corpus(120, 17);
    let input = ws.write("in.txt", &(lines.join("\n") + "\n"));
    let output = ws.arg("out.txt");
    perturb(&input, &output, &["--p", "0.7", "--r", "0.6", "--seed", "99", "--force-nonidentity"]);
    let config = PerturbConfig::new(0.7, 0.6, 99).unwrap().with_force_nonidentity(true);
    let expected = perturb_batch(&lines, &config).join("\n") + "\n";
    assert_eq!(std::fs::read_to_string(&output).unwrap(), expected);
}

#[test]
fn help_and_version_succeed() {
    assert!(ok(&["--help"]).contains("perturb"));
    assert!(ok(&["--version"]).contains(env!("CARGO_PKG_VERSION")));
}
