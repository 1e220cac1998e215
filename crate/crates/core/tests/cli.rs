use std::path::Path;
use std::process::{Command, Output};

fn wignerlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wignerlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("WIGNERLAB_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const MINIMAL: &str = "ensemble = \"gaussian\"\ndimensions = [40]\nreplicas = 50\nseed = 2024\nchecks = [\"semicircle\"]\n";

#[test]
fn minimal_run_passes_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("min.toml"), MINIMAL).unwrap();
    let o = wignerlab(&["run", "min.toml"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(
        lines.next(),
        Some("check,n,statistic,value,tolerance,stderr,pass")
    );
    let ks = lines.find(|l| l.starts_with("semicircle,40,KS,")).unwrap();
    assert!(ks.ends_with(",pass"), "{ks}");

    let records = std::fs::read_to_string(dir.path().join("records.jsonl")).unwrap();
    let header: serde_json::Value = serde_json::from_str(records.lines().next().unwrap()).unwrap();
    assert_eq!(header["format"], "wigner-lab/records");
    assert_eq!(header["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(records.lines().count(), 51);
    let first: serde_json::Value = serde_json::from_str(records.lines().nth(1).unwrap()).unwrap();
    assert_eq!(first["n"], 40);
    assert_eq!(first["replica"], 0);
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("min.toml"), MINIMAL).unwrap();
    assert_eq!(
        wignerlab(&["run", "min.toml"], dir.path()).status.code(),
        Some(0)
    );
    let first = std::fs::read(dir.path().join("records.jsonl")).unwrap();
    assert_eq!(
        wignerlab(&["run", "min.toml", "--workers", "3"], dir.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        std::fs::read(dir.path().join("records.jsonl")).unwrap(),
        first
    );
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("min.toml"),
        format!("{MINIMAL}[output]\ndirectory = \"ignored\"\n"),
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_wignerlab"))
        .args(["run", "min.toml"])
        .current_dir(dir.path())
        .env("WIGNERLAB_OUTPUT_DIR", "from_env")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("from_env/records.jsonl").exists());
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn invalid_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "negative_t",
            format!("{MINIMAL}edge_times = [-1]\n"),
            "edge_times",
        ),
        ("unknown_key", format!("{MINIMAL}colour = 3\n"), "colour"),
        ("no_seed", MINIMAL.replace("seed = 2024\n", ""), "seed"),
        (
            "bad_check",
            MINIMAL.replace("semicircle", "circle"),
            "checks",
        ),
        (
            "bad_ensemble",
            MINIMAL.replace("\"gaussian\"", "\"cauchy\""),
            "ensemble",
        ),
        (
            "few_replicas",
            format!("{MINIMAL}functions = [{{kind = \"exp\", order = 8}}]\n")
                .replace("[\"semicircle\"]", "[\"independence\"]"),
            "replicas",
        ),
    ];
    for (name, text, key) in cases {
        let file = format!("{name}.toml");
        std::fs::write(dir.path().join(&file), text).unwrap();
        let o = wignerlab(&["run", &file], dir.path());
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
        assert!(stderr(&o).contains(key), "{name}: {}", stderr(&o));
    }
    let o = wignerlab(&["run", "missing.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_runs_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("big.toml"),
        MINIMAL.replace("[40]", "[5000]"),
    )
    .unwrap();
    let o = wignerlab(&["run", "big.toml"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn words_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let o = wignerlab(&["words", "dyck", "--k", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);

    let o = wignerlab(&["words", "merge", "3,1,2,3", "4,1,2,4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("4,1,2,3,1,2,4"));
    assert!(out.lines().any(|l| l == "multiset: ok"));

    let o = wignerlab(&["words", "classify", "1,2,1,2,1"], dir.path());
    assert_eq!(stdout(&o).trim(), "critical_weak_wigner");

    let o = wignerlab(&["words", "enumerate", "--max-length", "5"], dir.path());
    let out = stdout(&o);
    assert_eq!(
        out.lines().next(),
        Some("length,general,weak_wigner,wigner,critical_weak_wigner,total")
    );
    assert_eq!(out.lines().count(), 6);

    for bad in [
        vec!["words", "classify", "1,,2"],
        vec!["words", "merge", "1,2,1", "a"],
    ] {
        assert_eq!(
            wignerlab(&bad, dir.path()).status.code(),
            Some(2),
            "{bad:?}"
        );
    }
    let o = wignerlab(&["words", "merge", "1,2,1", "3,4,3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let o = wignerlab(
        &[
            "oracle", "--n", "4", "--k", "2", "--dist", "gaussian", "--method", "both",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "n,k,value,method\n4,2,1,direct\n4,2,1,classes\n4,2,0,abs_diff\n"
    );

    let o = wignerlab(&["oracle", "--n", "3", "--k", "3"], dir.path());
    assert_eq!(stdout(&o).lines().nth(1), Some("3,3,0,direct"));

    let o = wignerlab(&["oracle", "--n", "2", "--k", "20"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("capacity"), "{}", stderr(&o));

    assert_eq!(
        wignerlab(&["oracle", "--n", "2"], dir.path()).status.code(),
        Some(2)
    );
}
