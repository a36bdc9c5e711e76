use std::path::{Path, PathBuf};
use std::process::Command as Process;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use triamalg::cli::{self, resolve_coset_cap, Command, Output, RunConfig, EXIT_ERROR, EXIT_FAILED, EXIT_OK};
use triamalg::diagram::{brown_triangle, DiagramFile};
use triamalg::joins::{random, SystemFile, TripleFile};
use triamalg::perm::DEFAULT_CLOSURE_CAP;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("amalg-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run_json(mut c: RunConfig) -> (i32, Value, String) {
    c.output = Output::Json;
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(&c, &mut out, &mut err);
    let v = if out.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&out).unwrap()
    };
    (code, v, String::from_utf8(err).unwrap())
}

fn with_file(command: Command, path: &Path) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.input_path = Some(path.to_path_buf());
    c
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn brown_five_with_angles_passes() {
    let mut c = RunConfig::new(Command::CheckTriangle);
    c.brown = Some(5);
    c.angles = true;
    let (code, v, _) = run_json(c);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["fillable"], true);
    assert_eq!(v["minimal"], true);
    let ns: Vec<&Value> = v["angles"].as_array().unwrap().iter().map(|a| &a["n"]["Exact"]).collect();
    assert_eq!(ns, [3, 2, 3]);
}

#[test]
fn diagram_file_round_trips_through_check_triangle() {
    let dir = scratch("diagram");
    let d = brown_triangle(5, DEFAULT_CLOSURE_CAP).unwrap();
    let text = serde_json::to_string(&DiagramFile::from_diagram(&d)).unwrap();
    let path = write(&dir, "brown5.json", &text);
    let (code, v, _) = run_json(with_file(Command::CheckTriangle, &path));
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["core_orders"], serde_json::json!([6, 6, 6]));
}

#[test]
fn bad_embedding_reports_failure() {
    let dir = scratch("bad-embedding");
    let d = brown_triangle(5, DEFAULT_CLOSURE_CAP).unwrap();
    let mut f = DiagramFile::from_diagram(&d);
    // Send the first edge generator to the identity: not injective.
    let id: Vec<u32> = (0..f.degree_ambient as u32).collect();
    let first = f.edges[0].map_into_first.keys().next().unwrap().clone();
    f.edges[0].map_into_first.insert(first, id);
    let path = write(&dir, "bad.json", &serde_json::to_string(&f).unwrap());
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(&with_file(Command::CheckTriangle, &path), &mut out, &mut err);
    assert!(code == EXIT_FAILED || code == EXIT_ERROR, "exit {code}");
}

#[test]
fn malformed_input_names_path_and_field() {
    let dir = scratch("malformed");
    let path = write(&dir, "cost.json", r#"{"space": {"weights": ["1/2", "half"]}, "relation": {"classes": [[0, 1]]}}"#);
    let (code, _, err) = run_json(with_file(Command::Cost, &path));
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("cost.json"), "{err}");
    assert!(err.contains("space.weights"), "{err}");

    let path = write(&dir, "triple.json", r#"{"space": {"weights": ["1/2", "1/2"]}, "R1": {"classes": [[0, 1]]}, "R2": {"classes": [[0], [1]]}, "R3": {"classes": [[0]]}}"#);
    let (code, _, err) = run_json(with_file(Command::JoinCheck, &path));
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("R3"), "{err}");

    let path = write(&dir, "broken.json", "{not json");
    let (code, _, err) = run_json(with_file(Command::Coset, &path));
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("broken.json"), "{err}");
}

#[test]
fn coset_cap_hit_is_inconclusive() {
    let mut c = with_file(Command::Coset, &data("collapsing.json"));
    c.cap_cosets = 5;
    let (code, v, _) = run_json(c);
    assert_eq!(code, EXIT_ERROR);
    assert_eq!(v["status"], "inconclusive");
    assert_eq!(v["index"], Value::Null);

    let (code, v, _) = run_json(with_file(Command::Coset, &data("collapsing.json")));
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["index"], 1);
}

#[test]
fn coset_cap_precedence() {
    assert_eq!(resolve_coset_cap(None, None).unwrap(), 1_000_000);
    assert_eq!(resolve_coset_cap(None, Some("500")).unwrap(), 500);
    assert_eq!(resolve_coset_cap(Some(7), Some("500")).unwrap(), 7);
    assert!(resolve_coset_cap(None, Some("lots")).is_err());
    assert!(resolve_coset_cap(Some(0), None).is_err());
}

#[test]
fn cost_file_kinds() {
    let dir = scratch("cost");
    let cases = [
        (r#"{"group_order": 6}"#, "cost", "5/6"),
        (r#"{"vertex_orders": [120, 720, 5040], "edge_orders": [24, 12, 120]}"#, "min", "2537/2520"),
        (
            r#"{"space": {"weights": ["1/3", "1/3", "1/3"]}, "graphing": {"generators": [{"pairs": [[0, 1], [1, 2]]}, {"pairs": [[0, 2]]}]}}"#,
            "cost",
            "1/1",
        ),
    ];
    for (i, (text, key, want)) in cases.into_iter().enumerate() {
        let path = write(&dir, &format!("c{i}.json"), text);
        let (code, v, err) = run_json(with_file(Command::Cost, &path));
        assert_eq!(code, EXIT_OK, "{text}: {err}");
        assert_eq!(v[key], want, "{text}");
    }
}

#[test]
fn join_check_certificate_on_four_cycle() {
    let dir = scratch("join");
    let path = write(
        &dir,
        "cycle.json",
        r#"{"space": {"weights": ["1/4","1/4","1/4","1/4"]},
            "R1": {"classes": [[0,1],[2,3]]}, "R2": {"classes": [[0,2],[1,3]]},
            "R3": {"classes": [[0],[1],[2],[3]]}}"#,
    );
    let (code, v, _) = run_json(with_file(Command::JoinCheck, &path));
    assert_eq!(code, EXIT_FAILED);
    assert_eq!(v["free"], false);
    assert_eq!(v["oracle_agrees"], true);
    assert!(v["witness"]["Loop"].is_object());
}

#[test]
fn replay_files_are_accepted_by_join_check() {
    let dir = scratch("replay");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..20 {
        let t = random::triple(&mut rng, 6);
        let p = write(&dir, &format!("t{i}.json"), &serde_json::to_string(&TripleFile::from_triple(&t)).unwrap());
        let (code, _, err) = run_json(with_file(Command::JoinCheck, &p));
        assert!(code == EXIT_OK || code == EXIT_FAILED, "{err}");
        let s = random::minimal_system(&mut rng, 6);
        let p = write(&dir, &format!("s{i}.json"), &serde_json::to_string(&SystemFile::from_system(&s)).unwrap());
        let (code, v, err) = run_json(with_file(Command::JoinCheck, &p));
        assert!(code == EXIT_OK || code == EXIT_FAILED, "{err}");
        assert_eq!(v["kind"], "system");
    }
}

#[test]
fn random_check_is_deterministic_and_clean() {
    let dir = scratch("random");
    let mut c = RunConfig::new(Command::RandomCheck);
    c.failure_dir = dir.join("failures");
    c.instances = 300;
    c.systems = 50;
    let (code, a, _) = run_json(c.clone());
    let (_, b, _) = run_json(c.clone());
    assert_eq!(code, EXIT_OK);
    assert_eq!(a, b);
    assert_eq!(a["failure_list"], serde_json::json!([]));
    c.seed = 1;
    let (_, other, _) = run_json(c);
    assert_ne!(a["triples"], other["triples"]);
}

#[test]
fn exhaustive_four_points_agrees_everywhere() {
    let mut c = RunConfig::new(Command::RandomCheck);
    c.exhaustive = true;
    c.points = 4;
    let (code, v, _) = run_json(c);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["triples"]["oracle_disagreements"], 0);
    assert!(v["triples"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn thompson_text_output_has_conclusion() {
    let mut c = RunConfig::new(Command::ThompsonCost);
    c.p_max = Some(20);
    let mut out = Vec::new();
    let code = cli::run(&c, &mut out, &mut Vec::new());
    assert_eq!(code, EXIT_OK);
    assert!(String::from_utf8(out).unwrap().contains("conclusion: cost = 1 by squeeze"));

    // Too short a chain to get within 1e-15.
    c.p_max = Some(10);
    let (code, v, _) = run_json(c);
    assert_eq!(code, EXIT_ERROR);
    assert_eq!(v["conclusion"], Value::Null);
}

#[test]
fn brown_range_rows() {
    let mut c = RunConfig::new(Command::Brown);
    c.p_max = Some(6);
    let (code, v, _) = run_json(c);
    assert_eq!(code, EXIT_OK);
    let rows = v["triangles"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["cost_bound"], "40367/40320");

    let mut c = RunConfig::new(Command::Brown);
    c.brown = Some(6);
    c.cap_closure = 1000;
    let (code, v, _) = run_json(c);
    assert_eq!(code, EXIT_ERROR);
    assert!(v["triangles"][0]["error"].is_string());
}

#[test]
fn angle_file_for_dihedral_subgroups() {
    // Two reflections in S3 generate it; <a> ∩ <b> is trivial and ab has
    // order 3, so the shortest kernel word has 3 syllables from each side.
    let dir = scratch("angle");
    let path = write(
        &dir,
        "angle.json",
        r#"{"degree": 3, "group": [[1,0,2],[0,2,1]], "a": [[1,0,2]], "b": [[0,2,1]]}"#,
    );
    let (code, v, err) = run_json(with_file(Command::Angle, &path));
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(v["n"]["Exact"], 3);
    assert_eq!(v["theta"], "π/3");
}

#[test]
fn binary_parses_flags_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_amalg");
    let out = Process::new(bin).args(["thompson-cost", "--p-max", "20", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["conclusion"], "cost = 1 by squeeze");

    let out = Process::new(bin).args(["coset"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Process::new(bin).args(["check-triangle", "--brown", "5", "--cap", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Process::new(bin)
        .args(["coset", "--file"])
        .arg(data("collapsing.json"))
        .env("AMALG_CAP_COSETS", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
