use std::path::{Path, PathBuf};

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = vec![];
    let mut err = vec![];
    let mut full = vec!["hmf"];
    full.extend_from_slice(args);
    let code = hmf_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn thread_count_does_not_change_output() {
    let c = config("sqrt2_level7.toml");
    let (a, out1, _) = run(&["eigen", "--config", &c, "--norm-bound", "60", "--threads", "1"]);
    let (b, out2, _) = run(&["eigen", "--config", &c, "--norm-bound", "60", "--threads", "2"]);
    assert_eq!((a, b), (0, 0));
    assert_eq!(out1, out2);
    assert!(!out1.contains("threads"));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache: PathBuf = dir.path().join("enum");
    let c = config("sqrt2_level7.toml");
    let args = ["frob", "--config", &c, "--primes", "3,17", "--cache", cache.to_str().unwrap()];
    let (a, cold, _) = run(&args);
    assert_eq!(a, 0);
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
    let (b, warm, _) = run(&args);
    assert_eq!(b, 0);
    assert_eq!(cold, warm);
    let (_, uncached, _) = run(&["frob", "--config", &c, "--primes", "3,17"]);
    assert_eq!(cold, uncached);
}

#[test]
fn exit_codes() {
    let c = config("sqrt2_level7.toml");
    let (code, _, err) = run(&["frob", "--config", &c, "--primes", "2"]);
    assert_eq!(code, 4, "{}", err);
    assert!(err.contains("ramified"));
    // the norm-7 primes divide the level
    let (code, _, _) = run(&["frob", "--config", &c, "--primes", "7"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frob", "--config", &c, "--primes", "9"]);
    assert_eq!(code, 2);
    // nothing to tabulate in a zero space
    let (code, out, _) = run(&["space", "--config", &config("trivial_char.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("dim = 0 (central character obstruction)"));
    let (code, _, _) = run(&["eigen", "--config", &config("trivial_char.toml")]);
    assert_eq!(code, 4);
    let (code, _, err) = run(&["eigen", "--config", "/nonexistent.toml"]);
    assert_eq!(code, 2, "{}", err);
    let (code, _, _) = run(&["eigen", "--config", &c, "--format", "xml"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "[level]\ngenerator = \"5 - 3w\"\n[character]\nkind = \"cubic\"\n").unwrap();
    let (code, _, err) = run(&["space", "--config", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("character.kind"), "{}", err);
    std::fs::write(&p, "[level]\ngenerator = \"5 - 3w\"\n[generators]\n17 = \"w + 5\"\n").unwrap();
    let (code, _, err) = run(&["eigen", "--config", p.to_str().unwrap(), "--norm-bound", "20"]);
    assert_eq!(code, 2);
    assert!(err.contains("generators.17"), "{}", err);
}

#[test]
fn json_output_is_exact() {
    let c = config("sqrt2_level7.toml");
    let (code, out, _) = run(&["eigen", "--config", &c, "--norm-bound", "18", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dim"], 2);
    let rows = v["systems"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["kind"], "inert");
    assert_eq!(rows[0]["t_text"], "(7w - 4)b");
    let t = &rows[0]["t"];
    assert_eq!(t["field_label"], "L");
    assert_eq!(t["basis"], serde_json::json!(["1", "w", "b", "wb"]));
    assert_eq!(t["coeffs"], serde_json::json!([["0", "1"], ["0", "1"], ["-4", "1"], ["7", "1"]]));
    assert_eq!(rows[1]["varpi1_text"], "2w + 5");
    assert_eq!(rows[1]["varpi2_text"], "-2w + 5");
    assert_eq!(rows[1]["t2"]["coeffs"], serde_json::json!([["-18", "1"], ["-8", "1"], ["0", "1"], ["0", "1"]]));
}

#[test]
fn csv_and_normalized_values() {
    let c = config("sqrt2_level7.toml");
    let (code, out, _) = run(&["eigen", "--config", &c, "--norm-bound", "18", "--format", "csv", "--precision", "64"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("system,norm,varpi1,t_varpi1,t_varpi2,tau1_re"));
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("1,17,2w + 5,(3w + 12)b,-8w - 18,"));
}

#[test]
fn direct_and_formula_routes_agree_at_small_split_primes() {
    let c = config("sqrt2_level7.toml");
    let (code, out, err) = run(&["frob", "--config", &c, "--primes", "17", "--p2-route", "both"]);
    assert_eq!(code, 0, "{}", err);
    assert!(out.contains("17 | split | X^4 + (150w + 264)bX^3"));
}

#[test]
fn parity_report() {
    let (code, out, _) = run(&["parity", "--k", "4,3", "--t=-7/4,-5/4"]);
    assert_eq!(code, 0);
    assert!(out.contains("paritious: no"));
    assert!(out.contains("E-paritious for blocks [[0, 1]]: yes"));
    assert!(out.contains("reasonable: yes, R = 1/2"));
    let (_, out, _) = run(&["parity", "--k", "4,3", "--blocks", "0;1"]);
    assert!(out.contains("E-paritious for blocks [[0], [1]]: no"));
    let (_, out, _) = run(&["parity", "--k", "4,4"]);
    assert!(out.contains("paritious: yes"));
    let (code, _, _) = run(&["parity", "--k", "4,3", "--blocks", "0;0"]);
    assert_eq!(code, 2);
}

#[test]
fn eisenstein_space() {
    let (code, out, _) = run(&["eigen", "--config", &config("eisenstein.toml"), "--norm-bound", "30"]);
    assert_eq!(code, 0);
    assert!(out.contains("\n17 | 2w + 5 | 18 | 18\n"));
    assert!(out.contains("\n9 | 3 | 10\n"));
}
