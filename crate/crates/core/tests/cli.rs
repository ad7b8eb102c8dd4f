use std::path::Path;
use std::process::Command;

use kassign::cli::{self, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use tempfile::TempDir;

const EXAMPLE1: &str = "max 4 4\n-inf 8 5 0\n10 8 5 -inf\n8 0 5 4\n5 4 -inf -inf\n";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kassign").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn line<'a>(out: &'a str, prefix: &str) -> &'a str {
    out.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no `{prefix}` line in:\n{out}"))
}

#[test]
fn solve_example1_every_algorithm() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "example1.txt", EXAMPLE1);
    for algo in ["brute", "ssp", "gk", "gk-fill", "auto"] {
        let (code, out, _) = run(&["--algo", algo, "solve", &f]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(line(&out, "omega:"), "omega: 0 10 18 23 23", "{algo}");
        assert_eq!(line(&out, "polynomial:"), "polynomial: x^4 (+) 10x^3 (+) 18x^2 (+) 23x (+) 23");
        assert_eq!(line(&out, "singular values:"), "singular values: (10,1) (8,1) (5,1) (0,1)");
        assert_eq!(line(&out, "1:"), "1: (2,1)");
        assert_eq!(line(&out, "2:"), "2: (1,2) (2,1)");
    }
}

#[test]
fn solve_zero_two_by_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tiny.txt", "max 2 2\n0 0\n0 0\n");
    let (code, out, _) = run(&["--algo", "brute", "solve", &f]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(line(&out, "omega:"), "omega: 0 0 0");
    let (_, out, _) = run(&["--algo", "gk", "solve", &f]);
    assert_eq!(line(&out, "terms:"), "terms: E S E");
    assert!(!out.contains("\n1: "), "gk alone does not report k=1 here:\n{out}");
}

#[test]
fn min_flag_negates_round_trip() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.txt", "max 2 2\n1 2\n3 0\n");
    let neg = write(&dir, "neg.txt", "max 2 2\n-1 -2\n-3 0\n");
    let (code, out_min, _) = run(&["--algo", "ssp", "--min", "solve", &f]);
    assert_eq!(code, EXIT_OK);
    let (_, out_neg, _) = run(&["--algo", "ssp", "solve", &neg]);
    let vals = |s: &str| -> Vec<String> {
        line(s, "omega:").split_whitespace().skip(1).map(str::to_string).collect()
    };
    let negated: Vec<String> = vals(&out_neg)
        .iter()
        .map(|v| if v == "0" { v.clone() } else if let Some(p) = v.strip_prefix('-') { p.to_string() } else { format!("-{v}") })
        .collect();
    assert_eq!(vals(&out_min), negated);
    assert_eq!(vals(&out_min), vec!["0", "0", "1"]);
    assert!(out_min.starts_with("instance: min 2x2"));
}

#[test]
fn rectangular_min_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "r.txt", "min 2 3\n1 2 inf\n3 0 4\n");
    let (code, out, _) = run(&["--algo", "gk-fill", "solve", &f]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(line(&out, "omega:"), "omega: 0 0 1 inf");
}

#[test]
fn json_and_text_agree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "q.txt", "max 3 3\n0.5 -inf -inf\n-inf 0.25 -inf\n1 1 1\n");
    let (_, text, _) = run(&["--algo", "gk-fill", "solve", &f]);
    let (code, json, _) = run(&["--algo", "gk-fill", "--format", "json", "solve", &f]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["schema"], 1);
    let omegas: Vec<String> = v["omegas"].as_array().unwrap().iter().map(|o| o.as_str().unwrap().to_string()).collect();
    assert_eq!(format!("omega: {}", omegas.join(" ")), line(&text, "omega:"));
    assert!(omegas.iter().any(|o| o.contains('/')), "fractions expected in {omegas:?}");
    assert_eq!(format!("polynomial: {}", v["polynomial"].as_str().unwrap()), line(&text, "polynomial:"));
    let svs: Vec<String> = v["singular_values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| format!("({},{})", s["value"].as_str().unwrap(), s["multiplicity"]))
        .collect();
    assert_eq!(format!("singular values: {}", svs.join(" ")), line(&text, "singular values:"));
    assert!(v["times"]["gk_seconds"].as_f64().unwrap() >= 0.0);
    assert!(v["times"]["fill_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn trace_file_lines() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "one.txt", "max 1 1\n3\n");
    let tr = dir.path().join("trace.txt");
    let (code, _, _) = run(&["--algo", "gk", "--trace", tr.to_str().unwrap(), "solve", &f]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&tr).unwrap(), "PIVOT q=u1 e=v1->u1 key=3\nCYCLE b=3 d=1 k=1\n");
    let (code, _, err) = run(&["--algo", "ssp", "--trace", tr.to_str().unwrap(), "solve", &f]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--trace"));
}

#[test]
fn verify_agreement_and_fault() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "example1.txt", EXAMPLE1);
    let (code, out, _) = run(&["verify", &f]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, _, err) = run(&["verify", &f, "--inject-fault", "2"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(err.contains("k=2"), "{err}");
    let (code, out, _) = run(&["--seed", "3", "verify", "--count", "200", "-n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("200 instance"));
    let (code, _, _) = run(&["verify", &f, "--solvers", "ssp"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn gen_is_deterministic() {
    let (code, a, _) = run(&["--seed", "1", "gen", "-n", "4", "--lo", "0", "--hi", "9"]);
    assert_eq!(code, EXIT_OK);
    let (_, b, _) = run(&["--seed", "1", "gen", "-n", "4", "--lo", "0", "--hi", "9"]);
    assert_eq!(a, b);
    let spec = kassign::instance::parse(&a).unwrap();
    assert_eq!((spec.rows, spec.cols), (4, 4));

    let (_, all_absent, _) = run(&["gen", "-n", "3", "--density", "1"]);
    let body: Vec<&str> = all_absent.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert!(body.iter().all(|l| l.split_whitespace().all(|t| t == "-inf")), "{all_absent}");

    let (code, _, _) = run(&["gen", "-n", "0"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn poly_output() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "example1.txt", EXAMPLE1);
    let (code, out, _) = run(&["poly", &f]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "polynomial: x^4 (+) 10x^3 (+) 18x^2 (+) 23x (+) 23\nroots: (10,1) (8,1) (5,1) (0,1)\nterms: E E E E E\n"
    );
}

#[test]
fn bench_small_range_reports_few_indices() {
    let (code, out, _) = run(&[
        "--format", "json", "bench", "--sizes", "60", "--range", "0", "3", "--phases", "gk,fill",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let row = &v["rows"][0];
    assert!(row["ssp_seconds"].is_null());
    assert!(row["gk_reported"].as_u64().unwrap() < 30, "{row}");
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "max 2 2\n1 x\n0 0\n");
    let (code, _, err) = run(&["solve", &f]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = run(&["solve", "/nonexistent/file.txt"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = run(&["--algo", "brute", "solve", &write(&dir, "big.txt", &big_zero(10))]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

fn big_zero(n: usize) -> String {
    let row = vec!["0"; n].join(" ");
    format!("max {n} {n}\n{}\n", vec![row; n].join("\n"))
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kassign");
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "example1.txt", EXAMPLE1);
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["verify", &f]), 0);
    assert_eq!(status(&["verify", &f, "--inject-fault", "1"]), 1);
    assert_eq!(status(&["solve", "missing.txt"]), 2);
    assert_eq!(status(&["--help"]), 0);
    assert!(Path::new(bin).exists());
}
