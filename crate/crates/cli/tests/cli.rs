use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netdesign_core::instances::{parse, serialize_solution, Instance, Solution};
use netdesign_core::oracle::opt_capk;
use tempfile::TempDir;

const CAPK_GAP: &str = "CAPK 2 2 5\nE 0 1 0 4\nE 0 1 1 5\n";

fn netdesign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netdesign"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_capk_gap() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "gap.txt", CAPK_GAP);
    let out = netdesign(&["solve", "--problem", "capk", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "SOL capk 1\n1\n");
    assert!(stderr(&out).contains("cost ledger"));
}

#[test]
fn oracle_ratio_in_json_record() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "gap.txt", CAPK_GAP);
    let record = dir.path().join("run.json");
    let out = netdesign(&[
        "solve", "--problem", "capk", "--input", s(&input), "--oracle", "--json", "--record",
        s(&record),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&record).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ratio"], 1.0);
    assert_eq!(v["oracle_cost"], "1");
    assert_eq!(v["alg_cost"], "1");
    let printed: serde_json::Value = serde_json::from_str(&stderr(&out)).unwrap();
    assert_eq!(printed, v);
}

#[test]
fn missing_file_is_usage_error() {
    let out = netdesign(&["solve", "--problem", "capk", "--input", "/nonexistent/x.txt"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("x.txt"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(netdesign(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(netdesign(&["solve", "--problem", "nope"]).status.code(), Some(64));
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "gap.txt", CAPK_GAP);
    let out = netdesign(&["solve", "--problem", "fgc1q", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn infeasible_exit_code() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "thin.txt", "CAPK 3 2 3\nE 0 1 1 3\nE 1 2 1 1\n");
    let out = netdesign(&["solve", "--problem", "capk", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn too_large_exit_code() {
    let dir = TempDir::new().unwrap();
    let input = file(
        &dir,
        "path.txt",
        "FGC 4 3 1 1\nE 0 1 1 S\nE 1 2 1 S\nE 2 3 1 S\n",
    );
    let out = Command::new(env!("CARGO_BIN_EXE_netdesign"))
        .args(["solve", "--problem", "fgc1q", "--input", s(&input)])
        .env("NETDESIGN_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn verify_oracle_witness_and_infeasible_set() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "gap.txt", CAPK_GAP);
    let Instance::Capk(inst) = parse(CAPK_GAP).unwrap() else { unreachable!() };
    let opt = opt_capk(&inst).unwrap();
    let good = file(
        &dir,
        "good.sol",
        &serialize_solution(&Solution {
            problem: "capk".into(),
            cost: opt.cost,
            edges: opt.witness,
        }),
    );
    let out = netdesign(&["verify", "--input", s(&input), "--solution", s(&good)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "OK cost 1\n");

    let bad = file(&dir, "bad.sol", "SOL capk 0\n0\n");
    let out = netdesign(&["verify", "--input", s(&input), "--solution", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("FAIL: cut {1} is violated"), "{}", stderr(&out));

    let wrong_cost = file(&dir, "cost.sol", "SOL capk 7\n1\n");
    let out = netdesign(&["verify", "--input", s(&input), "--solution", s(&wrong_cost)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("declared cost 7"));
}

#[test]
fn gen_solve_verify_every_problem() {
    let dir = TempDir::new().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("fgc1q", &["--n", "5", "--m", "10", "--q", "2"]),
        ("fgc2q", &["--n", "5", "--m", "12", "--q", "1"]),
        ("pqfgc", &["--n", "5", "--m", "14", "--p", "3", "--q", "1"]),
        ("capk", &["--n", "5", "--m", "10", "--k", "6"]),
        ("cover", &["--n", "6", "--m", "7", "--links", "10", "--lambda", "3"]),
        ("cover2-via-fgc", &["--n", "5", "--m", "6", "--links", "9", "--lambda", "3"]),
    ];
    for (problem, extra) in cases {
        let mut solved = false;
        for seed in 1..=20 {
            let inst = dir.path().join(format!("{problem}-{seed}.txt"));
            let seed = seed.to_string();
            let mut args = vec!["gen", "--problem", problem, "--seed", &seed, "--output", s(&inst)];
            args.extend_from_slice(extra);
            assert_eq!(netdesign(&args).status.code(), Some(0));
            let out = netdesign(&[
                "solve", "--problem", problem, "--input", s(&inst), "--oracle", "--seed-check",
            ]);
            match out.status.code() {
                Some(2) => continue,
                Some(0) => {}
                other => panic!("{problem} seed {seed}: exit {other:?}: {}", stderr(&out)),
            }
            let sol = file(&dir, &format!("{problem}-{seed}.sol"), &stdout(&out));
            let out = netdesign(&["verify", "--input", s(&inst), "--solution", s(&sol)]);
            assert_eq!(out.status.code(), Some(0), "{problem}: {}", stderr(&out));
            solved = true;
            break;
        }
        assert!(solved, "no feasible {problem} instance in 20 seeds");
    }
}

#[test]
fn pqfgc_greedy_cip() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("pq.txt");
    let gen = netdesign(&[
        "gen", "--problem", "pqfgc", "--seed", "4", "--n", "4", "--m", "12", "--p", "2", "--q",
        "1", "--output", s(&inst),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let out = netdesign(&["solve", "--problem", "pqfgc", "--input", s(&inst), "--cip", "greedy"]);
    assert!(matches!(out.status.code(), Some(0) | Some(2)), "{}", stderr(&out));
}

#[test]
fn dump_lp_writes_lp_text() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "gap.txt", CAPK_GAP);
    let lp = dir.path().join("gap.lp");
    let out = netdesign(&["solve", "--problem", "capk", "--input", s(&input), "--dump-lp", s(&lp)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(&lp).unwrap().starts_with("Minimize"));
}

#[test]
fn gen_is_deterministic() {
    let a = netdesign(&["gen", "--problem", "fgc1q", "--seed", "9"]);
    let b = netdesign(&["gen", "--problem", "fgc1q", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("FGC 6 12 1 2\n"));
    let conflict = netdesign(&["gen", "--problem", "fgc1q", "--p", "2"]);
    assert_eq!(conflict.status.code(), Some(64));
}

#[test]
fn bench_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = netdesign(&["bench", "--count", "3", "--seed", "7", "--output", s(path)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stderr(&out).starts_with("problem,count,min,median,max\n"));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("problem,seed,n,m,param,lp,alg,opt,ratio,ms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 18);
    let keys: Vec<(&str, u64)> = rows.iter().map(|r| (r[0], r[1].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(rows.iter().all(|r| r.len() == 10 && r[9] == "0.000"));
}
