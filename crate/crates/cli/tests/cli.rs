use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jensenlab"));
    c.env_remove("JENSENLAB_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).expect("golden file")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_match_golden() {
    let o = run(&["verify", "bounds", "--T", "3e12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("bounds_T3e12.csv"));
}

#[test]
fn exp_grid_matches_golden_json() {
    let o = run(&["scan", "grid", "--source", "exp", "--d", "1..4", "--n", "0..2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("grid_exp.json"));
}

#[test]
fn theorem3_suite_matches_golden_and_repeats() {
    let args = ["verify", "t3", "--trials", "20", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), golden("t3_seed7.csv"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "seed = 3\ntrials = 20\n").unwrap();
    let conf = conf.to_str().unwrap();
    let from_file = stdout(&run(&["verify", "t3", "--config", conf]));
    assert!(from_file.contains("seed,3\n") && from_file.contains("trials,20\n"));
    let overridden = stdout(&run(&["verify", "t3", "--config", conf, "--seed", "7"]));
    assert_eq!(overridden, golden("t3_seed7.csv"));
}

#[test]
fn output_file_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["verify", "corollary", "--trials", "30", "--seed", "5", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn exit_codes() {
    // (1+z)^d has a multiple zero that ball arithmetic cannot separate
    let o = run(&["scan", "grid", "--source", "exp", "--mode", "ball", "--d", "2..3", "--n", "0..0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("indeterminate"));
    assert_eq!(run(&["verify", "bounds", "--T", "1/4"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "t3", "--prec", "16"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "t3", "--format", "xml"]).status.code(), Some(3));
    let short = run(&["scan", "grid", "--source", "exp", "--d", "1..40", "--n", "0..0", "--order", "10"]);
    assert_eq!(short.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&short.stderr).contains("increase --order"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn xi_coeffs_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["xi-coeffs", "--order", "4", "--prec", "128", "--method", "factors"];
    let first = bin().args(args).env("JENSENLAB_CACHE", &cache).output().unwrap();
    let second = bin().args(args).env("JENSENLAB_CACHE", &cache).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&first.stderr).contains("cache miss"));
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("0,4.9712077818831"));
    // odd orders vanish by evenness
    assert!(rows[1].starts_with("1,0,0,") && rows[3].starts_with("3,0,0,"));
}
