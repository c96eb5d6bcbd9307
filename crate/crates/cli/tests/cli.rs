use std::process::{Command, Output};

fn gupb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gupb-lab")).args(args).env_remove("GUPB_LAB_CACHE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_list_names_graphs_and_sets() {
    let o = gupb(&["catalog", "list"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("M5057 ")));
    assert!(s.contains("obstruction sets: O3, O3hat"));
}

#[test]
fn catalog_dump_prints_edges_or_vectors() {
    let s = stdout(&gupb(&["catalog", "dump", "H5"]));
    assert!(s.starts_with("# H5"));
    assert!(s.contains("# graph6 "));
    let o = gupb(&["catalog", "dump", "nonesuch"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generate_counts_and_writes_graph6() {
    let o = gupb(&["generate", "--n", "8", "--r", "4", "--all"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.g6");
    let o = gupb(&["generate", "--n", "10", "--r", "3", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 19);
}

#[test]
fn filter_reports_survivors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.g6");
    let left = dir.path().join("left.g6");
    assert!(gupb(&["generate", "--n", "8", "--r", "4", "--all", "-o", input.to_str().unwrap()]).status.success());
    let o = gupb(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--obstructions",
        "O3",
        "--full-counts",
        "--survivors",
        left.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    let n = s.lines().filter(|l| l.starts_with("survivor ")).count();
    assert_eq!(std::fs::read_to_string(&left).unwrap().lines().count(), n);
}

#[test]
fn solve_exit_codes() {
    // refuted by propagation
    let o = gupb(&["solve", "--graph", "K5", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("proof"));
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("p.rep");
    let o = gupb(&["solve", "--graph", "petersen", "--d", "3", "--restarts", "40", "-o", rep.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = gupb(&["verify", "--graph", "petersen", "--rep", rep.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("faithful"));
    // a budget of zero leaves the answer open
    let o = gupb(&["solve", "--graph", "heawood", "--d", "3", "--restarts", "0"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn unknown_scenario_and_missing_ingest_fail() {
    let o = gupb(&["scenario", "qutrit12", "-q"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let o = gupb(&["scenario", "qutrit13", "-q", "--ingest", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("13_4_connected.g6"));
}

#[test]
fn scenario_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let md = dir.path().join("r.md");
    let o = gupb(&["scenario", "verify_paper_reps", "-q", "--report", md.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&md).unwrap().contains("## Verdict"));
    let bad = dir.path().join("r.txt");
    let o = gupb(&["scenario", "verify_paper_reps", "-q", "--report", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
