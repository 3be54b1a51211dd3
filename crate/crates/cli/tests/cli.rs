use std::path::PathBuf;
use std::process::{Command, Output};

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
}

fn intnfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intnfa"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_reports_state_counts() {
    let fig5 = model("fig5.model");
    let fig5 = fig5.to_str().unwrap();
    let simp = intnfa(&["generate", fig5]);
    assert!(simp.status.success());
    assert!(stdout(&simp).starts_with("states: 3\n"));
    let raw = intnfa(&["generate", fig5, "--raw"]);
    assert!(stdout(&raw).starts_with("states: 5\n"));
}

#[test]
fn generate_writes_dot_dump_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let (dot, dump, stats) = (
        dir.path().join("a.dot"),
        dir.path().join("states.tsv"),
        dir.path().join("stats.json"),
    );
    let o = intnfa(&[
        "generate",
        model("running.model").to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
        "--states-dump",
        dump.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(std::fs::read_to_string(dump).unwrap().lines().count(), 9);
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(stats["states"], 9);
}

#[test]
fn mindfa_and_compo() {
    let lock = model("lock1_sp.model");
    let lock = lock.to_str().unwrap();
    assert_eq!(stdout(&intnfa(&["mindfa", lock])), "states: 14\n");
    assert_eq!(
        stdout(&intnfa(&["mindfa", lock, "--algo", "brzozowski"])),
        "states: 14\n"
    );
    assert_eq!(stdout(&intnfa(&["compo", lock])), "states: 13\n");
    let seq = intnfa(&["compo", model("lock1.model").to_str().unwrap()]);
    assert_eq!(seq.status.code(), Some(2));
}

#[test]
fn bench_prints_one_json_row() {
    let o = intnfa(&["bench", "locks", "--topology", "chain:1", "--sp"]);
    assert!(o.status.success());
    let row: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(row["nfa_s"], 8);
    assert_eq!(row["min_dfa"], 14);
    assert_eq!(row["compo"], 13);
    assert_eq!(row["compo_equivalent"], true);
    assert_eq!(row["paper"]["compo"], 13);
}

#[test]
fn gentraces_is_deterministic_and_analyzable() {
    let dir = tempfile::tempdir().unwrap();
    let abp = model("abp.model");
    let abp = abp.to_str().unwrap();
    let run = |suffix: &str| {
        let acc = dir.path().join(format!("acc{suffix}"));
        let err = dir.path().join(format!("err{suffix}"));
        let o = intnfa(&[
            "gentraces",
            abp,
            "--accepted",
            "12",
            "--errors",
            "12",
            "--seed",
            "42",
            "--accepted-out",
            acc.to_str().unwrap(),
            "--errors-out",
            err.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (acc, err)
    };
    let (acc1, err1) = run("1");
    let (acc2, err2) = run("2");
    assert_eq!(std::fs::read(&acc1).unwrap(), std::fs::read(&acc2).unwrap());
    assert_eq!(std::fs::read(&err1).unwrap(), std::fs::read(&err2).unwrap());

    for method in ["nfa", "interaction"] {
        for mode in ["exact", "prefix"] {
            let args = ["--method", method, "--mode", mode];
            let ok = intnfa(&[&["analyze", abp, acc1.to_str().unwrap()][..], &args].concat());
            assert_eq!(ok.status.code(), Some(0));
            let lines: Vec<serde_json::Value> = stdout(&ok)
                .lines()
                .map(|l| serde_json::from_str(l).unwrap())
                .collect();
            assert_eq!(lines.len(), 12);
            assert!(lines
                .iter()
                .all(|v| v["outcome"] == "pass" && v["method"] == method));
            let bad = intnfa(&[&["analyze", abp, err1.to_str().unwrap()][..], &args].concat());
            assert_eq!(bad.status.code(), Some(1));
            assert!(stdout(&bad).lines().all(|l| l.contains("\"fail\"")));
        }
    }
}

#[test]
fn equiv_exit_codes() {
    let a = model("lock1.model");
    let b = model("lock1_sp.model");
    let same = intnfa(&["equiv", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(stdout(&same), "equivalent\n");
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.model");
    std::fs::write(
        &c,
        "lifelines l; messages a b u;\nseq(loopS(alt(l?a, l?b)), l?a, l!u)\n",
    )
    .unwrap();
    let differ = intnfa(&["equiv", a.to_str().unwrap(), c.to_str().unwrap()]);
    assert_eq!(differ.status.code(), Some(1));
    assert_eq!(stdout(&differ), "not equivalent\n");
}

#[test]
fn input_and_resource_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model");
    std::fs::write(&bad, "lifelines l; messages m;\nstrict(l!m, k?m)\n").unwrap();
    let o = intnfa(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:13"));

    let o = intnfa(&[
        "generate",
        model("abp.model").to_str().unwrap(),
        "--cap",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));

    let o = intnfa(&["validate", model("fig5.model").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}
