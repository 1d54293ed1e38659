use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symrules"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("symrules-{}-{name}", std::process::id()))
}

const PRESIDENT: &[&str] = &[
    "--h",
    "3",
    "--n",
    "3",
    "--committees",
    "1,2|3",
    "--classes",
    "1,2,3",
    "--reversal",
];

fn with(base: &[&'static str], extra: &[&'static str]) -> Vec<&'static str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn regularity_verdicts() {
    let o = run(&with(&["regularity"], PRESIDENT));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "regular"));

    let o = run(&[
        "regularity",
        "--h",
        "3",
        "--n",
        "3",
        "--committees",
        "1,2,3",
        "--classes",
        "1,2,3",
        "--reversal",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("not regular"));
    assert!(stdout(&o).contains("witness"));

    let o = run(&[
        "regularity",
        "--h",
        "4",
        "--n",
        "3",
        "--committees",
        "1,2,3,4",
        "--classes",
        "1|2|3",
        "--reversal",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counts() {
    let o = run(&with(&["count"], PRESIDENT));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("R(U)=13"));
    assert!(out.contains("|F^U|=2^13·3^8"));
    assert!(out.contains("|F_min|=2 "));

    let o = run(&[
        "count",
        "--h",
        "5",
        "--n",
        "3",
        "--reversal",
        "--format",
        "structured",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["r_u"], 26);
    assert_eq!(v["count_symmetric_factored"], "2^26·3^16");
    assert_eq!(v["count_min"], "2");

    let o = run(&["count", "--h", "5", "--n", "3", "--format", "structured"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["r_u"], 42);
    assert_eq!(v["count_min"], "18");
}

#[test]
fn caps_exit_with_three() {
    let o = run(&["count", "--h", "9", "--n", "6"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("above the cap"));
    let o = run(&["verify", "--h", "6", "--n", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["count", "--h", "3"]).status.code(), Some(1));
    assert_eq!(
        run(&["count", "--h", "3", "--n", "3", "--committees", "1,2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["count", "--h", "1", "--n", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

// majority of the columns by direct pair counting, when it is a linear order
fn majority_order(columns: &[[usize; 3]]) -> Option<Vec<usize>> {
    let above = |x: usize, y: usize| {
        columns
            .iter()
            .filter(|c| c.iter().position(|&a| a == x) < c.iter().position(|&a| a == y))
            .count()
    };
    let mut alts = vec![1, 2, 3];
    alts.sort_by_key(|&x| {
        std::cmp::Reverse(
            (1..=3)
                .filter(|&y| y != x && 2 * above(x, y) > columns.len())
                .count(),
        )
    });
    let ok = alts
        .windows(2)
        .all(|w| 2 * above(w[0], w[1]) > columns.len())
        && 2 * above(alts[0], alts[2]) > columns.len();
    ok.then_some(alts)
}

#[test]
fn build_then_apply() {
    let path = temp("rule.json");
    let p = path.to_str().unwrap();
    let o = run(&with(&with(&["build"], PRESIDENT), &["--out"])
        .into_iter()
        .chain([p])
        .collect::<Vec<_>>());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let columns = [[3, 2, 1], [1, 2, 3], [1, 2, 3]];
    let expected = majority_order(&columns).unwrap();
    let o = run(&["apply", "--rule", p, "--profile", "3,2,1 1,2,3 1,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let shown: Vec<String> = expected.iter().map(|x| x.to_string()).collect();
    assert_eq!(stdout(&o).trim(), format!("[{}]", shown.join(",")));

    let o = run(&["apply", "--rule", p, "--profile", "1,2,3 3,2,1 1,2,3"]);
    assert_eq!(stdout(&o).trim(), "[1,2,3]");

    let o = run(&["apply", "--rule", p, "--profile", "1,2 2,1 1,2"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_file(&path).ok();
}

#[test]
fn menu_choices_can_be_edited() {
    let path = temp("menu.json");
    let p = path.to_str().unwrap();
    let args: Vec<&str> = with(&["build"], PRESIDENT)
        .into_iter()
        .chain(["--policy", "menu", "--out", p])
        .collect();
    assert_eq!(run(&args).status.code(), Some(0));
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entries = doc["entries"].as_array_mut().unwrap();
    assert_eq!(entries.len(), 13);
    let open: Vec<usize> = (0..13)
        .filter(|&j| entries[j]["options"].as_array().unwrap().len() == 2)
        .collect();
    assert_eq!(open.len(), 1);

    let profile = "2,3,1 3,1,2 1,2,3";
    let before = stdout(&run(&["apply", "--rule", p, "--profile", profile]));
    let entry = &mut entries[open[0]];
    let other = entry["options"]
        .as_array()
        .unwrap()
        .iter()
        .find(|q| **q != entry["choice"])
        .unwrap()
        .clone();
    entry["choice"] = other;
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let after = stdout(&run(&["apply", "--rule", p, "--profile", profile]));
    let mut both = vec![before.trim().to_string(), after.trim().to_string()];
    both.sort();
    assert_eq!(both, vec!["[1,2,3]", "[3,2,1]"]);

    // a choice outside S1 is refused when the rule is loaded
    doc["entries"][0]["choice"] = serde_json::json!([2, 1, 3]);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(
        run(&["apply", "--rule", p, "--profile", profile])
            .status
            .code(),
        Some(1)
    );
    std::fs::remove_file(&path).ok();
}

#[test]
fn build_refuses_irregular() {
    let o = run(&["build", "--h", "3", "--n", "3", "--reversal"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not regular"));
}

#[test]
fn verify_suites() {
    let o = run(&with(&["verify"], PRESIDENT));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 4);

    let o = run(&["verify", "--h", "3", "--n", "3", "--reversal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("definition false, elements false, gcd false"));

    for extra in [&[][..], &["--reversal"][..]] {
        let args: Vec<&str> = ["verify", "--h", "2", "--n", "2"]
            .iter()
            .chain(extra)
            .copied()
            .collect();
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn structured_output_is_stable() {
    for cmd in ["count", "reps", "regularity", "verify"] {
        let args = with(&[cmd], PRESIDENT)
            .into_iter()
            .chain(["--format", "structured"])
            .collect::<Vec<_>>();
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(v["command"], cmd);
    }
    let a = run(&with(&["build"], PRESIDENT));
    let b = run(&with(&["build"], PRESIDENT));
    assert_eq!(a.stdout, b.stdout);
}
