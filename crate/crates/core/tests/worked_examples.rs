use std::collections::BTreeSet;
use std::str::FromStr;

use symrules::majority::{consistent_orders, nu_min};
use symrules::rules::{count, enumerate_min_rules, factored, s1, s2};
use symrules::{construct, Group, LinearOrder, Partition, Profile, SubgroupSpec};

type Row = (&'static str, &'static [&'static str]);

// Each row: the profile, then C_nu for every threshold above h/2, then S1 and S2.
const PRESIDENT: &[Row] = &[
    (
        "1,2,3 1,2,3 1,2,3",
        &["1,2,3", "1,2,3", "1,2,3 3,2,1", "1,2,3"],
    ),
    ("3,2,1 3,2,1 1,2,3", &["3,2,1", "L", "1,2,3 3,2,1", "3,2,1"]),
    (
        "3,1,2 3,1,2 1,2,3",
        &["3,1,2", "1,2,3 1,3,2 3,1,2", "L", "3,1,2"],
    ),
    ("1,3,2 1,3,2 1,2,3", &["1,3,2", "1,2,3 1,3,2", "L", "1,3,2"]),
    ("1,2,3 3,2,1 1,2,3", &["1,2,3", "L", "1,2,3 3,2,1", "1,2,3"]),
    (
        "2,3,1 3,1,2 1,2,3",
        &["", "L", "1,2,3 3,2,1", "1,2,3 3,2,1"],
    ),
    (
        "2,1,3 1,3,2 1,2,3",
        &["1,2,3", "1,2,3 2,1,3 1,3,2", "1,2,3 3,2,1", "1,2,3"],
    ),
    ("1,2,3 2,1,3 1,2,3", &["1,2,3", "1,2,3 2,1,3", "L", "1,2,3"]),
    (
        "1,2,3 2,3,1 1,2,3",
        &["1,2,3", "1,2,3 2,1,3 2,3,1", "L", "1,2,3"],
    ),
    ("3,2,1 3,1,2 1,2,3", &["3,1,2", "L", "L", "3,1,2"]),
    ("3,2,1 1,3,2 1,2,3", &["1,3,2", "L", "L", "1,3,2"]),
    ("2,3,1 1,3,2 1,2,3", &["1,2,3", "L", "L", "1,2,3"]),
    (
        "2,3,1 2,1,3 1,2,3",
        &["2,1,3", "1,2,3 2,1,3 2,3,1", "L", "2,1,3"],
    ),
];

const FULL_FIVE: &[Row] = &[
    (
        "1,2,3 1,2,3 1,2,3 1,2,3 1,2,3",
        &["1,2,3", "1,2,3", "1,2,3", "1,2,3 3,2,1", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 1,2,3 2,1,3",
        &["1,2,3", "1,2,3", "1,2,3 2,1,3", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 1,2,3 3,2,1",
        &["1,2,3", "1,2,3", "L", "1,2,3 3,2,1", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 1,2,3 2,3,1",
        &["1,2,3", "1,2,3", "1,2,3 2,1,3 2,3,1", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 2,1,3 2,1,3",
        &["1,2,3", "1,2,3 2,1,3", "1,2,3 2,1,3", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 3,2,1 3,2,1",
        &["1,2,3", "L", "L", "1,2,3 3,2,1", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 2,3,1 2,3,1",
        &[
            "1,2,3",
            "1,2,3 2,1,3 2,3,1",
            "1,2,3 2,1,3 2,3,1",
            "L",
            "1,2,3",
        ],
    ),
    (
        "1,2,3 1,2,3 1,2,3 2,1,3 3,2,1",
        &["1,2,3", "1,2,3 2,1,3", "L", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 2,1,3 1,3,2",
        &[
            "1,2,3",
            "1,2,3",
            "1,2,3 2,1,3 1,3,2",
            "1,2,3 3,2,1",
            "1,2,3",
        ],
    ),
    (
        "1,2,3 1,2,3 1,2,3 2,1,3 2,3,1",
        &["1,2,3", "1,2,3 2,1,3", "1,2,3 2,1,3 2,3,1", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 2,1,3 3,1,2",
        &["1,2,3", "1,2,3", "L", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 3,2,1 2,3,1",
        &["1,2,3", "1,2,3 2,1,3 2,3,1", "L", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 1,2,3 2,3,1 3,1,2",
        &["1,2,3", "1,2,3", "L", "1,2,3 3,2,1", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 2,1,3 2,1,3 3,2,1",
        &["2,1,3", "1,2,3 2,1,3", "L", "L", "2,1,3"],
    ),
    (
        "1,2,3 1,2,3 2,1,3 2,1,3 1,3,2",
        &["1,2,3", "1,2,3 2,1,3", "1,2,3 2,1,3 1,3,2", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 3,2,1 3,2,1 2,1,3",
        &["2,1,3", "L", "L", "L", "2,1,3"],
    ),
    (
        "1,2,3 1,2,3 2,3,1 2,3,1 2,1,3",
        &[
            "2,1,3",
            "1,2,3 2,1,3 2,3,1",
            "1,2,3 2,1,3 2,3,1",
            "2,1,3 3,1,2",
            "2,1,3",
        ],
    ),
    (
        "1,2,3 1,2,3 2,3,1 2,3,1 3,2,1",
        &["2,3,1", "1,2,3 2,1,3 2,3,1", "L", "L", "2,3,1"],
    ),
    (
        "1,2,3 1,2,3 3,1,2 3,1,2 2,3,1",
        &["", "1,2,3 1,3,2 3,1,2", "L", "1,3,2 2,3,1", "1,3,2"],
    ),
    (
        "1,2,3 1,2,3 2,1,3 3,2,1 1,3,2",
        &["1,2,3", "1,2,3 2,1,3 1,3,2", "L", "1,2,3 3,2,1", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 2,1,3 3,2,1 2,3,1",
        &["2,1,3", "1,2,3 2,1,3 2,3,1", "L", "L", "2,1,3"],
    ),
    (
        "1,2,3 1,2,3 2,1,3 3,2,1 3,1,2",
        &["1,2,3", "L", "L", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 2,1,3 1,3,2 2,3,1",
        &["1,2,3", "1,2,3 2,1,3", "L", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 2,1,3 2,3,1 3,1,2",
        &["1,2,3", "1,2,3 2,1,3 2,3,1", "L", "L", "1,2,3"],
    ),
    (
        "1,2,3 1,2,3 3,2,1 2,3,1 3,1,2",
        &["", "L", "L", "1,2,3 3,2,1", "1,2,3 3,2,1"],
    ),
    (
        "1,2,3 2,1,3 3,2,1 1,3,2 2,3,1",
        &["2,1,3", "L", "L", "2,1,3 3,1,2", "2,1,3"],
    ),
];

fn orders(cell: &str, n: usize) -> Vec<LinearOrder> {
    if cell == "L" {
        return LinearOrder::all(n);
    }
    let mut v: Vec<LinearOrder> = cell
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    v.sort();
    v
}

fn president() -> SubgroupSpec {
    SubgroupSpec::partition_product(
        Partition::parse("1,2|3", 3).unwrap(),
        Partition::whole(3),
        true,
    )
}

fn check_table(u: &SubgroupSpec, rows: &[Row]) {
    let group = Group::new(u).unwrap();
    let h = u.h();
    let mut canonical = BTreeSet::new();
    for (text, cells) in rows {
        let p = Profile::from_str(text).unwrap();
        canonical.insert(group.canonical(&p).unwrap());
        let thresholds: Vec<usize> = (h / 2 + 1..=h).collect();
        assert_eq!(cells.len(), thresholds.len() + 2);
        for (cell, &nu) in cells.iter().zip(&thresholds) {
            assert_eq!(
                consistent_orders(&p, nu).unwrap(),
                orders(cell, 3),
                "{p} at {nu}"
            );
        }
        assert_eq!(
            s1(u, &p).unwrap(),
            orders(cells[thresholds.len()], 3),
            "S1 at {p}"
        );
        assert_eq!(
            s2(u, &p).unwrap(),
            orders(cells[thresholds.len() + 1], 3),
            "S2 at {p}"
        );
    }
    // the listed profiles are a full set of orbit representatives
    assert_eq!(canonical.len(), rows.len());
    assert_eq!(group.orbit_report().unwrap().r_u, rows.len());
}

#[test]
fn president_table() {
    check_table(&president(), PRESIDENT);
}

#[test]
fn five_voters_table() {
    check_table(&SubgroupSpec::full(5, 3, true), FULL_FIVE);
}

#[test]
fn five_voters_counts() {
    let u = SubgroupSpec::full(5, 3, true);
    let report = count(&u).unwrap();
    assert_eq!(report.r_u, 26);
    assert_eq!(factored(&report.count_symmetric), "2^26·3^16");
    assert_eq!(report.count_min, 2u32.into());
    let sizes: Vec<usize> = report.per_orbit.iter().map(|&(a, _)| a).collect();
    assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 10);
    assert_eq!(sizes.iter().filter(|&&s| s == 6).count(), 16);

    let plain = count(&SubgroupSpec::full(5, 3, false)).unwrap();
    assert_eq!(plain.r_u, 42);
    assert_eq!(plain.count_min, 18u32.into());
}

#[test]
fn five_voters_rules_differ_at_one_orbit() {
    let u = SubgroupSpec::full(5, 3, true);
    let rules = enumerate_min_rules(&u, 10).unwrap();
    assert_eq!(rules.len(), 2);
    let (a, b) = (rules[0].choices(), rules[1].choices());
    let differing: Vec<usize> = (0..a.len()).filter(|&j| a[j] != b[j]).collect();
    assert_eq!(differing.len(), 1);
    let rep = &rules[0].entries[differing[0]].representative;
    let p = Profile::from_str("1,2,3 1,2,3 3,2,1 2,3,1 3,1,2").unwrap();
    assert_eq!(Group::new(&u).unwrap().canonical(&p).unwrap(), *rep);
    let choices: BTreeSet<LinearOrder> = rules.iter().map(|r| r.evaluate(&p).unwrap()).collect();
    assert_eq!(choices, orders("1,2,3 3,2,1", 3).into_iter().collect());
    let built = construct::build_min_rule(&u).unwrap();
    assert!(rules.iter().any(|r| r.choices() == built.choices()));
}

#[test]
fn worked_profile_thresholds() {
    let p = Profile::from_str("1,2,3 1,2,3 2,1,3 2,3,1 2,3,1 3,1,2 3,1,2 3,1,2 3,2,1").unwrap();
    assert!(consistent_orders(&p, 5).unwrap().is_empty());
    assert_eq!(
        consistent_orders(&p, 6).unwrap(),
        orders("3,1,2 3,2,1 2,3,1", 3)
    );
    for nu in 7..=9 {
        assert_eq!(consistent_orders(&p, nu).unwrap().len(), 6);
    }
    assert_eq!(nu_min(&p), 6);
}
