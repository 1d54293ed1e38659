use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symrules::construct;
use symrules::groups::Group;
use symrules::majority::{self, SupportCounts};
use symrules::regularity::{self, stabilizer_is_regular};
use symrules::rules::{self, factored, RuleEntry, RuleTable};
use symrules::{Error, LinearOrder, Partition, Profile, SubgroupSpec};

/// Subgroups at most this large get the element-by-element regularity check too.
const CROSS_CHECK_ORDER: u128 = 100_000;
/// Largest profile space `verify` sweeps.
const VERIFY_CAP: u128 = 50_000;

#[derive(Parser)]
#[command(name = "symrules", version, about = "Symmetric minimal majority rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether V(B) x W(C) x Omega (or x {id}) is regular.
    Regularity(SpecArgs),
    /// Count orbits, symmetric rules and minimal majority symmetric rules.
    Count(SpecArgs),
    /// One row per orbit: representative, C_nu, S1 and S2.
    Reps(SpecArgs),
    /// Write a minimal majority symmetric rule table.
    Build(BuildArgs),
    /// Evaluate a rule table at a profile.
    Apply(ApplyArgs),
    /// Run the brute-force oracles on a small instance.
    Verify(SpecArgs),
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Number of individuals.
    #[arg(long)]
    h: usize,
    /// Number of alternatives.
    #[arg(long)]
    n: usize,
    /// Committees of individuals, e.g. "1,2|3". Defaults to a single committee.
    #[arg(long)]
    committees: Option<String>,
    /// Classes of alternatives, e.g. "1|2,3". Defaults to a single class.
    #[arg(long)]
    classes: Option<String>,
    /// Include the rank reversal.
    #[arg(long)]
    reversal: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = Policy::First)]
    policy: Policy,
    /// Where to write the rule document; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApplyArgs {
    /// A rule document written by `build`.
    #[arg(long)]
    rule: PathBuf,
    /// Columns separated by spaces, e.g. "3,2,1 1,2,3 1,2,3".
    #[arg(long)]
    profile: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Policy {
    /// The order built from the majority chains at each representative.
    First,
    /// The lexicographically least admissible order at each representative.
    Lexmin,
    /// Lexmin choices plus every admissible order, for editing by hand.
    Menu,
}

/// Exit statuses.
const OK: u8 = 0;
const USAGE: u8 = 1;
const NEGATIVE: u8 = 2;
const CAP: u8 = 3;

struct Outcome {
    status: u8,
    text: String,
    structured: Value,
}

impl Outcome {
    fn ok(text: String, structured: Value) -> Self {
        Outcome {
            status: OK,
            text,
            structured,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let (result, format) = match cli.command {
        Command::Regularity(a) => (regularity_cmd(&a), a.format),
        Command::Count(a) => (count_cmd(&a), a.format),
        Command::Reps(a) => (reps_cmd(&a), a.format),
        Command::Build(a) => (build_cmd(&a), a.spec.format),
        Command::Apply(a) => (apply_cmd(&a), a.format),
        Command::Verify(a) => (verify_cmd(&a), a.format),
    };
    match result {
        Ok(outcome) => {
            match format {
                Format::Text => print!("{}", outcome.text),
                Format::Structured => println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.structured)
                        .expect("json values serialise")
                ),
            }
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(status_of(&e))
        }
    }
}

fn status_of(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. } | Error::TooManyRules { .. }) => CAP,
        Some(Error::NotRegular { .. }) => NEGATIVE,
        _ => USAGE,
    }
}

fn spec_of(a: &SpecArgs) -> anyhow::Result<SubgroupSpec> {
    if a.h < 2 || a.n < 2 {
        bail!(
            "need at least 2 individuals and 2 alternatives, got h = {} and n = {}",
            a.h,
            a.n
        );
    }
    let committees = match &a.committees {
        Some(s) => Partition::parse(s, a.h).context("--committees")?,
        None => Partition::whole(a.h),
    };
    let classes = match &a.classes {
        Some(s) => Partition::parse(s, a.n).context("--classes")?,
        None => Partition::whole(a.n),
    };
    Ok(SubgroupSpec::partition_product(
        committees, classes, a.reversal,
    ))
}

fn spec_json(u: &SubgroupSpec) -> Value {
    serde_json::to_value(u).expect("spec serialises")
}

fn orders_text(orders: &[LinearOrder], n: usize) -> String {
    if orders.is_empty() {
        return "{}".into();
    }
    if orders.len() == (1..=n).product::<usize>() {
        return "all".into();
    }
    let items: Vec<String> = orders.iter().map(|q| q.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn regularity_cmd(a: &SpecArgs) -> anyhow::Result<Outcome> {
    let u = spec_of(a)?;
    let (committees, classes, reversal) = u.as_partition_product().expect("built from partitions");
    let by_gcd = regularity::is_regular_partition(&committees, &classes, reversal);
    let order = u.order_hint();
    let verdict = match order {
        Some(o) if o <= CROSS_CHECK_ORDER => Some(regularity::is_regular(&u)?),
        _ => None,
    };
    if let Some(v) = &verdict {
        if v.regular != by_gcd {
            bail!(Error::Invariant(format!(
                "gcd test says {by_gcd}, element test says {}",
                v.regular
            )));
        }
    }
    let mut text = format!("{u}\n{}\n", if by_gcd { "regular" } else { "not regular" });
    let mut structured = json!({
        "command": "regularity",
        "subgroup": spec_json(&u),
        "regular": by_gcd,
        "cross_checked": verdict.is_some(),
    });
    match &verdict {
        Some(v) => {
            let _ = writeln!(
                text,
                "element test agrees (|U| = {})",
                order.unwrap_or_default()
            );
            if let (Some(w), Some(c)) = (&v.witness, v.violated_condition) {
                let (p, g) = regularity::violating_profile(w)?;
                let _ = writeln!(text, "witness: {w} violates condition {c}");
                let _ = writeln!(text, "profile {p} is fixed by {g}");
                structured["witness"] = json!(w);
                structured["violated_condition"] = json!(c);
                structured["violating_profile"] = json!(p);
                structured["stabilizing_element"] = json!(g);
            }
        }
        None => text.push_str("element test skipped: subgroup too large\n"),
    }
    Ok(Outcome {
        status: if by_gcd { OK } else { NEGATIVE },
        text,
        structured,
    })
}

fn count_cmd(a: &SpecArgs) -> anyhow::Result<Outcome> {
    let u = spec_of(a)?;
    let c = rules::count(&u)?;
    let text = format!(
        "{u}\nR(U)={}\n|F^U|={} ({})\n|F_min|={} ({})\n",
        c.r_u,
        factored(&c.count_symmetric),
        c.count_symmetric,
        factored(&c.count_min),
        c.count_min,
    );
    let structured = json!({
        "command": "count",
        "subgroup": spec_json(&u),
        "r_u": c.r_u,
        "count_symmetric": c.count_symmetric.to_string(),
        "count_symmetric_factored": factored(&c.count_symmetric),
        "count_min": c.count_min.to_string(),
        "count_min_factored": factored(&c.count_min),
        "per_orbit": c.per_orbit,
    });
    Ok(Outcome::ok(text, structured))
}

fn reps_cmd(a: &SpecArgs) -> anyhow::Result<Outcome> {
    let u = spec_of(a)?;
    let rows = rules::orbit_table(&u)?;
    let n = u.n();
    let mut text = format!("{u}\nR(U)={}\n", rows.len());
    for (j, row) in rows.iter().enumerate() {
        let _ = writeln!(
            text,
            "p{}: {}  orbit {}  stabilizer {}  nu {}",
            j + 1,
            row.representative,
            row.orbit_size,
            row.stabilizer_order,
            row.nu
        );
        for (nu, c) in &row.consistent {
            let _ = writeln!(text, "  C_{nu}: {}", orders_text(c, n));
        }
        let _ = writeln!(text, "  S1: {}", orders_text(&row.s1, n));
        let _ = writeln!(text, "  S2: {}", orders_text(&row.s2, n));
    }
    let structured = json!({
        "command": "reps",
        "subgroup": spec_json(&u),
        "r_u": rows.len(),
        "rows": rows,
    });
    Ok(Outcome::ok(text, structured))
}

fn build_cmd(a: &BuildArgs) -> anyhow::Result<Outcome> {
    let u = spec_of(&a.spec)?;
    let group = Group::new(&u)?;
    regularity::verdict_for(&group).into_result()?;
    let rule = match a.policy {
        Policy::First => construct::build_min_rule(&u)?,
        Policy::Lexmin | Policy::Menu => {
            let rows = rules::orbit_table_in(&group)?;
            let choices: Vec<LinearOrder> = rows
                .iter()
                .map(|r| {
                    r.s2.first()
                        .cloned()
                        .expect("regular subgroups have nonempty S2")
                })
                .collect();
            let mut rule = rules::build_rule(&u, &choices, true)?;
            if a.policy == Policy::Menu {
                let entries = rule
                    .entries
                    .iter()
                    .zip(rows)
                    .map(|(e, r)| RuleEntry {
                        options: Some(r.s2),
                        ..e.clone()
                    })
                    .collect();
                rule = RuleTable::from_entries(u.clone(), true, entries, rule.counts.clone());
            }
            rule
        }
    };
    let document = rule.to_json()?;
    let summary = format!("{} entries for {u}", rule.entries.len());
    let text = match &a.out {
        Some(path) => {
            std::fs::write(path, &document)
                .with_context(|| format!("writing {}", path.display()))?;
            format!("wrote {summary} to {}\n", path.display())
        }
        None => document,
    };
    let structured = serde_json::to_value(&rule)?;
    Ok(Outcome::ok(text, structured))
}

fn apply_cmd(a: &ApplyArgs) -> anyhow::Result<Outcome> {
    let raw = std::fs::read_to_string(&a.rule)
        .with_context(|| format!("reading {}", a.rule.display()))?;
    let rule =
        RuleTable::from_json(&raw).with_context(|| format!("loading {}", a.rule.display()))?;
    let p: Profile = a.profile.parse().context("--profile")?;
    let q = rule.evaluate(&p)?;
    let structured = json!({ "command": "apply", "profile": p, "order": q });
    Ok(Outcome::ok(format!("{q}\n"), structured))
}

struct Verification {
    lines: Vec<(String, bool, String)>,
}

impl Verification {
    fn record(&mut self, name: &str, pass: bool, detail: String) {
        self.lines.push((name.into(), pass, detail));
    }
}

/// Orders fixed by the stabilizer that rank `x` above `y` whenever at least `nu(p)`
/// individuals do, found by scanning every order.
fn s2_brute_force(group: &Group, p: &Profile) -> anyhow::Result<Vec<LinearOrder>> {
    let stab = group.stabilizer(p)?;
    let counts = SupportCounts::new(p);
    let n = p.n();
    let respects = |q: &LinearOrder, nu: usize| {
        (1..=n).all(|x| {
            (1..=n).all(|y| x == y || counts.get(x, y) < nu || q.rank_of(x) < q.rank_of(y))
        })
    };
    let all = LinearOrder::all(n);
    let h = p.h();
    let nu = (h / 2 + 1..=h)
        .find(|&nu| all.iter().any(|q| respects(q, nu)))
        .expect("unanimity is acyclic");
    Ok(all
        .into_iter()
        .filter(|q| stab.iter().all(|g| g.transform_order(q) == *q) && respects(q, nu))
        .collect())
}

fn verify_cmd(a: &SpecArgs) -> anyhow::Result<Outcome> {
    let u = spec_of(a)?;
    let space = (1..=a.n as u128)
        .product::<u128>()
        .checked_pow(a.h as u32)
        .unwrap_or(u128::MAX);
    if space > VERIFY_CAP {
        bail!(Error::CapExceeded {
            what: "profile space",
            required: space,
            cap: VERIFY_CAP,
        });
    }
    let group = Group::new(&u)?;
    let (committees, classes, reversal) = u.as_partition_product().expect("built from partitions");
    let mut v = Verification { lines: Vec::new() };

    let by_definition = regularity::is_regular_by_definition(&u)?;
    let verdict = regularity::verdict_for(&group);
    let by_gcd = regularity::is_regular_partition(&committees, &classes, reversal);
    let regular = verdict.regular;
    v.record(
        "regularity",
        by_definition == regular && regular == by_gcd,
        format!("definition {by_definition}, elements {regular}, gcd {by_gcd}"),
    );

    let counts = rules::count_in(&group)?;
    v.record(
        "existence",
        (counts.count_min > 0u32.into()) == regular,
        format!("|F_min| = {}, regular {regular}", counts.count_min),
    );

    if regular {
        let report = group.orbit_report()?;
        let mut bad = None;
        for e in &report.orbits {
            let q = construct::build_witness(&u, &e.representative)?;
            if !s2_brute_force(&group, &e.representative)?.contains(&q) {
                bad = Some(format!("{q} at {}", e.representative));
                break;
            }
        }
        v.record(
            "witness membership",
            bad.is_none(),
            bad.unwrap_or_else(|| format!("{} representatives", report.r_u)),
        );
        let rule = construct::build_min_rule(&u)?;
        let laws = rule.check_laws()?;
        let detail = match (&laws.symmetry_failure, &laws.minimality_failure) {
            (Some((p, g)), _) => format!("symmetry fails at {p} under {g}"),
            (None, Some(p)) => format!("minimality fails at {p}"),
            (None, None) => format!("{} profiles x {} elements", laws.profiles, laws.group_order),
        };
        v.record("rule laws", laws.holds(), detail);
    } else if let Some(w) = &verdict.witness {
        let (p, _) = regularity::violating_profile(w)?;
        let stab = group.stabilizer(&p)?;
        v.record(
            "violating profile",
            !stabilizer_is_regular(&stab),
            format!("stabilizer of {p} has {} elements", stab.len()),
        );
    }

    // simple majority agreement is a property of every minimal rule, so check it on the lexmin one
    if regular {
        let rows = rules::orbit_table_in(&group)?;
        let mut bad = None;
        for r in &rows {
            if let Some(s) = majority::simple_majority(&r.representative).as_order(a.n) {
                if r.s2 != [s.clone()] {
                    bad = Some(format!("S2 at {} is not {{{s}}}", r.representative));
                    break;
                }
            }
        }
        v.record(
            "simple majority",
            bad.is_none(),
            bad.unwrap_or_else(|| "S2 = {S(p)} on P_S".into()),
        );
    }

    let pass = v.lines.iter().all(|(_, ok, _)| *ok);
    let mut text = format!("{u}\n");
    for (name, ok, detail) in &v.lines {
        let _ = writeln!(
            text,
            "{} {name}: {detail}",
            if *ok { "PASS" } else { "FAIL" }
        );
    }
    let structured = json!({
        "command": "verify",
        "subgroup": spec_json(&u),
        "pass": pass,
        "checks": v.lines.iter().map(|(name, ok, detail)| json!({
            "name": name, "pass": ok, "detail": detail,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        status: if pass { OK } else { NEGATIVE },
        text,
        structured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(h: usize, n: usize, committees: Option<&str>) -> SpecArgs {
        SpecArgs {
            h,
            n,
            committees: committees.map(String::from),
            classes: None,
            reversal: true,
            format: Format::Text,
        }
    }

    #[test]
    fn spec_defaults_to_single_blocks() {
        let u = spec_of(&args(3, 3, None)).unwrap();
        assert_eq!(
            u,
            SubgroupSpec::partition_product(Partition::whole(3), Partition::whole(3), true)
        );
        assert!(spec_of(&args(1, 3, None)).is_err());
        assert!(spec_of(&args(3, 3, Some("1|2"))).is_err());
    }

    #[test]
    fn statuses() {
        let cap = anyhow::Error::new(Error::CapExceeded {
            what: "x",
            required: 2,
            cap: 1,
        });
        assert_eq!(status_of(&cap), CAP);
        let usage = anyhow::Error::new(Error::InvalidProfile("x".into()));
        assert_eq!(status_of(&usage), USAGE);
        assert_eq!(status_of(&anyhow::anyhow!("plain")), USAGE);
    }

    #[test]
    fn order_sets() {
        assert_eq!(orders_text(&[], 3), "{}");
        assert_eq!(orders_text(&LinearOrder::all(3), 3), "all");
        let q: LinearOrder = "2,1,3".parse().unwrap();
        assert_eq!(orders_text(&[q], 3), "{[2,1,3]}");
    }
}
