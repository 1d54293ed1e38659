//! `U`-symmetric rules stored as one social order per orbit.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{Group, IndexAction, ProfileCodec, SubgroupSpec, PROFILE_CAP};
use crate::majority::{self, SupportCounts};
use crate::prefs::{GroupElement, LinearOrder, Profile};

/// Orders fixed by every stabilizer element: `S1(p)`.
pub fn s1(u: &SubgroupSpec, p: &Profile) -> Result<Vec<LinearOrder>> {
    s1_in(&u.group()?, p)
}

/// `S2(p) = S1(p) n C_nu(p)(p)`.
pub fn s2(u: &SubgroupSpec, p: &Profile) -> Result<Vec<LinearOrder>> {
    s2_in(&u.group()?, p)
}

pub fn s1_in(group: &Group, p: &Profile) -> Result<Vec<LinearOrder>> {
    let stab = group.stabilizer(p)?;
    Ok(fixed_orders(&stab, p.n()))
}

pub fn s2_in(group: &Group, p: &Profile) -> Result<Vec<LinearOrder>> {
    let s1 = s1_in(group, p)?;
    Ok(restrict_to_minimal(p, s1))
}

fn fixed_orders(stab: &[GroupElement], n: usize) -> Vec<LinearOrder> {
    LinearOrder::all(n)
        .into_iter()
        .filter(|q| stab.iter().all(|g| g.transform_order(q) == *q))
        .collect()
}

fn restrict_to_minimal(p: &Profile, orders: Vec<LinearOrder>) -> Vec<LinearOrder> {
    let counts = SupportCounts::new(p);
    let nu = counts.nu_min();
    let rel = majority::sigma_from_counts(counts, nu);
    orders
        .into_iter()
        .filter(|q| rel.is_respected_by(q))
        .collect()
}

/// Everything the tables of worked examples show for one orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRow {
    pub representative: Profile,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    pub nu: usize,
    /// `(nu, C_nu(p))` for every threshold in `(h/2, h]`.
    pub consistent: Vec<(usize, Vec<LinearOrder>)>,
    pub s1: Vec<LinearOrder>,
    pub s2: Vec<LinearOrder>,
}

/// One row per orbit, in the order of the canonical representatives.
pub fn orbit_table(u: &SubgroupSpec) -> Result<Vec<OrbitRow>> {
    orbit_table_in(&u.group()?)
}

pub fn orbit_table_in(group: &Group) -> Result<Vec<OrbitRow>> {
    let report = group.orbit_report()?;
    let h = group.h();
    report
        .orbits
        .into_iter()
        .map(|entry| {
            let p = entry.representative;
            let s1 = s1_in(group, &p)?;
            let s2 = restrict_to_minimal(&p, s1.clone());
            let consistent = (h / 2 + 1..=h)
                .map(|nu| Ok((nu, majority::consistent_orders(&p, nu)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(OrbitRow {
                nu: majority::nu_min(&p),
                representative: p,
                orbit_size: entry.orbit_size,
                stabilizer_order: entry.stabilizer_order,
                consistent,
                s1,
                s2,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub r_u: usize,
    #[serde(with = "biguint_string")]
    pub count_symmetric: BigUint,
    #[serde(with = "biguint_string")]
    pub count_min: BigUint,
    /// `(|S1|, |S2|)` per orbit.
    pub per_orbit: Vec<(usize, usize)>,
    /// First orbit (0-based) with an empty `S2`, if any.
    pub empty_s2_orbit: Option<usize>,
}

impl CountReport {
    fn from_sizes(per_orbit: Vec<(usize, usize)>) -> Self {
        let count_symmetric = per_orbit.iter().map(|&(a, _)| BigUint::from(a)).product();
        let count_min = per_orbit.iter().map(|&(_, b)| BigUint::from(b)).product();
        CountReport {
            r_u: per_orbit.len(),
            count_symmetric,
            count_min,
            empty_s2_orbit: per_orbit.iter().position(|&(_, b)| b == 0),
            per_orbit,
        }
    }

    /// `(|S1|, |S2|)` mapped to how many orbits have it.
    pub fn size_multiset(&self) -> std::collections::BTreeMap<(usize, usize), usize> {
        let mut m = std::collections::BTreeMap::new();
        for &pair in &self.per_orbit {
            *m.entry(pair).or_insert(0) += 1;
        }
        m
    }
}

pub fn count(u: &SubgroupSpec) -> Result<CountReport> {
    count_in(&u.group()?)
}

pub fn count_in(group: &Group) -> Result<CountReport> {
    let report = group.orbit_report()?;
    let per_orbit = report
        .orbits
        .iter()
        .map(|entry| {
            let s1 = s1_in(group, &entry.representative)?;
            let a = s1.len();
            Ok((a, restrict_to_minimal(&entry.representative, s1).len()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountReport::from_sizes(per_orbit))
}

/// `2^a·3^b·...`, trial-dividing by primes below 100 and appending any cofactor.
pub fn factored(x: &BigUint) -> String {
    let zero = BigUint::from(0u32);
    let one = BigUint::from(1u32);
    if *x == zero || *x == one {
        return x.to_string();
    }
    let mut rest = x.clone();
    let mut parts = Vec::new();
    for p in (2u32..100).filter(|&p| crate::arith::is_prime(p as u64)) {
        let bp = BigUint::from(p);
        let mut e = 0;
        while &rest % &bp == zero {
            rest /= &bp;
            e += 1;
        }
        match e {
            0 => {}
            1 => parts.push(p.to_string()),
            _ => parts.push(format!("{p}^{e}")),
        }
    }
    if rest != one {
        parts.push(rest.to_string());
    }
    parts.join("·")
}

mod biguint_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEntry {
    pub representative: Profile,
    pub choice: LinearOrder,
    /// The admissible choices, written out by `build --policy menu` for offline editing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Vec<LinearOrder>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCounts {
    pub r_u: usize,
    pub count_symmetric: String,
    pub count_min: String,
}

impl From<&CountReport> for RuleCounts {
    fn from(c: &CountReport) -> Self {
        RuleCounts {
            r_u: c.r_u,
            count_symmetric: c.count_symmetric.to_string(),
            count_min: c.count_min.to_string(),
        }
    }
}

struct Evaluator {
    group: Group,
    /// canonical form of each orbit mapped to its entry
    index: HashMap<Profile, usize>,
    /// the rule's value at each canonical form
    at_canonical: Vec<LinearOrder>,
}

#[derive(Default)]
struct Cache(OnceLock<std::result::Result<Evaluator, String>>);

impl Clone for Cache {
    fn clone(&self) -> Self {
        Cache::default()
    }
}

impl PartialEq for Cache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Cache {}

impl fmt::Debug for Cache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Cache")
    }
}

/// A `U`-symmetric rule: the social order chosen at one profile of each orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTable {
    pub h: usize,
    pub n: usize,
    pub subgroup: SubgroupSpec,
    pub minimal: bool,
    pub entries: Vec<RuleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<RuleCounts>,
    #[serde(skip)]
    cache: Cache,
}

/// Builds the rule with `F(p^j) = choices[j]` on the canonical representatives.
pub fn build_rule(u: &SubgroupSpec, choices: &[LinearOrder], minimal: bool) -> Result<RuleTable> {
    let group = u.group()?;
    let report = group.orbit_report()?;
    if choices.len() != report.r_u {
        return Err(Error::InvalidChoice {
            orbit: choices.len().min(report.r_u),
            reason: format!("{} choices for {} orbits", choices.len(), report.r_u),
        });
    }
    let mut entries = Vec::with_capacity(report.r_u);
    let mut per_orbit = Vec::with_capacity(report.r_u);
    for (j, (entry, q)) in report.orbits.iter().zip(choices).enumerate() {
        let p = &entry.representative;
        let s1 = s1_in(&group, p)?;
        let s2 = restrict_to_minimal(p, s1.clone());
        check_choice(j, p, q, &s1, &s2, minimal)?;
        per_orbit.push((s1.len(), s2.len()));
        entries.push(RuleEntry {
            representative: p.clone(),
            choice: q.clone(),
            options: None,
        });
    }
    let counts = CountReport::from_sizes(per_orbit);
    Ok(RuleTable {
        h: u.h(),
        n: u.n(),
        subgroup: u.clone(),
        minimal,
        entries,
        counts: Some(RuleCounts::from(&counts)),
        cache: Cache::default(),
    })
}

fn check_choice(
    orbit: usize,
    p: &Profile,
    q: &LinearOrder,
    s1: &[LinearOrder],
    s2: &[LinearOrder],
    minimal: bool,
) -> Result<()> {
    if q.n() != p.n() {
        return Err(Error::InvalidChoice {
            orbit,
            reason: format!("{q} does not rank {} alternatives", p.n()),
        });
    }
    if !s1.contains(q) {
        return Err(Error::InvalidChoice {
            orbit,
            reason: format!("{q} is not fixed by the stabilizer of {p}"),
        });
    }
    if minimal && !s2.contains(q) {
        return Err(Error::InvalidChoice {
            orbit,
            reason: format!("{q} is not consistent with the minimal majority at {p}"),
        });
    }
    Ok(())
}

impl RuleTable {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parses and checks a rule document.
    pub fn from_json(text: &str) -> Result<RuleTable> {
        let rule: RuleTable = serde_json::from_str(text)?;
        rule.validate()?;
        Ok(rule)
    }

    /// Checks that the entries describe a well-defined rule on all of `P`: each choice is
    /// admissible, representatives lie in distinct orbits, and the orbits cover `P`.
    pub fn validate(&self) -> Result<()> {
        if self.subgroup.h() != self.h || self.subgroup.n() != self.n {
            return Err(Error::DimensionMismatch {
                h: self.h,
                n: self.n,
                found_h: self.subgroup.h(),
                found_n: self.subgroup.n(),
            });
        }
        let ev = self.evaluator()?;
        let mut covered: u128 = 0;
        for (j, e) in self.entries.iter().enumerate() {
            let p = &e.representative;
            let s1 = s1_in(&ev.group, p)?;
            let s2 = if self.minimal {
                restrict_to_minimal(p, s1.clone())
            } else {
                Vec::new()
            };
            check_choice(j, p, &e.choice, &s1, &s2, self.minimal)?;
            let stab = ev.group.stabilizer(p)?.len();
            covered += (ev.group.order() / stab) as u128;
        }
        let base = crate::arith::factorial(self.n as u64).unwrap_or(u128::MAX);
        let total = (0..self.h).try_fold(1u128, |acc, _| acc.checked_mul(base));
        if total != Some(covered) {
            return Err(Error::InvalidChoice {
                orbit: self.entries.len(),
                reason: format!("the orbits cover {covered} profiles, not all of them"),
            });
        }
        Ok(())
    }

    fn evaluator(&self) -> Result<&Evaluator> {
        let built = self
            .cache
            .0
            .get_or_init(|| self.build_evaluator().map_err(|e| e.to_string()));
        built.as_ref().map_err(|e| Error::Invariant(e.clone()))
    }

    fn build_evaluator(&self) -> Result<Evaluator> {
        let group = self.subgroup.group()?;
        let mut index = HashMap::with_capacity(self.entries.len());
        let mut at_canonical = Vec::with_capacity(self.entries.len());
        for (j, e) in self.entries.iter().enumerate() {
            // rep^t = c, so F(c) = psi_t F(rep) rho_t
            let (c, t) = group.transporter_to_canonical(&e.representative)?;
            if index.insert(c, j).is_some() {
                return Err(Error::InvalidChoice {
                    orbit: j,
                    reason: "two entries lie in the same orbit".into(),
                });
            }
            at_canonical.push(t.transform_order(&e.choice));
        }
        Ok(Evaluator {
            group,
            index,
            at_canonical,
        })
    }

    /// `F(p)`.
    pub fn evaluate(&self, p: &Profile) -> Result<LinearOrder> {
        let ev = self.evaluator()?;
        let (c, g) = ev.group.transporter_to_canonical(p)?;
        let j = *ev
            .index
            .get(&c)
            .ok_or_else(|| Error::Invariant(format!("no entry for the orbit of {p}")))?;
        // p^g = c, so p = c^(g^-1) and F(p) = psi_g^-1 F(c) rho_g
        Ok(g.inverse().transform_order(&ev.at_canonical[j]))
    }

    /// `F` on every profile, indexed in lexicographic profile order.
    pub fn evaluate_all(&self) -> Result<Vec<LinearOrder>> {
        let ev = self.evaluator()?;
        let codec = ProfileCodec::new(self.h, self.n, PROFILE_CAP)?;
        let action = IndexAction::new(&codec, ev.group.elements());
        let mut out: Vec<Option<LinearOrder>> = vec![None; codec.total() as usize];
        let mut image = vec![0u32; self.h];
        for e in &self.entries {
            let digits = codec.digits(&e.representative);
            for (k, g) in ev.group.elements().iter().enumerate() {
                action.apply(k, &digits, &mut image);
                out[codec.encode(&image) as usize] = Some(g.transform_order(&e.choice));
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(i, q)| {
                q.ok_or_else(|| Error::Invariant(format!("profile {i} lies in no listed orbit")))
            })
            .collect()
    }

    /// Sweeps every profile and group element for the symmetry and minimality laws.
    pub fn check_laws(&self) -> Result<LawReport> {
        let ev = self.evaluator()?;
        let values = self.evaluate_all()?;
        let codec = ProfileCodec::new(self.h, self.n, PROFILE_CAP)?;
        let action = IndexAction::new(&codec, ev.group.elements());
        let mut digits = vec![0u32; self.h];
        let mut image = vec![0u32; self.h];
        let mut report = LawReport {
            profiles: codec.total(),
            group_order: ev.group.order(),
            symmetry_failure: None,
            minimality_failure: None,
        };
        for idx in 0..codec.total() {
            codec.decode(idx, &mut digits);
            let value = &values[idx as usize];
            if report.minimality_failure.is_none() {
                let p = codec.profile(&digits);
                let counts = SupportCounts::new(&p);
                let nu = counts.nu_min();
                if !majority::sigma_from_counts(counts, nu).is_respected_by(value) {
                    report.minimality_failure = Some(p);
                }
            }
            if report.symmetry_failure.is_some() {
                continue;
            }
            for (k, g) in ev.group.elements().iter().enumerate() {
                action.apply(k, &digits, &mut image);
                if values[codec.encode(&image) as usize] != g.transform_order(value) {
                    report.symmetry_failure = Some((codec.profile(&digits), g.clone()));
                    break;
                }
            }
        }
        if !self.minimal {
            report.minimality_failure = None;
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub profiles: u64,
    pub group_order: usize,
    /// `(p, g)` with `F(p^g) != psi F(p) rho`.
    pub symmetry_failure: Option<(Profile, GroupElement)>,
    /// A profile where a minimal rule leaves `C_nu(p)(p)`.
    pub minimality_failure: Option<Profile>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.symmetry_failure.is_none() && self.minimality_failure.is_none()
    }
}

/// `evaluate` as a free function.
pub fn evaluate(rule: &RuleTable, p: &Profile) -> Result<LinearOrder> {
    rule.evaluate(p)
}

/// Every `U`-symmetric minimal majority rule, as the product of the per-orbit `S2` sets.
pub fn enumerate_min_rules(u: &SubgroupSpec, cap: u64) -> Result<Vec<RuleTable>> {
    let group = u.group()?;
    let report = group.orbit_report()?;
    let mut options = Vec::with_capacity(report.r_u);
    for entry in &report.orbits {
        options.push(s2_in(&group, &entry.representative)?);
    }
    let total: BigUint = options.iter().map(|o| BigUint::from(o.len())).product();
    if total > BigUint::from(cap) {
        return Err(Error::TooManyRules {
            count: total.to_string(),
            cap,
        });
    }
    let per_orbit = options.iter().map(|o| o.len()).collect::<Vec<_>>();
    let counts = RuleCounts {
        r_u: report.r_u,
        count_symmetric: count_in(&group)?.count_symmetric.to_string(),
        count_min: total.to_string(),
    };
    let mut rules = Vec::new();
    if per_orbit.contains(&0) {
        return Ok(rules);
    }
    // odometer over choices, last orbit fastest
    let mut pick = vec![0usize; options.len()];
    loop {
        let entries = report
            .orbits
            .iter()
            .zip(&options)
            .zip(&pick)
            .map(|((e, o), &k)| RuleEntry {
                representative: e.representative.clone(),
                choice: o[k].clone(),
                options: None,
            })
            .collect();
        rules.push(RuleTable {
            h: u.h(),
            n: u.n(),
            subgroup: u.clone(),
            minimal: true,
            entries,
            counts: Some(counts.clone()),
            cache: Cache::default(),
        });
        let mut i = pick.len();
        loop {
            if i == 0 {
                return Ok(rules);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < per_orbit[i] {
                break;
            }
            pick[i] = 0;
        }
    }
}

impl RuleTable {
    /// Assembles a table from parts without checking it; see [`RuleTable::validate`].
    pub fn from_entries(
        subgroup: SubgroupSpec,
        minimal: bool,
        entries: Vec<RuleEntry>,
        counts: Option<RuleCounts>,
    ) -> RuleTable {
        RuleTable {
            h: subgroup.h(),
            n: subgroup.n(),
            subgroup,
            minimal,
            entries,
            counts,
            cache: Cache::default(),
        }
    }

    pub fn choices(&self) -> Vec<LinearOrder> {
        self.entries.iter().map(|e| e.choice.clone()).collect()
    }
}
