//! Subgroups `U` of `G = S_h x S_n x Omega`, their elements, and orbits of profiles.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::perm::Permutation;
use crate::prefs::{GroupElement, LinearOrder, Profile, Rho};

/// Largest profile space `orbit_report` will sweep.
pub const PROFILE_CAP: u128 = 10_000_000;
/// Largest subgroup `elements` will list.
pub const ORDER_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupSpec {
    /// `V(B) x W(C) x Omega` (or `x {id}`).
    PartitionProduct {
        committees: Partition,
        classes: Partition,
        with_reversal: bool,
    },
    Generated {
        h: usize,
        n: usize,
        generators: Vec<GroupElement>,
    },
    FullTriple {
        h: usize,
        n: usize,
        anonymous: bool,
        neutral: bool,
        with_reversal: bool,
    },
}

impl SubgroupSpec {
    pub fn partition_product(
        committees: Partition,
        classes: Partition,
        with_reversal: bool,
    ) -> Self {
        SubgroupSpec::PartitionProduct {
            committees,
            classes,
            with_reversal,
        }
    }

    /// `S_h x S_n x Omega`, or `S_h x S_n x {id}`.
    pub fn full(h: usize, n: usize, with_reversal: bool) -> Self {
        SubgroupSpec::FullTriple {
            h,
            n,
            anonymous: true,
            neutral: true,
            with_reversal,
        }
    }

    pub fn trivial(h: usize, n: usize) -> Self {
        SubgroupSpec::FullTriple {
            h,
            n,
            anonymous: false,
            neutral: false,
            with_reversal: false,
        }
    }

    pub fn h(&self) -> usize {
        match self {
            SubgroupSpec::PartitionProduct { committees, .. } => committees.ground(),
            SubgroupSpec::Generated { h, .. } | SubgroupSpec::FullTriple { h, .. } => *h,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SubgroupSpec::PartitionProduct { classes, .. } => classes.ground(),
            SubgroupSpec::Generated { n, .. } | SubgroupSpec::FullTriple { n, .. } => *n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (h, n) = (self.h(), self.n());
        if h < 2 || n < 2 {
            return Err(Error::InvalidProfile(format!(
                "need h >= 2 and n >= 2, got h = {h}, n = {n}"
            )));
        }
        if let SubgroupSpec::Generated { generators, .. } = self {
            for g in generators {
                if g.h() != h || g.n() != n {
                    return Err(Error::DimensionMismatch {
                        h,
                        n,
                        found_h: g.h(),
                        found_n: g.n(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The `(B, C, with_reversal)` description, when there is one.
    pub fn as_partition_product(&self) -> Option<(Partition, Partition, bool)> {
        match self {
            SubgroupSpec::PartitionProduct {
                committees,
                classes,
                with_reversal,
            } => Some((committees.clone(), classes.clone(), *with_reversal)),
            SubgroupSpec::FullTriple {
                h,
                n,
                anonymous,
                neutral,
                with_reversal,
            } => {
                let b = if *anonymous {
                    Partition::whole(*h)
                } else {
                    Partition::singletons(*h)
                };
                let c = if *neutral {
                    Partition::whole(*n)
                } else {
                    Partition::singletons(*n)
                };
                Some((b, c, *with_reversal))
            }
            SubgroupSpec::Generated { .. } => None,
        }
    }

    /// `|U|` without listing it, where that is possible.
    pub fn order_hint(&self) -> Option<u128> {
        let (b, c, rev) = self.as_partition_product()?;
        b.group_order()?
            .checked_mul(c.group_order()?)?
            .checked_mul(if rev { 2 } else { 1 })
    }

    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.elements_with_cap(ORDER_CAP)
    }

    /// All elements of `U`, sorted.
    pub fn elements_with_cap(&self, cap: u128) -> Result<Vec<GroupElement>> {
        self.validate()?;
        let (h, n) = (self.h(), self.n());
        if let Some((b, c, rev)) = self.as_partition_product() {
            let required = self.order_hint().unwrap_or(u128::MAX);
            if required > cap {
                return Err(Error::CapExceeded {
                    what: "subgroup",
                    required,
                    cap,
                });
            }
            let phis = b.block_permutations();
            let psis = c.block_permutations();
            let rhos: &[Rho] = if rev {
                &[Rho::Identity, Rho::Reversal]
            } else {
                &[Rho::Identity]
            };
            let mut out = Vec::with_capacity(required as usize);
            for phi in &phis {
                for psi in &psis {
                    for &rho in rhos {
                        out.push(GroupElement::new(phi.clone(), psi.clone(), rho));
                    }
                }
            }
            return Ok(out);
        }
        let SubgroupSpec::Generated { generators, .. } = self else {
            unreachable!("non-generated specs have a partition form")
        };
        let id = GroupElement::identity(h, n);
        let mut seen: HashSet<GroupElement> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.mul(g);
                if seen.insert(y.clone()) {
                    if seen.len() as u128 > cap {
                        return Err(Error::CapExceeded {
                            what: "subgroup",
                            required: seen.len() as u128,
                            cap,
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<GroupElement> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn group(&self) -> Result<Group> {
        Group::new(self)
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::Generated { generators, .. } => {
                let gens: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
                write!(f, "<{}>", gens.join(", "))
            }
            _ => {
                let (b, c, rev) = self.as_partition_product().expect("partition form");
                write!(
                    f,
                    "V({b}) x W({c}) x {}",
                    if rev { "Omega" } else { "{id}" }
                )
            }
        }
    }
}

/// Lexicographic rank of a ranking among all orders of the same length.
pub(crate) fn order_index(ranking: &[usize]) -> usize {
    let n = ranking.len();
    let mut idx = 0;
    for i in 0..n {
        let smaller = ranking[i + 1..].iter().filter(|&&y| y < ranking[i]).count();
        idx = idx * (n - i) + smaller;
    }
    idx
}

/// Profiles as mixed-radix integers: column 1 is the most significant digit and
/// each digit is the lexicographic rank of the column. Index order is profile order.
pub(crate) struct ProfileCodec {
    orders: Vec<LinearOrder>,
    total: u64,
}

impl ProfileCodec {
    pub(crate) fn new(h: usize, n: usize, cap: u128) -> Result<Self> {
        let base = arith::factorial(n as u64).unwrap_or(u128::MAX);
        let total = (0..h)
            .try_fold(1u128, |acc, _| acc.checked_mul(base))
            .unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::CapExceeded {
                what: "profile space",
                required: total,
                cap,
            });
        }
        Ok(ProfileCodec {
            orders: LinearOrder::all(n),
            total: total as u64,
        })
    }

    pub(crate) fn total(&self) -> u64 {
        self.total
    }

    pub(crate) fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    fn base(&self) -> u64 {
        self.orders.len() as u64
    }

    pub(crate) fn encode(&self, digits: &[u32]) -> u64 {
        let base = self.base();
        digits.iter().fold(0, |acc, &d| acc * base + d as u64)
    }

    pub(crate) fn decode(&self, mut idx: u64, digits: &mut [u32]) {
        let base = self.base();
        for d in digits.iter_mut().rev() {
            *d = (idx % base) as u32;
            idx /= base;
        }
    }

    pub(crate) fn profile(&self, digits: &[u32]) -> Profile {
        Profile::from_columns_unchecked(
            digits
                .iter()
                .map(|&d| self.orders[d as usize].clone())
                .collect(),
        )
    }

    pub(crate) fn digits(&self, p: &Profile) -> Vec<u32> {
        p.columns()
            .iter()
            .map(|c| order_index(c.ranking0()) as u32)
            .collect()
    }
}

/// The action of each element of `U` on profile indices.
pub(crate) struct IndexAction {
    phis: Vec<Vec<usize>>,
    table_of: Vec<usize>,
    tables: Vec<Vec<u32>>,
}

impl IndexAction {
    pub(crate) fn new(codec: &ProfileCodec, elements: &[GroupElement]) -> Self {
        let mut slot: BTreeMap<(&Permutation, Rho), usize> = BTreeMap::new();
        let mut tables = Vec::new();
        let mut table_of = Vec::with_capacity(elements.len());
        for g in elements {
            let t = *slot.entry((&g.psi, g.rho)).or_insert_with(|| {
                tables.push(
                    codec
                        .orders()
                        .iter()
                        .map(|q| order_index(g.transform_order(q).ranking0()) as u32)
                        .collect(),
                );
                tables.len() - 1
            });
            table_of.push(t);
        }
        IndexAction {
            phis: elements
                .iter()
                .map(|g| g.phi.as_zero_based().to_vec())
                .collect(),
            table_of,
            tables,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.phis.len()
    }

    /// Digits of `p^g` for the `k`-th element `g`.
    pub(crate) fn apply(&self, k: usize, digits: &[u32], out: &mut [u32]) {
        let phi = &self.phis[k];
        let table = &self.tables[self.table_of[k]];
        for (i, &d) in digits.iter().enumerate() {
            out[phi[i]] = table[d as usize];
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub representative: Profile,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub h: usize,
    pub n: usize,
    pub group_order: u64,
    pub r_u: usize,
    pub orbits: Vec<OrbitEntry>,
}

impl OrbitReport {
    pub fn representatives(&self) -> Vec<&Profile> {
        self.orbits.iter().map(|o| &o.representative).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.orbit_size).collect()
    }

    /// Orbit size mapped to the number of orbits of that size.
    pub fn size_multiset(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for o in &self.orbits {
            *m.entry(o.orbit_size).or_insert(0) += 1;
        }
        m
    }
}

/// A subgroup with its elements listed once.
#[derive(Clone, Debug)]
pub struct Group {
    spec: SubgroupSpec,
    elements: Vec<GroupElement>,
}

impl Group {
    pub fn new(spec: &SubgroupSpec) -> Result<Self> {
        Self::with_cap(spec, ORDER_CAP)
    }

    pub fn with_cap(spec: &SubgroupSpec, cap: u128) -> Result<Self> {
        Ok(Group {
            spec: spec.clone(),
            elements: spec.elements_with_cap(cap)?,
        })
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn h(&self) -> usize {
        self.spec.h()
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub(crate) fn check(&self, p: &Profile) -> Result<()> {
        if p.h() != self.h() || p.n() != self.n() {
            return Err(Error::DimensionMismatch {
                h: self.h(),
                n: self.n(),
                found_h: p.h(),
                found_n: p.n(),
            });
        }
        Ok(())
    }

    pub fn stabilizer(&self, p: &Profile) -> Result<Vec<GroupElement>> {
        self.check(p)?;
        Ok(self
            .elements
            .iter()
            .filter(|g| p.act_unchecked(g) == *p)
            .cloned()
            .collect())
    }

    /// The orbit of `p`, sorted.
    pub fn orbit(&self, p: &Profile) -> Result<Vec<Profile>> {
        self.check(p)?;
        let set: BTreeSet<Profile> = self.elements.iter().map(|g| p.act_unchecked(g)).collect();
        Ok(set.into_iter().collect())
    }

    /// The least profile in the orbit of `p`.
    pub fn canonical(&self, p: &Profile) -> Result<Profile> {
        Ok(self.transporter_to_canonical(p)?.0)
    }

    /// The least profile `c` in the orbit of `p` and the first element `g` with `p^g = c`.
    pub fn transporter_to_canonical(&self, p: &Profile) -> Result<(Profile, GroupElement)> {
        self.check(p)?;
        let mut best: Option<(Profile, &GroupElement)> = None;
        for g in &self.elements {
            let image = p.act_unchecked(g);
            if best.as_ref().is_none_or(|(b, _)| image < *b) {
                best = Some((image, g));
            }
        }
        let (c, g) = best.expect("a group has an identity");
        Ok((c, g.clone()))
    }

    pub fn orbit_report(&self) -> Result<OrbitReport> {
        self.orbit_report_with_cap(PROFILE_CAP)
    }

    /// One lexicographically least representative per orbit, in increasing order.
    pub fn orbit_report_with_cap(&self, cap: u128) -> Result<OrbitReport> {
        let (h, n) = (self.h(), self.n());
        let codec = ProfileCodec::new(h, n, cap)?;
        let action = IndexAction::new(&codec, &self.elements);
        let total = codec.total();
        let mut visited = vec![0u64; total.div_ceil(64) as usize];
        let mut digits = vec![0u32; h];
        let mut image = vec![0u32; h];
        let mut orbits = Vec::new();
        let order = self.order() as u64;
        for idx in 0..total {
            if visited[(idx / 64) as usize] >> (idx % 64) & 1 == 1 {
                continue;
            }
            codec.decode(idx, &mut digits);
            let mut size = 0u64;
            let mut stab = 0u64;
            for k in 0..action.len() {
                action.apply(k, &digits, &mut image);
                let j = codec.encode(&image);
                if j == idx {
                    stab += 1;
                }
                let word = &mut visited[(j / 64) as usize];
                if *word >> (j % 64) & 1 == 0 {
                    *word |= 1 << (j % 64);
                    size += 1;
                }
            }
            if size * stab != order {
                return Err(Error::Invariant(format!(
                    "orbit of size {size} with stabilizer of order {stab} in a group of order {order}"
                )));
            }
            orbits.push(OrbitEntry {
                representative: codec.profile(&digits),
                orbit_size: size,
                stabilizer_order: stab,
            });
        }
        Ok(OrbitReport {
            h,
            n,
            group_order: order,
            r_u: orbits.len(),
            orbits,
        })
    }
}

pub fn elements(u: &SubgroupSpec) -> Result<Vec<GroupElement>> {
    u.elements()
}

pub fn stabilizer(u: &SubgroupSpec, p: &Profile) -> Result<Vec<GroupElement>> {
    Group::new(u)?.stabilizer(p)
}

pub fn orbit(u: &SubgroupSpec, p: &Profile) -> Result<Vec<Profile>> {
    Group::new(u)?.orbit(p)
}

pub fn orbit_report(u: &SubgroupSpec) -> Result<OrbitReport> {
    Group::new(u)?.orbit_report()
}
