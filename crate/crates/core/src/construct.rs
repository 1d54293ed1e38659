//! Explicit minimal majority choices for regular subgroups.
//!
//! Given a profile `p` fixed by some `(phi, psi, rho0)` with `psi` conjugate to `rho0`,
//! the order `q` built here is fixed by the whole stabilizer and contains `Sigma_nu(p)`.
//! It is assembled from the chain relation of `Sigma_nu(p)`, the set `Gamma` of
//! alternatives forced into the upper half, and a completion of the remaining pairs.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Group, SubgroupSpec};
use crate::majority::{self, least_extension, MajorityRelation};
use crate::perm::Permutation;
use crate::prefs::{LinearOrder, Profile, Rho};
use crate::regularity;
use crate::rules::{self, RuleTable};

/// `Sigma_nu(p)` together with its chain relation `Sigma^C_nu(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRelation {
    pub base: MajorityRelation,
    pub closure: BTreeSet<(usize, usize)>,
}

impl ChainRelation {
    /// `x` reaches `y` through a chain.
    pub fn reaches(&self, x: usize, y: usize) -> bool {
        self.closure.contains(&(x, y))
    }

    /// `Gamma(z)`: the alternatives with a chain ending at `z`.
    pub fn predecessors(&self, z: usize) -> BTreeSet<usize> {
        self.closure
            .iter()
            .filter(|&&(_, y)| y == z)
            .map(|&(x, _)| x)
            .collect()
    }
}

pub fn chain_closure(p: &Profile, nu: usize) -> Result<ChainRelation> {
    let base = majority::sigma(p, nu)?;
    if !base.is_acyclic() {
        return Err(Error::CyclicRelation { nu });
    }
    let n = base.n();
    let mut reach = base.adjacency();
    // Floyd-Warshall; on an acyclic relation every walk is a simple path
    for k in 0..n {
        let through = reach[k].clone();
        for row in reach.iter_mut().filter(|row| row[k]) {
            for (cell, &t) in row.iter_mut().zip(&through) {
                *cell |= t;
            }
        }
    }
    let mut closure = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r {
                closure.insert((i + 1, j + 1));
            }
        }
    }
    Ok(ChainRelation { base, closure })
}

/// The sets driving the construction, for one `psi` and one threshold.
///
/// Alternatives are 1-based. `psi_orbits` lists the 2-element orbits of `psi`, each as
/// `(x_j, psi(x_j))` with `x_j` the smaller member, ordered by `x_j`; the fixed point
/// of `psi` (odd `n`) is kept apart. `j` and `j_star` index into `psi_orbits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaDecomposition {
    pub psi: Permutation,
    pub nu: usize,
    pub chains: ChainRelation,
    pub psi_orbits: Vec<(usize, usize)>,
    pub fixed_point: Option<usize>,
    pub gamma: BTreeSet<usize>,
    pub j: Vec<usize>,
    pub j_star: Vec<usize>,
    pub t_set: BTreeSet<usize>,
    /// The chosen `f` in `C_nu(p, T)`, best first.
    pub f: Vec<usize>,
    /// `y_j` for every pair, in the order of `psi_orbits`.
    pub upper: Vec<usize>,
    /// `M`, sorted by `f`: `a_1, ..., a_{n/2}`.
    pub m: Vec<usize>,
}

impl GammaDecomposition {
    /// `[a_1, .., a_k, (fixed point), psi(a_k), .., psi(a_1)]`.
    pub fn witness(&self) -> LinearOrder {
        let mut ranking = self.m.clone();
        ranking.extend(self.fixed_point);
        ranking.extend(self.m.iter().rev().map(|&a| self.psi.apply(a)));
        LinearOrder::new(&ranking).expect("M and psi(M) partition the pairs")
    }

    /// A pair `(psi(x), y)` in `Sigma_nu` with `x, y` in `M`, which the construction rules out.
    pub fn crossing_edge(&self) -> Option<(usize, usize)> {
        self.m.iter().find_map(|&x| {
            let px = self.psi.apply(x);
            self.m
                .iter()
                .find(|&&y| self.chains.base.contains(px, y))
                .map(|&y| (px, y))
        })
    }
}

pub fn gamma_decomposition(
    p: &Profile,
    psi: &Permutation,
    nu: usize,
) -> Result<GammaDecomposition> {
    let n = p.n();
    if psi.degree() != n {
        return Err(Error::DegreeMismatch {
            left: psi.degree(),
            right: n,
        });
    }
    if !psi.is_conjugate_to_reversal() {
        return Err(Error::NotConjugateToReversal(psi.to_string()));
    }
    let chains = chain_closure(p, nu)?;

    let mut psi_orbits = Vec::new();
    let mut fixed_point = None;
    for x in 1..=n {
        let y = psi.apply(x);
        if y == x {
            fixed_point = Some(x);
        } else if x < y {
            psi_orbits.push((x, y));
        }
    }

    let gamma: BTreeSet<usize> = (1..=n)
        .flat_map(|z| {
            let below_psi = chains.predecessors(psi.apply(z));
            chains
                .predecessors(z)
                .into_iter()
                .filter(move |x| below_psi.contains(x))
        })
        .collect();
    if let Some(x) = gamma.iter().find(|&&x| gamma.contains(&psi.apply(x))) {
        return Err(Error::Invariant(format!(
            "{x} and {} both lie in Gamma; {psi} does not fix the profile's majority",
            psi.apply(*x)
        )));
    }

    let mut j = Vec::new();
    let mut j_star = Vec::new();
    let mut t_set = BTreeSet::new();
    for (idx, &(a, b)) in psi_orbits.iter().enumerate() {
        if gamma.contains(&a) {
            j.push(idx);
            t_set.insert(a);
        } else if gamma.contains(&b) {
            j.push(idx);
            t_set.insert(b);
        } else {
            j_star.push(idx);
            t_set.insert(a);
            t_set.insert(b);
        }
    }

    let mut mask = vec![false; n];
    for &x in &t_set {
        mask[x - 1] = true;
    }
    let f: Vec<usize> = least_extension(&chains.base.adjacency(), Some(&mask))
        .ok_or(Error::CyclicRelation { nu })?
        .into_iter()
        .map(|x| x + 1)
        .collect();
    let mut rank = vec![usize::MAX; n + 1];
    for (r, &x) in f.iter().enumerate() {
        rank[x] = r;
    }

    let upper: Vec<usize> = psi_orbits
        .iter()
        .map(|&(a, b)| {
            if gamma.contains(&b) || (!gamma.contains(&a) && rank[b] < rank[a]) {
                b
            } else {
                a
            }
        })
        .collect();
    let mut m = upper.clone();
    m.sort_by_key(|&x| rank[x]);

    let decomposition = GammaDecomposition {
        psi: psi.clone(),
        nu,
        chains,
        psi_orbits,
        fixed_point,
        gamma,
        j,
        j_star,
        t_set,
        f,
        upper,
        m,
    };
    if let Some((x, y)) = decomposition.crossing_edge() {
        return Err(Error::Invariant(format!(
            "{x} is preferred to {y} by at least {nu} individuals across the halves"
        )));
    }
    Ok(decomposition)
}

/// An order in `S2` for `p`, see the module docs.
pub fn build_witness(u: &SubgroupSpec, p: &Profile) -> Result<LinearOrder> {
    let group = u.group()?;
    regularity::verdict_for(&group).into_result()?;
    witness_in(&group, p)
}

/// [`build_witness`] for a group already known to be regular.
pub(crate) fn witness_in(group: &Group, p: &Profile) -> Result<LinearOrder> {
    let stab = group.stabilizer(p)?;
    let nu = majority::nu_min(p);
    let mut psi: Option<&Permutation> = None;
    for g in stab.iter().filter(|g| g.rho == Rho::Reversal) {
        match psi {
            None => psi = Some(&g.psi),
            Some(s) if *s != g.psi => {
                return Err(Error::Invariant(format!(
                    "stabilizer of {p} reverses with both {s} and {}",
                    g.psi
                )))
            }
            Some(_) => {}
        }
    }
    let q = match psi {
        None => {
            let rel = majority::sigma(p, nu)?;
            let order =
                least_extension(&rel.adjacency(), None).ok_or(Error::CyclicRelation { nu })?;
            LinearOrder::from_zero_based(order)
        }
        Some(psi) => gamma_decomposition(p, psi, nu)?.witness(),
    };
    debug_assert!(stab.iter().all(|g| g.transform_order(&q) == q));
    Ok(q)
}

/// A minimal majority `U`-symmetric rule, choosing [`build_witness`] on every orbit.
pub fn build_min_rule(u: &SubgroupSpec) -> Result<RuleTable> {
    let group = u.group()?;
    regularity::verdict_for(&group).into_result()?;
    let report = group.orbit_report()?;
    let choices = report
        .orbits
        .iter()
        .map(|e| witness_in(&group, &e.representative))
        .collect::<Result<Vec<_>>>()?;
    rules::build_rule(u, &choices, true)
}
