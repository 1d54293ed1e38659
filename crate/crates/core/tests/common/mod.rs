#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use symrules::{GroupElement, LinearOrder, MajorityRelation, Permutation, Profile, SupportCounts};

pub fn random_profile<R: Rng>(h: usize, n: usize, rng: &mut R) -> Profile {
    let orders = LinearOrder::all(n);
    Profile::new(
        (0..h)
            .map(|_| orders.choose(rng).unwrap().clone())
            .collect(),
    )
    .unwrap()
}

/// A random profile fixed by `g`, or `None` when some cycle of `phi` admits no column.
pub fn fixed_profile<R: Rng>(g: &GroupElement, rng: &mut R) -> Option<Profile> {
    let orders = LinearOrder::all(g.n());
    let mut columns: Vec<Option<LinearOrder>> = vec![None; g.h()];
    for cycle in g.phi.orbits() {
        let len = cycle.len();
        let candidates: Vec<&LinearOrder> = orders
            .iter()
            .filter(|q| (0..len).fold((*q).clone(), |acc, _| g.transform_order(&acc)) == **q)
            .collect();
        let mut q = (*candidates.choose(rng)?).clone();
        let mut i = cycle[0];
        for _ in 0..len {
            columns[i - 1] = Some(q.clone());
            q = g.transform_order(&q);
            i = g.phi.apply(i);
        }
    }
    Profile::new(columns.into_iter().map(Option::unwrap).collect()).ok()
}

/// Orders fixed by every element of `stab` and ranking `x` over `y` whenever at least `nu`
/// individuals do, by scanning all `n!` orders and counting pairs directly.
pub fn s2_oracle(stab: &[GroupElement], p: &Profile, nu: usize) -> Vec<LinearOrder> {
    let n = p.n();
    let support = |x: usize, y: usize| {
        p.columns()
            .iter()
            .filter(|c| c.rank_of(x) < c.rank_of(y))
            .count()
    };
    LinearOrder::all(n)
        .into_iter()
        .filter(|q| stab.iter().all(|g| g.transform_order(q) == *q))
        .filter(|q| {
            (1..=n).all(|x| {
                (1..=n).all(|y| x == y || support(x, y) < nu || q.rank_of(x) < q.rank_of(y))
            })
        })
        .collect()
}

/// `x` reaches `z` along a simple path of edges.
pub fn has_path(rel: &MajorityRelation, x: usize, z: usize) -> bool {
    fn dfs(rel: &MajorityRelation, at: usize, z: usize, seen: &mut [bool]) -> bool {
        for y in 1..seen.len() {
            if seen[y] || !rel.contains(at, y) {
                continue;
            }
            if y == z {
                return true;
            }
            seen[y] = true;
            let found = dfs(rel, y, z, seen);
            seen[y] = false;
            if found {
                return true;
            }
        }
        false
    }
    let mut seen = vec![false; rel.n() + 1];
    seen[x] = true;
    dfs(rel, x, z, &mut seen)
}

pub fn gamma_oracle(rel: &MajorityRelation, psi: &Permutation) -> BTreeSet<usize> {
    let n = rel.n();
    (1..=n)
        .filter(|&x| (1..=n).any(|z| has_path(rel, x, z) && has_path(rel, x, psi.apply(z))))
        .collect()
}

/// The least `nu > h/2` whose pair relation has no cycle, by trying every order.
pub fn nu_oracle(p: &Profile) -> usize {
    let counts = SupportCounts::new(p);
    let h = p.h();
    (h / 2 + 1..=h)
        .find(|&nu| {
            LinearOrder::all(p.n()).iter().any(|q| {
                (1..=p.n()).all(|x| {
                    (1..=p.n())
                        .all(|y| x == y || counts.get(x, y) < nu || q.rank_of(x) < q.rank_of(y))
                })
            })
        })
        .unwrap()
}
