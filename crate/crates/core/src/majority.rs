//! Qualified majority relations, the sets `C_nu(p)`, the threshold `nu(p)` and simple majority.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prefs::{LinearOrder, Profile};

/// `counts[x][y]` = number of individuals ranking `x` above `y` (0-based internally).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCounts {
    h: usize,
    n: usize,
    counts: Vec<usize>,
}

impl SupportCounts {
    pub fn new(p: &Profile) -> Self {
        let (h, n) = (p.h(), p.n());
        let mut counts = vec![0; n * n];
        for col in p.columns() {
            let r = col.ranking0();
            for i in 0..n {
                for j in i + 1..n {
                    counts[r[i] * n + r[j]] += 1;
                }
            }
        }
        SupportCounts { h, n, counts }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|{i : x >_{p_i} y}|` for 1-based alternatives.
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.counts[(x - 1) * self.n + (y - 1)]
    }

    fn get0(&self, x: usize, y: usize) -> usize {
        self.counts[x * self.n + y]
    }

    /// 0-based adjacency of the pairs supported by at least `nu` individuals.
    pub(crate) fn adjacency(&self, nu: usize) -> Vec<Vec<bool>> {
        let n = self.n;
        (0..n)
            .map(|x| (0..n).map(|y| x != y && self.get0(x, y) >= nu).collect())
            .collect()
    }

    /// Smallest `nu` in `(h/2, h]` whose relation is acyclic.
    pub fn nu_min(&self) -> usize {
        let h = self.h;
        (h / 2 + 1..=h)
            .find(|&nu| least_extension(&self.adjacency(nu), None).is_some())
            .expect("the relation at nu = h is acyclic")
    }
}

impl Serialize for SupportCounts {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[usize]> = self.counts.chunks(self.n).collect();
        rows.serialize(serializer)
    }
}

/// `Sigma_nu(p)`: pairs `(x, y)` preferred by at least `nu` individuals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MajorityRelation {
    pub threshold: usize,
    pub edges: BTreeSet<(usize, usize)>,
    pub support_counts: SupportCounts,
}

impl MajorityRelation {
    pub fn n(&self) -> usize {
        self.support_counts.n()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.edges.contains(&(x, y))
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<bool>> {
        self.support_counts.adjacency(self.threshold)
    }

    pub fn is_acyclic(&self) -> bool {
        least_extension(&self.adjacency(), None).is_some()
    }

    /// Whether `q` ranks `x` above `y` for every edge.
    pub fn is_respected_by(&self, q: &LinearOrder) -> bool {
        let pos = q.positions0();
        self.edges.iter().all(|&(x, y)| pos[x - 1] < pos[y - 1])
    }
}

pub(crate) fn check_threshold(h: usize, nu: usize) -> Result<()> {
    if 2 * nu <= h || nu > h {
        return Err(Error::InvalidThreshold { nu, h });
    }
    Ok(())
}

pub fn sigma(p: &Profile, nu: usize) -> Result<MajorityRelation> {
    check_threshold(p.h(), nu)?;
    Ok(sigma_from_counts(SupportCounts::new(p), nu))
}

pub(crate) fn sigma_from_counts(counts: SupportCounts, nu: usize) -> MajorityRelation {
    let n = counts.n();
    let mut edges = BTreeSet::new();
    for x in 1..=n {
        for y in 1..=n {
            if x != y && counts.get(x, y) >= nu {
                edges.insert((x, y));
            }
        }
    }
    MajorityRelation {
        threshold: nu,
        edges,
        support_counts: counts,
    }
}

/// `C_nu(p)`, lexicographically sorted. Empty exactly when `Sigma_nu(p)` has a cycle.
pub fn consistent_orders(p: &Profile, nu: usize) -> Result<Vec<LinearOrder>> {
    let rel = sigma(p, nu)?;
    Ok(orders_respecting(&rel))
}

pub(crate) fn orders_respecting(rel: &MajorityRelation) -> Vec<LinearOrder> {
    if rel.n() <= 6 {
        LinearOrder::all(rel.n())
            .into_iter()
            .filter(|q| rel.is_respected_by(q))
            .collect()
    } else {
        linear_extensions(&rel.adjacency())
    }
}

/// All linear extensions of a 0-based digraph, in lexicographic order.
pub(crate) fn linear_extensions(adj: &[Vec<bool>]) -> Vec<LinearOrder> {
    fn rec(
        adj: &[Vec<bool>],
        indegree: &mut [usize],
        used: &mut [bool],
        prefix: &mut Vec<usize>,
        out: &mut Vec<LinearOrder>,
    ) {
        let n = adj.len();
        if prefix.len() == n {
            out.push(LinearOrder::from_zero_based(prefix.clone()));
            return;
        }
        for x in 0..n {
            if used[x] || indegree[x] > 0 {
                continue;
            }
            used[x] = true;
            prefix.push(x);
            for y in 0..n {
                if adj[x][y] {
                    indegree[y] -= 1;
                }
            }
            rec(adj, indegree, used, prefix, out);
            for y in 0..n {
                if adj[x][y] {
                    indegree[y] += 1;
                }
            }
            prefix.pop();
            used[x] = false;
        }
    }
    let n = adj.len();
    let mut indegree: Vec<usize> = (0..n)
        .map(|y| (0..n).filter(|&x| adj[x][y]).count())
        .collect();
    let mut out = Vec::new();
    rec(
        adj,
        &mut indegree,
        &mut vec![false; n],
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Kahn's algorithm taking the smallest available vertex each time: the lexicographically
/// least topological order of the vertices in `subset` (all when `None`), or `None` on a cycle.
pub(crate) fn least_extension(adj: &[Vec<bool>], subset: Option<&[bool]>) -> Option<Vec<usize>> {
    let n = adj.len();
    let inside = |x: usize| subset.is_none_or(|s| s[x]);
    let mut indegree = vec![0usize; n];
    for x in (0..n).filter(|&x| inside(x)) {
        for y in (0..n).filter(|&y| inside(y)) {
            if adj[x][y] {
                indegree[y] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&x| inside(x) && indegree[x] == 0)
        .map(Reverse)
        .collect();
    let mut out = Vec::new();
    while let Some(Reverse(x)) = heap.pop() {
        out.push(x);
        for y in (0..n).filter(|&y| inside(y)) {
            if adj[x][y] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    heap.push(Reverse(y));
                }
            }
        }
    }
    let size = (0..n).filter(|&x| inside(x)).count();
    (out.len() == size).then_some(out)
}

/// `nu(p)`.
pub fn nu_min(p: &Profile) -> usize {
    SupportCounts::new(p).nu_min()
}

/// `S(p)`: `(x, y)` with `x != y` such that at least half the individuals weakly prefer `x`.
/// The diagonal pairs, always present, are left implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleMajorityRelation {
    pub pairs: BTreeSet<(usize, usize)>,
    pub is_linear: bool,
}

impl SimpleMajorityRelation {
    /// The relation as a linear order, when it is one.
    pub fn as_order(&self, n: usize) -> Option<LinearOrder> {
        if !self.is_linear {
            return None;
        }
        // x beats exactly n - 1 - rank(x) others
        let mut ranking: Vec<usize> = (1..=n).collect();
        ranking.sort_by_key(|&x| Reverse(self.pairs.iter().filter(|&&(a, _)| a == x).count()));
        LinearOrder::new(&ranking).ok()
    }
}

pub fn simple_majority(p: &Profile) -> SimpleMajorityRelation {
    let counts = SupportCounts::new(p);
    let (h, n) = (p.h(), p.n());
    let mut pairs = BTreeSet::new();
    for x in 1..=n {
        for y in 1..=n {
            if x != y && 2 * counts.get(x, y) >= h {
                pairs.insert((x, y));
            }
        }
    }
    let antisymmetric = pairs.iter().all(|&(x, y)| !pairs.contains(&(y, x)));
    // a complete antisymmetric relation is a linear order iff it has no cycle
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| pairs.contains(&(x + 1, y + 1))).collect())
        .collect();
    let is_linear = antisymmetric && least_extension(&adj, None).is_some();
    SimpleMajorityRelation { pairs, is_linear }
}
