//! Linear orders, preference profiles and the action of `S_h x S_n x Omega` on profiles.
//!
//! A [`LinearOrder`] is stored as its ranking vector: position `r` holds the
//! alternative of rank `r` (best first). Read as a map from ranks to
//! alternatives, the same vector is a [`Permutation`]. Relabelling
//! alternatives by `psi` acts on the left and moving ranks by `rho` acts on the
//! right, and the two products commute.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{self, Permutation};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearOrder {
    // 0-based alternatives, best first
    ranking: Vec<usize>,
}

impl LinearOrder {
    /// Builds an order from a best-to-worst list of 1-based alternatives.
    pub fn new(ranking: &[usize]) -> Result<Self> {
        let p = Permutation::from_images(ranking).map_err(|_| {
            Error::InvalidOrder(format!(
                "{ranking:?} is not a ranking of 1..={}",
                ranking.len()
            ))
        })?;
        Ok(Self::from_permutation(&p))
    }

    pub(crate) fn from_zero_based(ranking: Vec<usize>) -> Self {
        LinearOrder { ranking }
    }

    /// The order `[1, 2, ..., n]`.
    pub fn identity(n: usize) -> Self {
        LinearOrder {
            ranking: (0..n).collect(),
        }
    }

    /// Every linear order on `{1..n}`, lexicographically sorted.
    pub fn all(n: usize) -> Vec<LinearOrder> {
        perm::all_permutations(n)
            .iter()
            .map(LinearOrder::from_permutation)
            .collect()
    }

    pub fn from_permutation(sigma: &Permutation) -> Self {
        LinearOrder {
            ranking: sigma.as_zero_based().to_vec(),
        }
    }

    /// The permutation sending each rank to the alternative holding it.
    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_zero_based(self.ranking.clone())
    }

    pub fn n(&self) -> usize {
        self.ranking.len()
    }

    /// 1-based ranking, best first.
    pub fn ranking(&self) -> Vec<usize> {
        self.ranking.iter().map(|&x| x + 1).collect()
    }

    pub(crate) fn ranking0(&self) -> &[usize] {
        &self.ranking
    }

    pub fn alternative_at(&self, rank: usize) -> usize {
        self.ranking[rank - 1] + 1
    }

    /// 1-based rank of alternative `x`.
    pub fn rank_of(&self, x: usize) -> usize {
        self.ranking
            .iter()
            .position(|&a| a + 1 == x)
            .expect("alternative in range")
            + 1
    }

    pub(crate) fn positions0(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n()];
        for (r, &x) in self.ranking.iter().enumerate() {
            pos[x] = r;
        }
        pos
    }

    /// `psi q`: alternative `x` is renamed `psi(x)`.
    pub fn left_mul(&self, psi: &Permutation) -> Result<LinearOrder> {
        if psi.degree() != self.n() {
            return Err(Error::DegreeMismatch {
                left: psi.degree(),
                right: self.n(),
            });
        }
        Ok(self.left_mul_unchecked(psi))
    }

    pub(crate) fn left_mul_unchecked(&self, psi: &Permutation) -> LinearOrder {
        LinearOrder {
            ranking: self.ranking.iter().map(|&x| psi.apply0(x)).collect(),
        }
    }

    /// `q rho`: with `Rho::Reversal` the ranking is flipped top to bottom.
    pub fn right_mul(&self, rho: Rho) -> LinearOrder {
        match rho {
            Rho::Identity => self.clone(),
            Rho::Reversal => {
                let mut ranking = self.ranking.clone();
                ranking.reverse();
                LinearOrder { ranking }
            }
        }
    }

    /// `psi q rho`.
    pub(crate) fn transform(&self, psi: &Permutation, rho: Rho) -> LinearOrder {
        let n = self.n();
        let ranking = match rho {
            Rho::Identity => self.ranking.iter().map(|&x| psi.apply0(x)).collect(),
            Rho::Reversal => (0..n)
                .map(|r| psi.apply0(self.ranking[n - 1 - r]))
                .collect(),
        };
        LinearOrder { ranking }
    }

    /// Whether `x` is ranked strictly above `y`.
    pub fn prefers(&self, x: usize, y: usize) -> Result<bool> {
        let n = self.n();
        for v in [x, y] {
            if v == 0 || v > n {
                return Err(Error::OutOfRange { value: v, n });
            }
        }
        Ok(self.rank_of(x) < self.rank_of(y))
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.ranking.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LinearOrder {
    type Err = Error;

    /// Accepts `4,2,1,3` or `[4,2,1,3]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let ranking = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidOrder(format!("cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearOrder::new(&ranking)
    }
}

impl Serialize for LinearOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.ranking().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ranking = Vec::<usize>::deserialize(deserializer)?;
        LinearOrder::new(&ranking).map_err(serde::de::Error::custom)
    }
}

/// The rank component of a group element: an element of `Omega = {id, rho0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rho {
    Identity,
    Reversal,
}

impl Rho {
    pub fn compose(self, other: Rho) -> Rho {
        if self == other {
            Rho::Identity
        } else {
            Rho::Reversal
        }
    }

    pub fn is_reversal(self) -> bool {
        self == Rho::Reversal
    }

    pub fn as_permutation(self, n: usize) -> Permutation {
        match self {
            Rho::Identity => Permutation::identity(n),
            Rho::Reversal => perm::rho0(n),
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Identity => f.write_str("id"),
            Rho::Reversal => f.write_str("rho0"),
        }
    }
}

/// A preference profile: one linear order per individual.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    columns: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(columns: Vec<LinearOrder>) -> Result<Self> {
        if columns.len() < 2 {
            return Err(Error::InvalidProfile(format!(
                "need at least 2 individuals, got {}",
                columns.len()
            )));
        }
        let n = columns[0].n();
        if n < 2 {
            return Err(Error::InvalidProfile("need at least 2 alternatives".into()));
        }
        if let Some(bad) = columns.iter().find(|c| c.n() != n) {
            return Err(Error::InvalidProfile(format!(
                "column {bad} ranks {} alternatives, expected {n}",
                bad.n()
            )));
        }
        Ok(Profile { columns })
    }

    pub(crate) fn from_columns_unchecked(columns: Vec<LinearOrder>) -> Self {
        Profile { columns }
    }

    /// `h` copies of the same order.
    pub fn unanimous(q: &LinearOrder, h: usize) -> Result<Self> {
        Profile::new(vec![q.clone(); h])
    }

    pub fn h(&self) -> usize {
        self.columns.len()
    }

    pub fn n(&self) -> usize {
        self.columns[0].n()
    }

    pub fn columns(&self) -> &[LinearOrder] {
        &self.columns
    }

    /// Preferences of the 1-based individual `i`.
    pub fn column(&self, i: usize) -> &LinearOrder {
        &self.columns[i - 1]
    }

    /// The profile `p^(phi, psi, rho)`: column `i` becomes `psi p_{phi^-1(i)} rho`.
    pub fn act(&self, g: &GroupElement) -> Result<Profile> {
        if g.phi.degree() != self.h() || g.psi.degree() != self.n() {
            return Err(Error::DimensionMismatch {
                h: self.h(),
                n: self.n(),
                found_h: g.phi.degree(),
                found_n: g.psi.degree(),
            });
        }
        Ok(self.act_unchecked(g))
    }

    pub(crate) fn act_unchecked(&self, g: &GroupElement) -> Profile {
        let h = self.h();
        let mut columns = vec![
            LinearOrder {
                ranking: Vec::new()
            };
            h
        ];
        for (i, col) in self.columns.iter().enumerate() {
            // column i moves to position phi(i)
            columns[g.phi.apply0(i)] = col.transform(&g.psi, g.rho);
        }
        Profile { columns }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, col) in self.columns.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let ranking: Vec<String> = col.ranking().iter().map(|x| x.to_string()).collect();
            f.write_str(&ranking.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({self})")
    }
}

impl FromStr for Profile {
    type Err = Error;

    /// Whitespace-separated columns, each a comma-separated ranking: `"3,2,1 1,2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let columns = s
            .split_whitespace()
            .map(LinearOrder::from_str)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidProfile(format!("{s:?}: {e}")))?;
        Profile::new(columns)
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.columns.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let columns = Vec::<LinearOrder>::deserialize(deserializer)?;
        Profile::new(columns).map_err(serde::de::Error::custom)
    }
}

/// An element `(phi, psi, rho)` of `G = S_h x S_n x Omega`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub phi: Permutation,
    pub psi: Permutation,
    pub rho: Rho,
}

impl GroupElement {
    pub fn new(phi: Permutation, psi: Permutation, rho: Rho) -> Self {
        GroupElement { phi, psi, rho }
    }

    pub fn identity(h: usize, n: usize) -> Self {
        GroupElement {
            phi: Permutation::identity(h),
            psi: Permutation::identity(n),
            rho: Rho::Identity,
        }
    }

    /// Parses three cycle-notation components, e.g. `("(134)(25)", "(12)", true)`.
    pub fn parse(phi: &str, psi: &str, reversal: bool, h: usize, n: usize) -> Result<Self> {
        Ok(GroupElement {
            phi: Permutation::parse_cycles(phi, h)?,
            psi: Permutation::parse_cycles(psi, n)?,
            rho: if reversal {
                Rho::Reversal
            } else {
                Rho::Identity
            },
        })
    }

    pub fn h(&self) -> usize {
        self.phi.degree()
    }

    pub fn n(&self) -> usize {
        self.psi.degree()
    }

    pub fn is_identity(&self) -> bool {
        self.phi.is_identity() && self.psi.is_identity() && self.rho == Rho::Identity
    }

    /// Componentwise product `self * other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        Ok(GroupElement {
            phi: self.phi.compose(&other.phi)?,
            psi: self.psi.compose(&other.psi)?,
            rho: self.rho.compose(other.rho),
        })
    }

    pub(crate) fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            phi: self.phi.mul(&other.phi),
            psi: self.psi.mul(&other.psi),
            rho: self.rho.compose(other.rho),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            phi: self.phi.inverse(),
            psi: self.psi.inverse(),
            rho: self.rho,
        }
    }

    /// `psi q rho` for the order `q`.
    pub fn transform_order(&self, q: &LinearOrder) -> LinearOrder {
        q.transform(&self.psi, self.rho)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.phi, self.psi, self.rho)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
