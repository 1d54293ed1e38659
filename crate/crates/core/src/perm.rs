//! Permutations of `{1, ..., k}`.
//!
//! A [`Permutation`] is stored in one-line notation; cycle notation such as
//! `(1 3 4)(2 5)` is only a text format. Points are 1-based in every public
//! method. Products are right-to-left: `a.compose(&b)` maps `x` to `a(b(x))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    // 0-based images: images[r] is the image of r + 1, minus one.
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its 1-based images: `images[r - 1]` is the image of `r`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let k = images.len();
        if k == 0 {
            return Err(Error::InvalidPermutation(
                "degree must be at least 1".into(),
            ));
        }
        let mut seen = vec![false; k];
        let mut zero_based = Vec::with_capacity(k);
        for &v in images {
            if v == 0 || v > k || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..={k}"
                )));
            }
            seen[v - 1] = true;
            zero_based.push(v - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Permutation { images }
    }

    /// Builds a permutation of the given degree from disjoint cycles of 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation(
                "degree must be at least 1".into(),
            ));
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for &x in cycle {
                if x == 0 || x > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} outside 1..={degree}"
                    )));
                }
                if touched[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} appears in more than one place"
                    )));
                }
                touched[x - 1] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                images[x - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation (`"(1 3 4)(2 5)"`, `"(1,3)"`, `"(342)"` or `"id"`) for a given degree.
    ///
    /// A cycle written without separators is read digit by digit, which only
    /// makes sense for degrees up to 9.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "id" || text == "()" {
            return Ok(Self::identity(degree));
        }
        let bad = || Error::InvalidPermutation(format!("cannot parse cycle notation {text:?}"));
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            let inner_start = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = inner_start.find(')').ok_or_else(bad)?;
            let inner = inner_start[..close].trim();
            rest = &inner_start[close + 1..];
            let tokens: Vec<&str> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect();
            let points: Vec<usize> = if tokens.len() == 1 && tokens[0].len() > 1 {
                tokens[0]
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_>>()?
            } else {
                tokens
                    .iter()
                    .map(|t| t.parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            };
            if !points.is_empty() {
                cycles.push(points);
            }
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] + 1
    }

    #[inline]
    pub(crate) fn apply0(&self, x: usize) -> usize {
        self.images[x]
    }

    pub(crate) fn as_zero_based(&self) -> &[usize] {
        &self.images
    }

    /// 1-based one-line notation.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The product `self * other`, mapping `x` to `self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, m: u64) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// The orbits of `<self>`, each listed along its cycle starting from its
    /// smallest point. Orbits are ordered by non-increasing size, ties broken
    /// by smallest point, so the first points form an ordered system of
    /// representatives.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                orbit.push(x + 1);
                x = self.images[x];
            }
            out.push(orbit);
        }
        // stable sort keeps the smallest-point order among equal sizes
        out.sort_by_key(|b| std::cmp::Reverse(b.len()));
        out
    }

    pub fn orbit_representatives(&self) -> Vec<usize> {
        self.orbits().into_iter().map(|o| o[0]).collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.orbits().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().lcm()
    }

    /// Largest power of `prime` dividing the order; 1 when it does not divide it.
    pub fn pi_part(&self, prime: u64) -> Result<u64> {
        if !arith::is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let mut order = self.order();
        let mut part = 1;
        while order.is_multiple_of(prime) {
            order /= prime;
            part *= prime;
        }
        Ok(part)
    }

    pub fn is_conjugate(&self, other: &Permutation) -> Result<bool> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.cycle_type() == other.cycle_type())
    }

    /// Whether this permutation has the cycle type of the order-reversing permutation.
    pub fn is_conjugate_to_reversal(&self) -> bool {
        self.cycle_type() == rho0(self.degree()).cycle_type()
    }
}

/// The order-reversing permutation `r -> n - r + 1` of degree `n`.
pub fn rho0(n: usize) -> Permutation {
    Permutation {
        images: (0..n).rev().collect(),
    }
}

/// All permutations of degree `k` in lexicographic order of their one-line notation.
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![Permutation {
        images: current.clone(),
    }];
    while next_permutation(&mut current) {
        out.push(Permutation {
            images: current.clone(),
        });
    }
    out
}

/// Advances `xs` to the next permutation in lexicographic order.
/// Returns `false` (leaving `xs` sorted) after the last one.
pub(crate) fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut orbits = self.orbits();
        orbits.retain(|o| o.len() > 1);
        if orbits.is_empty() {
            return f.write_str("id");
        }
        orbits.sort_by_key(|o| o[0]);
        for orbit in orbits {
            f.write_str("(")?;
            for (i, x) in orbit.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[deg {}]", self.degree())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

/// The multiset of orbit sizes of a permutation, as a non-increasing partition of its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.is_empty() {
            return Err(Error::InvalidPermutation(format!(
                "{parts:?} is not a partition of a positive integer"
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn fixed_points(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    pub fn gcd(&self) -> u64 {
        arith::gcd_all(self.parts.iter().map(|&p| p as u64))
    }

    pub fn lcm(&self) -> u64 {
        arith::lcm_all(self.parts.iter().map(|&p| p as u64))
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad cycle type {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CycleType::new(parts)
    }
}
