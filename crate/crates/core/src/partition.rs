//! Set partitions of `{1..k}`, used for committees of individuals and classes of alternatives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Blocks are kept sorted internally and ordered by their smallest member.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    ground: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(ground: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; ground];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block.iter() {
                if x == 0 || x > ground {
                    return Err(Error::InvalidPartition(format!(
                        "{x} is outside 1..={ground}"
                    )));
                }
                if seen[x - 1] {
                    return Err(Error::InvalidPartition(format!("{x} appears twice")));
                }
                seen[x - 1] = true;
            }
            block.sort_unstable();
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!(
                "{} is not covered",
                missing + 1
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { ground, blocks })
    }

    /// Parses `"1,2|3"` as a partition of `{1..ground}`.
    pub fn parse(text: &str, ground: usize) -> Result<Self> {
        let p: Partition = text.parse()?;
        if p.ground != ground {
            return Err(Error::InvalidPartition(format!(
                "{text:?} covers 1..={}, expected 1..={ground}",
                p.ground
            )));
        }
        Ok(p)
    }

    /// The partition with one block.
    pub fn whole(ground: usize) -> Self {
        Partition {
            ground,
            blocks: vec![(1..=ground).collect()],
        }
    }

    pub fn singletons(ground: usize) -> Self {
        Partition {
            ground,
            blocks: (1..=ground).map(|x| vec![x]).collect(),
        }
    }

    /// Every set partition of `{1..ground}`, in a fixed order.
    pub fn all(ground: usize) -> Vec<Partition> {
        // restricted growth strings
        let mut out = Vec::new();
        let mut labels = vec![0usize; ground];
        fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
            let ground = labels.len();
            if i == ground {
                let mut blocks = vec![Vec::new(); max];
                for (x, &l) in labels.iter().enumerate() {
                    blocks[l].push(x + 1);
                }
                out.push(Partition::new(ground, blocks).expect("valid by construction"));
                return;
            }
            for l in 0..=max {
                labels[i] = l;
                rec(i + 1, max.max(l + 1), labels, out);
            }
        }
        if ground > 0 {
            rec(0, 0, &mut labels, &mut out);
        }
        out
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn gcd_of_sizes(&self) -> u64 {
        arith::gcd_all(self.blocks.iter().map(|b| b.len() as u64))
    }

    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.ground
    }

    /// Whether `sigma` maps every block onto itself.
    pub fn is_preserved_by(&self, sigma: &Permutation) -> bool {
        sigma.degree() == self.ground
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|&x| b.binary_search(&sigma.apply(x)).is_ok()))
    }

    /// All permutations preserving every block, sorted.
    pub fn block_permutations(&self) -> Vec<Permutation> {
        let mut acc: Vec<Vec<usize>> = vec![(0..self.ground).collect()];
        for block in &self.blocks {
            let zero: Vec<usize> = block.iter().map(|x| x - 1).collect();
            let mut arrangement = zero.clone();
            let mut arrangements = Vec::new();
            loop {
                arrangements.push(arrangement.clone());
                if !crate::perm::next_permutation(&mut arrangement) {
                    break;
                }
            }
            let mut next = Vec::with_capacity(acc.len() * arrangements.len());
            for images in &acc {
                for arr in &arrangements {
                    let mut images = images.clone();
                    for (&x, &y) in zero.iter().zip(arr) {
                        images[x] = y;
                    }
                    next.push(images);
                }
            }
            acc = next;
        }
        let mut out: Vec<Permutation> = acc.into_iter().map(Permutation::from_zero_based).collect();
        out.sort();
        out
    }

    /// `prod |B_j|!`, or `None` on overflow.
    pub fn group_order(&self) -> Option<u128> {
        self.blocks.iter().try_fold(1u128, |acc, b| {
            acc.checked_mul(arith::factorial(b.len() as u64)?)
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let members: Vec<String> = block.iter().map(|x| x.to_string()).collect();
            f.write_str(&members.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// The ground set is inferred as `1..=k` where `k` is the number of members.
    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.trim().split('|') {
            let block = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("cannot parse {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let ground = blocks.iter().map(Vec::len).sum();
        Partition::new(ground, blocks)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
