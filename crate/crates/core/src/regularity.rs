//! Regularity of a subgroup `U`: by definition, by the cycle-type conditions a) and b),
//! and by the gcd tests for partition products.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::groups::{Group, IndexAction, ProfileCodec, SubgroupSpec};
use crate::partition::Partition;
use crate::perm::{self, Permutation};
use crate::prefs::{GroupElement, LinearOrder, Profile, Rho};

/// Largest profile space the definitional check will sweep.
pub const DEFINITION_CAP: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// `(phi, psi, id)` with `psi != id` and `|psi|_pi` dividing `gcd(T(phi))`.
    #[serde(rename = "a")]
    A,
    /// `(phi, psi, rho0)` with `psi^2 = id`, `psi` not conjugate to `rho0`, and `gcd(T(phi))` even.
    #[serde(rename = "b")]
    B,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "a",
            Condition::B => "b",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub witness: Option<GroupElement>,
    pub violated_condition: Option<Condition>,
}

impl RegularityVerdict {
    pub fn into_result(self) -> Result<()> {
        match (self.witness, self.violated_condition) {
            (Some(witness), Some(condition)) => Err(Error::NotRegular { witness, condition }),
            _ => Ok(()),
        }
    }
}

/// Whether a stabilizer fits inside `(S_h x {id} x {id}) u (S_h x {psi*} x {rho0})`
/// for some `psi*` conjugate to `rho0`.
pub fn stabilizer_is_regular<'a, I: IntoIterator<Item = &'a GroupElement>>(stab: I) -> bool {
    let mut star: Option<&Permutation> = None;
    for g in stab {
        match g.rho {
            Rho::Identity => {
                if !g.psi.is_identity() {
                    return false;
                }
            }
            Rho::Reversal => match star {
                None => {
                    if !g.psi.is_conjugate_to_reversal() {
                        return false;
                    }
                    star = Some(&g.psi);
                }
                Some(s) if *s != g.psi => return false,
                Some(_) => {}
            },
        }
    }
    true
}

/// Checks every profile's stabilizer directly. Only for tiny profile spaces.
pub fn is_regular_by_definition(u: &SubgroupSpec) -> Result<bool> {
    is_regular_by_definition_with_cap(u, DEFINITION_CAP)
}

pub fn is_regular_by_definition_with_cap(u: &SubgroupSpec, cap: u128) -> Result<bool> {
    Ok(irregular_profile(&u.group()?, cap)?.is_none())
}

/// The least profile whose stabilizer breaks regularity, if any.
pub fn irregular_profile(group: &Group, cap: u128) -> Result<Option<Profile>> {
    let h = group.h();
    let codec = ProfileCodec::new(h, group.n(), cap)?;
    let action = IndexAction::new(&codec, group.elements());
    let mut digits = vec![0u32; h];
    let mut image = vec![0u32; h];
    for idx in 0..codec.total() {
        codec.decode(idx, &mut digits);
        let stab = (0..action.len()).filter(|&k| {
            action.apply(k, &digits, &mut image);
            image == digits
        });
        let elements = group.elements();
        if !stabilizer_is_regular(stab.map(|k| &elements[k])) {
            return Ok(Some(codec.profile(&digits)));
        }
    }
    Ok(None)
}

/// Which condition `g` violates, if any.
pub fn violated_condition(g: &GroupElement) -> Option<Condition> {
    let type_gcd = g.phi.cycle_type().gcd();
    match g.rho {
        Rho::Identity => {
            if g.psi.is_identity() {
                return None;
            }
            let order = g.psi.order();
            arith::prime_divisors(order)
                .into_iter()
                .any(|prime| {
                    let part = g.psi.pi_part(prime).expect("prime divisor");
                    type_gcd.is_multiple_of(part)
                })
                .then_some(Condition::A)
        }
        Rho::Reversal => {
            let involution = g.psi.mul(&g.psi).is_identity();
            (involution && !g.psi.is_conjugate_to_reversal() && type_gcd.is_multiple_of(2))
                .then_some(Condition::B)
        }
    }
}

/// Regularity through conditions a) and b) on the elements of `U`, scanned in sorted order.
pub fn is_regular(u: &SubgroupSpec) -> Result<RegularityVerdict> {
    Ok(verdict_for(&u.group()?))
}

pub fn verdict_for(group: &Group) -> RegularityVerdict {
    for g in group.elements() {
        if let Some(c) = violated_condition(g) {
            return RegularityVerdict {
                regular: false,
                witness: Some(g.clone()),
                violated_condition: Some(c),
            };
        }
    }
    RegularityVerdict {
        regular: true,
        witness: None,
        violated_condition: None,
    }
}

/// A profile fixed by a power of `witness` in a way regularity forbids.
///
/// Returns the profile together with the stabilizing element.
pub fn violating_profile(witness: &GroupElement) -> Result<(Profile, GroupElement)> {
    let condition = violated_condition(witness)
        .ok_or_else(|| Error::Invariant(format!("{witness} violates neither condition")))?;
    let (h, n) = (witness.h(), witness.n());
    let (g, step) = match condition {
        Condition::A => {
            let type_gcd = witness.phi.cycle_type().gcd();
            let order = witness.psi.order();
            let part = arith::prime_divisors(order)
                .into_iter()
                .map(|prime| witness.psi.pi_part(prime).expect("prime divisor"))
                .find(|part| type_gcd.is_multiple_of(*part))
                .expect("condition a holds for some prime");
            let m = order / part;
            let g = GroupElement::new(witness.phi.pow(m), witness.psi.pow(m), Rho::Identity);
            let step = g.psi.clone();
            (g, step)
        }
        Condition::B => {
            let step = witness.psi.mul(&perm::rho0(n));
            (witness.clone(), step)
        }
    };
    // p at phi^k(i_j) is step^k, walking each cycle from its representative
    let mut columns = vec![LinearOrder::identity(n); h];
    for orbit in g.phi.orbits() {
        let mut current = Permutation::identity(n);
        for &i in &orbit {
            columns[i - 1] = LinearOrder::from_permutation(&current);
            current = step.mul(&current);
        }
    }
    let p = Profile::new(columns)?;
    Ok((p, g))
}

/// The gcd tests for `V(B) x W(C) x {id}` and `V(B) x W(C) x Omega`.
pub fn is_regular_partition(
    committees: &Partition,
    classes: &Partition,
    with_reversal: bool,
) -> bool {
    let g = committees.gcd_of_sizes();
    let m = classes.max_block() as u64;
    let without = arith::coprime_to_factorial(g, m);
    if with_reversal {
        without && g % 2 == 1
    } else {
        without
    }
}

/// `gcd(h, n!) = 1`.
pub fn moulin_condition(h: usize, n: usize) -> bool {
    arith::coprime_to_factorial(h as u64, n as u64)
}
