//! Symmetric minimal majority rules.
//!
//! A subgroup `U` of `S_h x S_n x Omega` acts on preference profiles by permuting
//! individuals, relabelling alternatives and possibly reversing every ranking. This
//! crate decides when a `U`-symmetric minimal majority rule exists, counts such rules,
//! builds them explicitly and evaluates them.

pub mod arith;
pub mod construct;
pub mod error;
pub mod groups;
pub mod majority;
pub mod partition;
pub mod perm;
pub mod prefs;
pub mod regularity;
pub mod rules;

pub use construct::{ChainRelation, GammaDecomposition};
pub use error::{Error, Result};
pub use groups::{Group, OrbitEntry, OrbitReport, SubgroupSpec};
pub use majority::{MajorityRelation, SimpleMajorityRelation, SupportCounts};
pub use partition::Partition;
pub use perm::{CycleType, Permutation};
pub use prefs::{GroupElement, LinearOrder, Profile, Rho};
pub use regularity::{Condition, RegularityVerdict};
pub use rules::{CountReport, OrbitRow, RuleEntry, RuleTable};
