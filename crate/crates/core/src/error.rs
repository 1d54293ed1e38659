use thiserror::Error;

use crate::prefs::GroupElement;
use crate::regularity::Condition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid linear order: {0}")]
    InvalidOrder(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("alternative {value} is outside 1..={n}")]
    OutOfRange { value: usize, n: usize },

    #[error("majority threshold {nu} is outside ({half}, {h}] for h = {h}", half = *h as f64 / 2.0)]
    InvalidThreshold { nu: usize, h: usize },

    #[error("{what} has {required} elements, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("profile shape (h = {found_h}, n = {found_n}) does not match (h = {h}, n = {n})")]
    DimensionMismatch {
        h: usize,
        n: usize,
        found_h: usize,
        found_n: usize,
    },

    #[error("the subgroup is not regular: {witness} violates condition {condition}")]
    NotRegular {
        witness: GroupElement,
        condition: Condition,
    },

    #[error("the majority relation at threshold {nu} contains a cycle")]
    CyclicRelation { nu: usize },

    #[error("{0} is not conjugate to the order-reversing permutation")]
    NotConjugateToReversal(String),

    #[error("orbit {orbit}: {reason}")]
    InvalidChoice { orbit: usize, reason: String },

    #[error("there are {count} rules, above the cap of {cap}")]
    TooManyRules { count: String, cap: u64 },

    #[error("rule document: {0}")]
    Document(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
