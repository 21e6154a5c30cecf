//! Permutation groups on at most 2^16 points.

mod cache;
mod chain;
mod class;
mod group;
mod normalizer;
mod parse;
mod permutation;
mod sweep;

pub use cache::{file_digest, CacheDir};
pub use chain::{schreier_sims, ChainBuilder, ElementStream, StabilizerChain, DEFAULT_STREAM_CAP};
pub use class::{centralizer_from_class, ClassIndex, ClassStorage};
pub use group::GroupHandle;
pub use normalizer::{normalizer_by_stream, subgroup_by_stream, ElementSet};
pub use parse::{parse_generators, write_generators, GeneratorFormat};
pub use permutation::{Permutation, MAX_DEGREE};
pub use sweep::{sweep, BaseMembership, SweepGoal, SweepOutcome, SweepTask, SweepTest};

#[allow(unused_imports)]
pub(crate) use permutation::gcd;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PermError {
    #[error("unsupported degree {0}")]
    BadDegree(usize),
    #[error("image list is not a bijection")]
    NotABijection,
    #[error("generators have degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("empty generator list")]
    NoGenerators,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("group of order {order} exceeds the streaming cap {cap}")]
    StreamCap { order: u128, cap: u128 },
    #[error("class enumeration stopped at {reached} elements (cap {cap})")]
    ClassCap { reached: usize, cap: usize },
    #[error("element is not in the class orbit")]
    NotInOrbit,
    #[error("subgroup is not contained in the ambient group")]
    NotASubgroup,
    #[error("fingerprint collision between distinct permutations")]
    FingerprintCollision,
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
