//! Combinatorics of the boundary of the moduli space of stable genus-zero
//! curves with labeled points.
//!
//! The crate models stable 2-partitions (boundary divisors), distinguished
//! 4-block partitions (classes of boundary curves), stable dual trees
//! (boundary strata) and the exact intersection numbers between divisors and
//! boundary curves. [`census`] ties everything together into a count of all
//! one-dimensional boundary strata, grouped by combinatorial type and by
//! Chow class.
//!
//! Labels are always the integers `1..=n` internally. External tokens are
//! mapped onto them by sorted order through [`LabelSet`].

pub mod census;
pub mod intersect;
pub mod limit;
pub mod literal;
pub mod mask;
pub mod partitions;
pub mod rational;
pub mod trees;

pub use census::{run_census, CensusReport};
pub use intersect::IntersectionMatrix;
pub use partitions::{DistinguishedPartition, LabelSet, PartitionError, Shape, TwoPartition};
pub use rational::Rational;
pub use trees::{PartitionSetSignature, StableTree, TreeError};
