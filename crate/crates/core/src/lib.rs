//! Exact combinatorics of bi-free probability: bi-non-crossing partitions,
//! bi-free cumulants, bi-free products of two-faced pairs, and classifiers
//! for bi-R-diagonal, *-bi-even and bi-Haar pairs.

pub mod bifree_product;
pub mod chi_order;
pub mod classifiers;
pub mod cumulants;
pub mod distributions;
pub mod error;
pub mod harness;
pub mod partitions;
pub mod scalar;

pub use chi_order::{ChiMap, Perm, Side};
pub use error::{Error, Result};
pub use partitions::{BncContext, SetPartition};
pub use scalar::Scalar;
