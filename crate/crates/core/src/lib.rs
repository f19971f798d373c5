//! One-sided weak ε-approximants for convex sets.
//!
//! The crate builds, for a finite point set `P ⊂ R^d`, a weighted multiset `A`
//! such that every convex set holding an `α` fraction of `P` holds at least an
//! `α - ε` fraction of `A`. All geometry is exact over the rationals, and each
//! building block ships with a brute-force oracle that checks it.
//!
//! Module map:
//!
//! * [`geometry`]: scalars, points, orientation, hull membership and intersection.
//! * [`homogeneous`]: orientation-homogeneous sequences and their extraction.
//! * [`tverberg`]: Radon and Tverberg points, point selection.
//! * [`chains`]: interval chains and layered stabbing families.
//! * [`regularity`]: regular partitions and hypergraph independent sets.
//! * [`pipeline`]: the approximant construction itself.
//! * [`discrepancy`]: exact and sampled discrepancy oracles.
//! * [`generators`]: point-set generators.
//! * [`io`] and [`cli`]: file formats and the command-line surface.

pub mod chains;
pub mod cli;
pub mod discrepancy;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod homogeneous;
pub mod io;
pub mod pipeline;
pub mod regularity;
pub mod tverberg;

pub use discrepancy::{DiscrepancyReport, WeightedPointSet};
pub use error::{Error, Result};
pub use geometry::{Point, PointSequence, Scalar};
