//! Constructive machinery for bag-free clique families, cycle powers and parpartitions.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! - [`graph`]: bitset graphs and the three-graph container ([`TripleGraphSystem`]).
//! - [`subsets`]: colex indexing of k-subsets, the disjointness/intersection
//!   reduction, closed-form degrees and the `(α,β)`-closeness relation.
//! - [`bag`]: alternating-(ℓ,2,ℓ,2)-bag detection and colored witness paths.
//! - [`decomp`]: swap-repair almost-ℓ-decompositions that avoid bags.
//! - [`hampower`]: segment-rearrangement repair of Hamiltonian cycle powers
//!   and bag elimination by center swaps.
//! - [`verify`]: independent brute-force certification, exact condition
//!   evaluation, count audits and a small-instance backtracking oracle.
//! - [`synth`]: seeded synthetic graph systems.
//!
//! Vertices are dense ids `0..m`; only [`subsets`] knows what a vertex means.

#![no_std]

extern crate alloc;

pub mod bag;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod hampower;
pub mod rational;
pub mod report;
pub mod subsets;
pub mod synth;
pub mod verify;

pub use bag::{BagWitness, ColoredPath, PathPattern};
pub use decomp::CliqueFamily;
pub use error::{Error, Result};
pub use graph::{Edge, Graph, TripleGraphSystem};
pub use hampower::CyclicOrder;
pub use rational::{Rational, Threshold};
pub use report::{Mode, RunReport};
pub use subsets::{KSubsetUniverse, Parpartition, ParpartitionFamily};
