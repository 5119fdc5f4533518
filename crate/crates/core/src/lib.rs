//! Exact combinatorics for the generalized Turán problem in random graphs.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`graph`]: small labeled graphs as bitsets, graph6, canonical forms,
//!   copy enumeration, homomorphisms and chromatic numbers;
//! * [`density`]: 2-density, 2-balancedness and the T-density of the
//!   special covering, as exact [`Rational`]s;
//! * [`covering`]: T-coverings of H, their types, T-densities and the
//!   T-resolution with its threshold exponents;
//! * [`extremal`]: exact small-n values of `ex(n,T,H)` and `êx(n,T,𝓕)`;
//! * [`probability`]: expected counts, the Ψ_T minimum and Janson bounds;
//! * [`sim`]: reproducible `G(n,p)` samples, the edge-disjoint core and the
//!   lower-bound constructions used on samples.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod covering;
pub mod density;
pub mod extremal;
pub mod graph;
pub mod hitting;
pub mod probability;
pub mod rational;
pub mod sim;

pub use graph::{Edge, Graph, SubgraphCopy};
pub use rational::Rational;
