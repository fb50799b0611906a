//! K-best enumeration over exchange systems.
//!
//! Solutions of a combinatorial family (Hamilton cycles of `K_n`, spanning
//! trees of a connected graph) are ranked by weight, starting from an exact
//! optimum and moving through bounded-size edge exchanges. Exhaustive
//! oracles are included for checking the engines at small sizes.

pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod exchange;
pub mod hamilton;
pub mod held_karp;
pub mod instance;
pub mod report;
pub mod system;
pub mod tree;
pub mod weight;

#[cfg(test)]
mod testing;

pub use engine::{
    brute_force_kbest, brute_force_kbest_tours, brute_force_kbest_trees, kbest_greedy, kbest_pool, EngineKind,
    EngineStats, RankedEntry, RankedList,
};
pub use error::{Error, Result};
pub use exchange::{ExchangePair, Neighbor};
pub use hamilton::{CanonicalTour, Tour};
pub use held_karp::solve_best_tour;
pub use instance::{
    embed_complete, parse_instance, random_instance, solution_weight, Edge, RandomSpec, WeightedInstance,
};
pub use report::{compare_engines, ComparisonReport};
pub use system::{ExchangeSystem, HamiltonSystem, TreeSystem};
pub use tree::SpanningTree;
pub use weight::{Objective, Weight};
