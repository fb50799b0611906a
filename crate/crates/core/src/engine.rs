//! K-best engines over an [`ExchangeSystem`].
//!
//! * [`kbest_pool`] keeps every unchosen neighbor of every chosen solution in
//!   a candidate pool and repeatedly extracts the best one. This is the
//!   reference engine.
//! * [`kbest_greedy`] only looks at the neighbors of the most recent solution
//!   and takes the best exchange that does not improve on it. Experimental:
//!   its output is compared against the exhaustive oracle rather than trusted.
//! * [`brute_force_kbest`] sorts every member of the system.
//!
//! All three order solutions by `(objective score, canonical form)`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::{ExchangeSystem, HamiltonSystem, TreeSystem};
use crate::weight::{Objective, Weight};
use crate::{CanonicalTour, WeightedInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Pool,
    Greedy,
    Oracle,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Pool => "pool",
            EngineKind::Greedy => "greedy",
            EngineKind::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedEntry<S> {
    /// 1-based.
    pub rank: usize,
    pub solution: S,
    pub weight: Weight,
    pub uses_artificial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedList<S> {
    pub objective: Objective,
    pub k_requested: usize,
    /// Fewer than `k_requested` solutions could be produced.
    pub exhausted: bool,
    pub entries: Vec<RankedEntry<S>>,
}

impl<S> RankedList<S> {
    fn new(objective: Objective, k_requested: usize) -> Self {
        RankedList {
            objective,
            k_requested,
            exhausted: false,
            entries: Vec::new(),
        }
    }

    fn push<Sys: ExchangeSystem<Solution = S>>(&mut self, sys: &Sys, solution: S, weight: Weight) {
        let uses_artificial = sys.uses_artificial(&solution);
        self.entries.push(RankedEntry {
            rank: self.entries.len() + 1,
            solution,
            weight,
            uses_artificial,
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    pub fn solutions(&self) -> impl Iterator<Item = &S> {
        self.entries.iter().map(|e| &e.solution)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub pool_size_max: usize,
    pub neighborhoods_expanded: usize,
    pub exchanges_evaluated: usize,
    /// Whole run, including `best_solution_elapsed`.
    pub elapsed: Duration,
    pub best_solution_elapsed: Duration,
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    Ok(())
}

/// Candidate-pool engine: the `j`-th solution is the best member among the
/// neighbors of solutions `1..j` that has not been chosen yet.
pub fn kbest_pool<Sys: ExchangeSystem>(
    sys: &Sys,
    k: usize,
    objective: Objective,
) -> Result<(RankedList<Sys::Solution>, EngineStats)> {
    check_k(k)?;
    let start = Instant::now();
    let mut stats = EngineStats::default();
    let first = sys.best_solution(objective)?;
    stats.best_solution_elapsed = start.elapsed();
    let first_weight = sys.weight(&first)?;

    let mut list = RankedList::new(objective, k);
    // Everything ever chosen or pooled; pooled entries map to their weight.
    let mut known: BTreeMap<Sys::Solution, Option<Weight>> = BTreeMap::new();
    let mut pool: BTreeSet<(i128, Sys::Solution)> = BTreeSet::new();

    known.insert(first.clone(), None);
    list.push(sys, first.clone(), first_weight);
    let (mut last, mut last_weight) = (first, first_weight);

    while list.len() < k {
        let neighbors = sys.neighborhood(&last)?;
        stats.neighborhoods_expanded += 1;
        stats.exchanges_evaluated += neighbors.len();
        for nb in neighbors {
            if known.contains_key(&nb.solution) {
                continue;
            }
            let w = last_weight.checked_sub(nb.gain)?;
            known.insert(nb.solution.clone(), Some(w));
            pool.insert((objective.score(w), nb.solution));
        }
        stats.pool_size_max = stats.pool_size_max.max(pool.len());
        let Some((_, next)) = pool.pop_first() else {
            list.exhausted = true;
            break;
        };
        let w = known
            .insert(next.clone(), None)
            .flatten()
            .expect("pooled solutions carry a weight");
        list.push(sys, next.clone(), w);
        (last, last_weight) = (next, w);
    }
    stats.elapsed = start.elapsed();
    Ok((list, stats))
}

/// Greedy exchange engine: from the latest solution take the exchange with
/// the largest gain among those that do not improve the objective, skipping
/// results already listed. Stops early when no such exchange exists.
pub fn kbest_greedy<Sys: ExchangeSystem>(
    sys: &Sys,
    k: usize,
    objective: Objective,
) -> Result<(RankedList<Sys::Solution>, EngineStats)> {
    check_k(k)?;
    let start = Instant::now();
    let mut stats = EngineStats::default();
    let first = sys.best_solution(objective)?;
    stats.best_solution_elapsed = start.elapsed();
    let first_weight = sys.weight(&first)?;

    let mut list = RankedList::new(objective, k);
    let mut chosen: BTreeSet<Sys::Solution> = BTreeSet::new();
    chosen.insert(first.clone());
    list.push(sys, first.clone(), first_weight);
    let (mut current, mut current_weight) = (first, first_weight);

    while list.len() < k {
        let neighbors = sys.neighborhood(&current)?;
        stats.neighborhoods_expanded += 1;
        stats.exchanges_evaluated += neighbors.len();
        let base = objective.score(current_weight);
        let mut admissible = 0;
        let mut best: Option<(i128, Sys::Solution, Weight)> = None;
        for nb in neighbors {
            if chosen.contains(&nb.solution) {
                continue;
            }
            let w = current_weight.checked_sub(nb.gain)?;
            let delta = objective.score(w) - base;
            if delta < 0 {
                continue;
            }
            admissible += 1;
            let better = match &best {
                None => true,
                Some((d, s, _)) => (delta, &nb.solution) < (*d, s),
            };
            if better {
                best = Some((delta, nb.solution, w));
            }
        }
        stats.pool_size_max = stats.pool_size_max.max(admissible);
        let Some((_, next, w)) = best else {
            list.exhausted = true;
            break;
        };
        chosen.insert(next.clone());
        list.push(sys, next.clone(), w);
        (current, current_weight) = (next, w);
    }
    stats.elapsed = start.elapsed();
    Ok((list, stats))
}

/// Exhaustive reference: every member sorted by `(score, canonical form)`.
pub fn brute_force_kbest<Sys: ExchangeSystem>(
    sys: &Sys,
    k: usize,
    objective: Objective,
) -> Result<RankedList<Sys::Solution>> {
    check_k(k)?;
    let mut scored = Vec::new();
    for x in sys.all_solutions()? {
        let w = sys.weight(&x)?;
        scored.push((objective.score(w), x, w));
    }
    scored.sort();
    let total = scored.len();
    let mut list = RankedList::new(objective, k);
    for (_, x, w) in scored.into_iter().take(k) {
        list.push(sys, x, w);
    }
    list.exhausted = total < k;
    Ok(list)
}

pub fn brute_force_kbest_tours(
    inst: &WeightedInstance,
    k: usize,
    objective: Objective,
) -> Result<RankedList<CanonicalTour>> {
    brute_force_kbest(&HamiltonSystem::new(inst)?, k, objective)
}

pub fn brute_force_kbest_trees(
    inst: &WeightedInstance,
    k: usize,
    objective: Objective,
) -> Result<RankedList<crate::tree::SpanningTree>> {
    let sys = TreeSystem::new(inst)?;
    brute_force_kbest(&sys, k, objective)
}

/// Runs the chosen engine; the oracle reports zero counters.
pub fn run_engine<Sys: ExchangeSystem>(
    sys: &Sys,
    engine: EngineKind,
    k: usize,
    objective: Objective,
) -> Result<(RankedList<Sys::Solution>, EngineStats)> {
    match engine {
        EngineKind::Pool => kbest_pool(sys, k, objective),
        EngineKind::Greedy => kbest_greedy(sys, k, objective),
        EngineKind::Oracle => {
            let start = Instant::now();
            let list = brute_force_kbest(sys, k, objective)?;
            let stats = EngineStats {
                elapsed: start.elapsed(),
                ..EngineStats::default()
            };
            Ok((list, stats))
        }
    }
}
