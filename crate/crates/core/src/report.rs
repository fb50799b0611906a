//! JSON result schema, engine comparison and counterexample archive.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{brute_force_kbest, kbest_greedy, kbest_pool, EngineStats, RankedList};
use crate::error::{Error, Result};
use crate::instance::{parse_instance, solution_weight, Edge, WeightedInstance};
use crate::system::{ExchangeSystem, HamiltonSystem, Shaped, SolutionShape, TreeSystem};
use crate::weight::{Objective, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub rank: usize,
    pub weight: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tour: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<Vec<[usize; 2]>>,
    pub uses_artificial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsJson {
    pub pool_size_max: usize,
    pub neighborhoods_expanded: usize,
    pub exchanges_evaluated: usize,
    pub elapsed_ms: u64,
}

/// Serialized form of a [`RankedList`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultJson {
    pub engine: String,
    pub objective: String,
    pub k_requested: usize,
    pub k_returned: usize,
    pub exhausted: bool,
    pub solutions: Vec<SolutionJson>,
    pub stats: StatsJson,
}

impl ResultJson {
    /// With `timing` off the elapsed time is written as 0, making the output
    /// a pure function of the input.
    pub fn new<S: Shaped>(engine: &str, list: &RankedList<S>, stats: &EngineStats, timing: bool) -> ResultJson {
        let solutions = list
            .entries
            .iter()
            .map(|e| {
                let (tour, tree) = match e.solution.shape() {
                    SolutionShape::Tour(t) => (Some(t), None),
                    SolutionShape::Tree(t) => (None, Some(t)),
                };
                SolutionJson {
                    rank: e.rank,
                    weight: e.weight.to_string(),
                    tour,
                    tree,
                    uses_artificial: e.uses_artificial,
                }
            })
            .collect();
        ResultJson {
            engine: engine.to_string(),
            objective: list.objective.as_str().to_string(),
            k_requested: list.k_requested,
            k_returned: list.len(),
            exhausted: list.exhausted,
            solutions,
            stats: StatsJson {
                pool_size_max: stats.pool_size_max,
                neighborhoods_expanded: stats.neighborhoods_expanded,
                exchanges_evaluated: stats.exchanges_evaluated,
                elapsed_ms: if timing { stats.elapsed.as_millis() as u64 } else { 0 },
            },
        }
    }

    pub fn weights(&self) -> Result<Vec<Weight>> {
        self.solutions.iter().map(|s| s.weight.parse()).collect()
    }
}

/// First 1-based rank at which two weight sequences differ, including a
/// length difference.
pub fn divergence_rank(a: &[Weight], b: &[Weight]) -> Option<usize> {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        Some(i) => Some(i + 1),
        None if a.len() != b.len() => Some(a.len().min(b.len()) + 1),
        None => None,
    }
}

fn same_multiset(a: &[Weight], b: &[Weight]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Pool, greedy and exhaustive results for one instance.
#[derive(Debug, Clone)]
pub struct ComparisonReport<S> {
    pub objective: Objective,
    pub k: usize,
    pub pool: RankedList<S>,
    pub pool_stats: EngineStats,
    pub greedy: RankedList<S>,
    pub greedy_stats: EngineStats,
    pub oracle: RankedList<S>,
}

impl<S> ComparisonReport<S> {
    /// The pool returned the same multiset of weights as the oracle.
    pub fn pool_matches_oracle(&self) -> bool {
        same_multiset(&self.pool.weights(), &self.oracle.weights())
    }

    pub fn greedy_matches_oracle(&self) -> bool {
        self.greedy.weights() == self.oracle.weights()
    }

    pub fn pool_divergence_rank(&self) -> Option<usize> {
        divergence_rank(&self.pool.weights(), &self.oracle.weights())
    }

    pub fn greedy_divergence_rank(&self) -> Option<usize> {
        divergence_rank(&self.greedy.weights(), &self.oracle.weights())
    }
}

pub fn compare_engines<Sys: ExchangeSystem>(
    sys: &Sys,
    k: usize,
    objective: Objective,
) -> Result<ComparisonReport<Sys::Solution>> {
    let (pool, pool_stats) = kbest_pool(sys, k, objective)?;
    let (greedy, greedy_stats) = kbest_greedy(sys, k, objective)?;
    let oracle = brute_force_kbest(sys, k, objective)?;
    Ok(ComparisonReport {
        objective,
        k,
        pool,
        pool_stats,
        greedy,
        greedy_stats,
        oracle,
    })
}

pub fn compare_tours(
    inst: &WeightedInstance,
    k: usize,
    objective: Objective,
) -> Result<ComparisonReport<crate::CanonicalTour>> {
    compare_engines(&HamiltonSystem::new(inst)?, k, objective)
}

pub fn compare_trees(
    inst: &WeightedInstance,
    k: usize,
    objective: Objective,
) -> Result<ComparisonReport<crate::SpanningTree>> {
    compare_engines(&TreeSystem::new(inst)?, k, objective)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonJson {
    pub system: String,
    pub objective: String,
    pub k_requested: usize,
    pub pool_matches_oracle: bool,
    pub greedy_matches_oracle: bool,
    pub pool_divergence_rank: Option<usize>,
    pub greedy_divergence_rank: Option<usize>,
    pub pool: ResultJson,
    pub greedy: ResultJson,
    pub oracle: ResultJson,
}

impl ComparisonJson {
    pub fn new<S: Shaped>(system: &str, report: &ComparisonReport<S>, timing: bool) -> ComparisonJson {
        let oracle_stats = EngineStats::default();
        ComparisonJson {
            system: system.to_string(),
            objective: report.objective.as_str().to_string(),
            k_requested: report.k,
            pool_matches_oracle: report.pool_matches_oracle(),
            greedy_matches_oracle: report.greedy_matches_oracle(),
            pool_divergence_rank: report.pool_divergence_rank(),
            greedy_divergence_rank: report.greedy_divergence_rank(),
            pool: ResultJson::new("pool", &report.pool, &report.pool_stats, timing),
            greedy: ResultJson::new("greedy", &report.greedy, &report.greedy_stats, timing),
            oracle: ResultJson::new("oracle", &report.oracle, &oracle_stats, timing),
        }
    }
}

/// A witness that some engine disagrees with the exhaustive oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// `"pool-mismatch"`, `"pool-order"` or `"greedy-divergence"`.
    pub kind: String,
    pub system: String,
    pub divergence_rank: Option<usize>,
    /// The instance in its text format.
    pub instance: String,
    pub engine_result: ResultJson,
    pub oracle: ResultJson,
}

impl Counterexample {
    /// Deterministic file name derived from the content.
    pub fn file_name(&self) -> String {
        // FNV-1a over the instance text and engine name
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.instance.bytes().chain(self.engine_result.engine.bytes()) {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{}-{}-{hash:016x}.json", self.kind, self.system)
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(self.file_name());
        let body = serde_json::to_string_pretty(self).expect("serializable") + "\n";
        fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    pub fn read_from(path: &Path) -> Result<Counterexample> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Re-derives every listed weight from the stored instance and checks
    /// that the two sequences really differ. Returns `Ok(false)` when the
    /// witness does not hold up.
    pub fn revalidate(&self) -> Result<bool> {
        let inst = parse_instance(&self.instance)?;
        let recompute = |r: &ResultJson| -> Result<Vec<Weight>> {
            let mut out = Vec::new();
            for s in &r.solutions {
                let edges = solution_edges(s)?;
                let w = solution_weight(&inst, &edges)?;
                if w.to_string() != s.weight || !is_member(&self.system, &inst, &edges) {
                    return Err(Error::Parse(format!(
                        "rank {} of {} does not re-validate",
                        s.rank, r.engine
                    )));
                }
                out.push(w);
            }
            Ok(out)
        };
        let engine = match recompute(&self.engine_result) {
            Ok(w) => w,
            Err(_) => return Ok(false),
        };
        let oracle = match recompute(&self.oracle) {
            Ok(w) => w,
            Err(_) => return Ok(false),
        };
        Ok(match self.kind.as_str() {
            "pool-mismatch" => !same_multiset(&engine, &oracle),
            _ => engine != oracle,
        })
    }
}

fn solution_edges(s: &SolutionJson) -> Result<Vec<Edge>> {
    match (&s.tour, &s.tree) {
        (Some(order), None) => {
            let n = order.len();
            (0..n).map(|i| Edge::try_new(order[i], order[(i + 1) % n])).collect()
        }
        (None, Some(tree)) => tree.iter().map(|&[u, v]| Edge::try_new(u, v)).collect(),
        _ => Err(Error::Parse(format!("rank {} has no solution", s.rank))),
    }
}

fn is_member(system: &str, inst: &WeightedInstance, edges: &[Edge]) -> bool {
    match system {
        "tour" => HamiltonSystem::new(inst).map(|s| s.is_member(edges)).unwrap_or(false),
        _ => TreeSystem::new(inst).map(|s| s.is_member(edges)).unwrap_or(false),
    }
}

/// Witnesses for every disagreement in `report`.
pub fn counterexamples<S: Shaped>(
    system: &str,
    inst: &WeightedInstance,
    report: &ComparisonReport<S>,
) -> Vec<Counterexample> {
    let json = ComparisonJson::new(system, report, false);
    let mut out = Vec::new();
    if json.pool_divergence_rank.is_some() {
        // same weights in a different order still breaks the ranking
        let kind = if json.pool_matches_oracle {
            "pool-order"
        } else {
            "pool-mismatch"
        };
        out.push(Counterexample {
            kind: kind.into(),
            system: system.into(),
            divergence_rank: json.pool_divergence_rank,
            instance: inst.to_text(),
            engine_result: json.pool.clone(),
            oracle: json.oracle.clone(),
        });
    }
    if !json.greedy_matches_oracle {
        out.push(Counterexample {
            kind: "greedy-divergence".into(),
            system: system.into(),
            divergence_rank: json.greedy_divergence_rank,
            instance: inst.to_text(),
            engine_result: json.greedy,
            oracle: json.oracle,
        });
    }
    out
}
