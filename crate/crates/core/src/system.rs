//! The exchange-system interface the K-best engines run on, with its two
//! instantiations: Hamilton cycles of a complete graph (alpha = 2) and
//! spanning trees of a connected graph (alpha = 1).

use std::fmt::Debug;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exchange::Neighbor;
use crate::hamilton::{self, CanonicalTour, Tour};
use crate::held_karp::{solve_best_tour_with_limit, HELD_KARP_LIMIT};
use crate::instance::{solution_weight, Edge, WeightedInstance};
use crate::tree::{self, DisjointSets, SpanningTree};
use crate::weight::{Objective, Weight};

/// Vertex limit for exhaustive tour enumeration.
pub const BRUTE_FORCE_TOUR_LIMIT: usize = 9;
/// Vertex limit for exhaustive spanning-tree enumeration.
pub const BRUTE_FORCE_TREE_LIMIT: usize = 7;

/// How a solution is written out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionShape {
    Tour(Vec<usize>),
    Tree(Vec<[usize; 2]>),
}

pub trait Shaped {
    fn shape(&self) -> SolutionShape;
}

impl Shaped for CanonicalTour {
    fn shape(&self) -> SolutionShape {
        SolutionShape::Tour(self.order().to_vec())
    }
}

impl Shaped for SpanningTree {
    fn shape(&self) -> SolutionShape {
        SolutionShape::Tree(self.edges().iter().map(|e| [e.u(), e.v()]).collect())
    }
}

/// A family of equal-size edge sets closed under bounded exchanges.
///
/// Solutions are values in canonical form: two equal edge sets compare
/// equal, and `Ord` is the tie-break order used by every engine.
pub trait ExchangeSystem {
    type Solution: Clone + Ord + Debug + Shaped;

    fn instance(&self) -> &WeightedInstance;

    /// Smallest `|x \ y|` between distinct members.
    fn alpha(&self) -> usize;

    /// Common cardinality of all members.
    fn rank(&self) -> usize;

    fn best_solution(&self, objective: Objective) -> Result<Self::Solution>;

    /// Members one exchange away from `x`, each once, sorted.
    fn neighborhood(&self, x: &Self::Solution) -> Result<Vec<Neighbor<Self::Solution>>>;

    fn edges(&self, x: &Self::Solution) -> Vec<Edge>;

    fn is_member(&self, edges: &[Edge]) -> bool;

    /// Every member, for exhaustive oracles; bounded by a size limit.
    fn all_solutions(&self) -> Result<Vec<Self::Solution>>;

    fn weight(&self, x: &Self::Solution) -> Result<Weight> {
        solution_weight(self.instance(), &self.edges(x))
    }

    fn uses_artificial(&self, x: &Self::Solution) -> bool {
        let inst = self.instance();
        self.edges(x).into_iter().any(|e| inst.is_artificial(e))
    }
}

/// Hamilton cycles of a complete instance.
#[derive(Debug, Clone, Copy)]
pub struct HamiltonSystem<'a> {
    inst: &'a WeightedInstance,
    solver_limit: usize,
    brute_force_limit: usize,
}

impl<'a> HamiltonSystem<'a> {
    pub fn new(inst: &'a WeightedInstance) -> Result<Self> {
        if inst.n() < 3 {
            return Err(Error::InvalidParameter(format!("n = {} (tours need n >= 3)", inst.n())));
        }
        if !inst.is_complete() {
            return Err(Error::IncompleteInstance {
                missing: inst.missing_edge_count(),
            });
        }
        Ok(HamiltonSystem {
            inst,
            solver_limit: HELD_KARP_LIMIT,
            brute_force_limit: BRUTE_FORCE_TOUR_LIMIT,
        })
    }

    pub fn with_limits(mut self, solver_limit: usize, brute_force_limit: usize) -> Self {
        self.solver_limit = solver_limit;
        self.brute_force_limit = brute_force_limit;
        self
    }
}

impl ExchangeSystem for HamiltonSystem<'_> {
    type Solution = CanonicalTour;

    fn instance(&self) -> &WeightedInstance {
        self.inst
    }

    fn alpha(&self) -> usize {
        2
    }

    fn rank(&self) -> usize {
        self.inst.n()
    }

    fn best_solution(&self, objective: Objective) -> Result<CanonicalTour> {
        solve_best_tour_with_limit(self.inst, objective, self.solver_limit).map(|t| t.canonical())
    }

    fn neighborhood(&self, x: &CanonicalTour) -> Result<Vec<Neighbor<CanonicalTour>>> {
        hamilton::neighborhood(&x.to_tour(), self.inst)
    }

    fn edges(&self, x: &CanonicalTour) -> Vec<Edge> {
        x.edges()
    }

    fn is_member(&self, edges: &[Edge]) -> bool {
        edges.iter().all(|&e| self.inst.contains(e)) && Tour::from_edges(self.inst.n(), edges).is_ok()
    }

    fn all_solutions(&self) -> Result<Vec<CanonicalTour>> {
        let n = self.inst.n();
        if n > self.brute_force_limit {
            return Err(Error::InstanceTooLarge {
                what: "exhaustive tour enumeration",
                n,
                limit: self.brute_force_limit,
            });
        }
        // Fix vertex 0 first and keep one direction per cycle.
        let mut out = Vec::new();
        for rest in (1..n).permutations(n - 1) {
            if rest[0] < rest[n - 2] {
                let order: Vec<usize> = std::iter::once(0).chain(rest).collect();
                out.push(Tour::new(order)?.canonical());
            }
        }
        Ok(out)
    }
}

/// Spanning trees of a connected instance.
#[derive(Debug, Clone, Copy)]
pub struct TreeSystem<'a> {
    inst: &'a WeightedInstance,
    brute_force_limit: usize,
}

impl<'a> TreeSystem<'a> {
    pub fn new(inst: &'a WeightedInstance) -> Result<Self> {
        if inst.n() < 2 {
            return Err(Error::InvalidParameter(format!("n = {} (trees need n >= 2)", inst.n())));
        }
        if !inst.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(TreeSystem {
            inst,
            brute_force_limit: BRUTE_FORCE_TREE_LIMIT,
        })
    }

    pub fn with_limit(mut self, brute_force_limit: usize) -> Self {
        self.brute_force_limit = brute_force_limit;
        self
    }
}

impl ExchangeSystem for TreeSystem<'_> {
    type Solution = SpanningTree;

    fn instance(&self) -> &WeightedInstance {
        self.inst
    }

    fn alpha(&self) -> usize {
        1
    }

    fn rank(&self) -> usize {
        self.inst.n() - 1
    }

    fn best_solution(&self, objective: Objective) -> Result<SpanningTree> {
        tree::best_spanning_tree(self.inst, objective)
    }

    fn neighborhood(&self, x: &SpanningTree) -> Result<Vec<Neighbor<SpanningTree>>> {
        tree::tree_neighborhood(x, self.inst)
    }

    fn edges(&self, x: &SpanningTree) -> Vec<Edge> {
        x.edges().to_vec()
    }

    fn is_member(&self, edges: &[Edge]) -> bool {
        edges.iter().all(|&e| self.inst.contains(e)) && SpanningTree::new(self.inst.n(), edges.to_vec()).is_ok()
    }

    fn all_solutions(&self) -> Result<Vec<SpanningTree>> {
        let n = self.inst.n();
        if n > self.brute_force_limit {
            return Err(Error::InstanceTooLarge {
                what: "exhaustive spanning-tree enumeration",
                n,
                limit: self.brute_force_limit,
            });
        }
        let edges: Vec<Edge> = self.inst.edges().map(|(e, _)| e).collect();
        let mut out = Vec::new();
        for subset in edges.into_iter().combinations(n - 1) {
            let mut dsu = DisjointSets::new(n);
            if subset.iter().all(|e| dsu.union(e.u(), e.v())) {
                out.push(SpanningTree::new(n, subset)?);
            }
        }
        Ok(out)
    }
}
