//! Spanning trees as bases of the graphic matroid (a 1-bases system).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exchange::{ExchangePair, Neighbor};
use crate::instance::{Edge, WeightedInstance};
use crate::weight::{Objective, Weight};

#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            x = std::mem::replace(&mut self.parent[x], root);
        }
        root
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// A spanning tree, held as its sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SpanningTree {
    edges: Vec<Edge>,
}

impl SpanningTree {
    /// Checks `n - 1` acyclic edges on `0..n`.
    pub fn new(n: usize, mut edges: Vec<Edge>) -> Result<SpanningTree> {
        if n < 2 {
            return Err(Error::InvalidTree(format!("{n} vertices (need at least 2)")));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!("{} edges for {n} vertices", edges.len())));
        }
        edges.sort_unstable();
        let mut dsu = DisjointSets::new(n);
        for &e in &edges {
            if e.v() >= n {
                return Err(Error::InvalidTree(format!("edge {e} out of range")));
            }
            if !dsu.union(e.u(), e.v()) {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
        }
        Ok(SpanningTree { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn weight(&self, inst: &WeightedInstance) -> Result<Weight> {
        crate::instance::solution_weight(inst, &self.edges)
    }

    /// Tree edges on the unique path between `a` and `b`.
    pub fn path(&self, a: usize, b: usize) -> Vec<Edge> {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for &e in &self.edges {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        let mut parent = vec![usize::MAX; n];
        parent[a] = a;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            if x == b {
                break;
            }
            for &y in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = b;
        while x != a {
            path.push(Edge::new(x, parent[x]));
            x = parent[x];
        }
        path
    }
}

/// Kruskal's algorithm; equal weights are taken in edge order.
pub fn best_spanning_tree(inst: &WeightedInstance, objective: Objective) -> Result<SpanningTree> {
    if inst.n() < 2 {
        return Err(Error::InvalidParameter(format!("n = {} (need n >= 2)", inst.n())));
    }
    let mut edges: Vec<(Edge, Weight)> = inst.edges().collect();
    edges.sort_by_key(|&(e, w)| (objective.score(w), e));
    let mut dsu = DisjointSets::new(inst.n());
    let chosen: Vec<Edge> = edges
        .into_iter()
        .filter(|&(e, _)| dsu.union(e.u(), e.v()))
        .map(|(e, _)| e)
        .collect();
    if chosen.len() != inst.n() - 1 {
        return Err(Error::DisconnectedGraph);
    }
    SpanningTree::new(inst.n(), chosen)
}

/// All single swaps `({f}, {e})` with `e` off the tree and `f` on the tree
/// path joining the ends of `e`. Sorted.
pub fn enumerate_1exchanges(t: &SpanningTree, inst: &WeightedInstance) -> Vec<ExchangePair> {
    let mut pairs = Vec::new();
    for (e, _) in inst.edges() {
        if t.contains(e) {
            continue;
        }
        for f in t.path(e.u(), e.v()) {
            pairs.push(ExchangePair::new(vec![f], vec![e]));
        }
    }
    pairs.sort();
    pairs
}

/// `(t \ F) ∪ F'` for a pair of equal-size edge sets.
pub fn apply_tree_exchange(t: &SpanningTree, p: &ExchangePair) -> Result<SpanningTree> {
    if p.size() == 0 || p.added().len() != p.size() {
        return Err(Error::InvalidExchange(format!(
            "sizes |F| = {}, |F'| = {}",
            p.size(),
            p.added().len()
        )));
    }
    if let Some(f) = p.removed().iter().find(|&&f| !t.contains(f)) {
        return Err(Error::InvalidExchange(format!("removed edge {f} is not in the tree")));
    }
    if let Some(e) = p.added().iter().find(|&&e| t.contains(e)) {
        return Err(Error::InvalidExchange(format!("added edge {e} is already in the tree")));
    }
    let removed: BTreeSet<Edge> = p.removed().iter().copied().collect();
    let edges: Vec<Edge> = t
        .edges()
        .iter()
        .copied()
        .filter(|e| !removed.contains(e))
        .chain(p.added().iter().copied())
        .collect();
    SpanningTree::new(t.n(), edges).map_err(|e| Error::InvalidExchange(e.to_string()))
}

/// Trees reachable by one swap, sorted by edge list.
pub fn tree_neighborhood(t: &SpanningTree, inst: &WeightedInstance) -> Result<Vec<Neighbor<SpanningTree>>> {
    let mut out = Vec::new();
    for pair in enumerate_1exchanges(t, inst) {
        let gain = pair.gain(inst)?;
        let solution = apply_tree_exchange(t, &pair)?;
        out.push(Neighbor { solution, pair, gain });
    }
    // single swaps reach distinct trees, so sorting is all that is needed
    out.sort_by(|a, b| a.solution.cmp(&b.solution));
    Ok(out)
}
