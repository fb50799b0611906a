//! Hamilton cycles of a complete graph as a 2-bases system.
//!
//! A tour is stored as a cyclic vertex order. Exchanges remove two or three
//! tour edges and reconnect the resulting path fragments with the same number
//! of edges that were not on the tour.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exchange::{ExchangePair, Neighbor};
use crate::instance::{Edge, WeightedInstance};
use crate::weight::Weight;

/// A Hamilton cycle on vertices `0..n`, `n >= 3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    /// Validates that `order` is a permutation of `0..n`.
    pub fn new(order: Vec<usize>) -> Result<Tour> {
        let n = order.len();
        if n < 3 {
            return Err(Error::InvalidTour(format!("{n} vertices (need at least 3)")));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTour(format!("{order:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(Tour { order })
    }

    /// The tour `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Result<Tour> {
        Tour::new((0..n).collect())
    }

    /// Rebuilds a tour from its edge set, checking that every vertex has
    /// degree two and that the edges form one cycle. The result is canonical.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Tour> {
        if n < 3 || edges.len() != n {
            return Err(Error::InvalidTour(format!("{} edges for {n} vertices", edges.len())));
        }
        let mut adj = vec![[usize::MAX; 2]; n];
        let mut degree = vec![0usize; n];
        for &e in edges {
            for (a, b) in [(e.u(), e.v()), (e.v(), e.u())] {
                if a >= n {
                    return Err(Error::InvalidTour(format!("vertex {a} out of range")));
                }
                if degree[a] == 2 {
                    return Err(Error::InvalidTour(format!("vertex {a} has degree > 2")));
                }
                adj[a][degree[a]] = b;
                degree[a] += 1;
            }
        }
        if let Some(v) = degree.iter().position(|&d| d != 2) {
            return Err(Error::InvalidTour(format!("vertex {v} has degree {}", degree[v])));
        }
        let mut order = Vec::with_capacity(n);
        let mut prev = 0;
        let mut cur = adj[0][0].min(adj[0][1]);
        order.push(0);
        while cur != 0 {
            if order.len() == n {
                return Err(Error::InvalidTour("edges do not close into a cycle".into()));
            }
            order.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        if order.len() != n {
            return Err(Error::InvalidTour(format!(
                "edges form a cycle of length {} instead of {n}",
                order.len()
            )));
        }
        Ok(Tour { order })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Edge between positions `i` and `i + 1` (cyclically).
    pub fn edge_at(&self, i: usize) -> Edge {
        let n = self.n();
        Edge::new(self.order[i], self.order[(i + 1) % n])
    }

    /// The `n` tour edges in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut es: Vec<Edge> = (0..self.n()).map(|i| self.edge_at(i)).collect();
        es.sort_unstable();
        es
    }

    pub fn canonical(&self) -> CanonicalTour {
        canonicalize(self)
    }

    pub fn weight(&self, inst: &WeightedInstance) -> Result<Weight> {
        crate::instance::solution_weight(inst, &self.edges())
    }

    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// Membership test for tour edges through the inverse permutation.
struct TourIndex<'a> {
    tour: &'a Tour,
    pos: Vec<usize>,
}

impl<'a> TourIndex<'a> {
    fn new(tour: &'a Tour) -> Self {
        TourIndex {
            pos: tour.positions(),
            tour,
        }
    }

    fn contains(&self, a: usize, b: usize) -> bool {
        let n = self.tour.n();
        let (pa, pb) = (self.pos[a], self.pos[b]);
        (pa + 1) % n == pb || (pb + 1) % n == pa
    }

    fn contains_edge(&self, e: Edge) -> bool {
        e.v() < self.tour.n() && self.contains(e.u(), e.v())
    }
}

/// Rotation- and reflection-free form of a tour: starts at vertex 0 and
/// visits the smaller neighbor of 0 first. Ordering is lexicographic on the
/// vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CanonicalTour(Vec<usize>);

impl CanonicalTour {
    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn to_tour(&self) -> Tour {
        Tour { order: self.0.clone() }
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.0.len();
        let mut es: Vec<Edge> = (0..n).map(|i| Edge::new(self.0[i], self.0[(i + 1) % n])).collect();
        es.sort_unstable();
        es
    }
}

pub fn canonicalize(t: &Tour) -> CanonicalTour {
    let n = t.n();
    let start = t.order.iter().position(|&v| v == 0).expect("tour contains vertex 0");
    let next = t.order[(start + 1) % n];
    let prev = t.order[(start + n - 1) % n];
    let order = if next < prev {
        (0..n).map(|k| t.order[(start + k) % n]).collect()
    } else {
        (0..n).map(|k| t.order[(start + n - k) % n]).collect()
    };
    CanonicalTour(order)
}

/// `(t \ F) ∪ F'`, rejecting anything that is not a 2- or 3-exchange
/// producing a Hamilton cycle.
pub fn apply_exchange(t: &Tour, p: &ExchangePair) -> Result<Tour> {
    let n = t.n();
    let size = p.size();
    if !(2..=3).contains(&size) || p.added().len() != size {
        return Err(Error::InvalidExchange(format!(
            "sizes |F| = {}, |F'| = {} (need equal sizes in 2..=3)",
            size,
            p.added().len()
        )));
    }
    let idx = TourIndex::new(t);
    if p.removed().windows(2).any(|w| w[0] == w[1]) || p.added().windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidExchange("repeated edge in pair".into()));
    }
    if let Some(e) = p.removed().iter().find(|&&e| !idx.contains_edge(e)) {
        return Err(Error::InvalidExchange(format!("removed edge {e} is not on the tour")));
    }
    if let Some(e) = p.added().iter().find(|&&e| e.v() >= n || idx.contains_edge(e)) {
        return Err(Error::InvalidExchange(format!(
            "added edge {e} is already on the tour or out of range"
        )));
    }
    let mut edges: BTreeSet<Edge> = t.edges().into_iter().collect();
    for e in p.removed() {
        edges.remove(e);
    }
    edges.extend(p.added().iter().copied());
    let edges: Vec<Edge> = edges.into_iter().collect();
    Tour::from_edges(n, &edges).map_err(|e| Error::InvalidExchange(format!("result is not a Hamilton cycle: {e}")))
}

/// A maximal path of the tour left after cutting some edges, given by the
/// first position and length along the tour order.
#[derive(Clone, Copy)]
struct Fragment {
    start: usize,
    len: usize,
}

/// Every way to reconnect the fragments left by cutting the tour edges at
/// `cuts` (sorted positions) with edges that are not on the tour. The first
/// fragment keeps its place and orientation; the identity is never returned.
fn reconnections(t: &Tour, idx: &TourIndex<'_>, cuts: &[usize]) -> Vec<(ExchangePair, Vec<usize>)> {
    let n = t.n();
    let m = cuts.len();
    let fragments: Vec<Fragment> = (0..m)
        .map(|k| {
            let end = if k + 1 < m { cuts[k + 1] } else { cuts[0] + n };
            Fragment {
                start: (cuts[k] + 1) % n,
                len: end - cuts[k],
            }
        })
        .collect();
    let at = |f: Fragment, k: usize| t.order[(f.start + k) % n];
    // (first, last) vertex when traversed forward or reversed
    let ends = |f: Fragment, rev: bool| {
        let (h, tl) = (at(f, 0), at(f, f.len - 1));
        if rev {
            (tl, h)
        } else {
            (h, tl)
        }
    };
    let removed: Vec<Edge> = cuts.iter().map(|&c| t.edge_at(c)).collect();

    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for perm in (1..m).permutations(m - 1) {
        for mask in 0..(1u32 << (m - 1)) {
            let arrangement: Vec<(Fragment, bool)> = std::iter::once((fragments[0], false))
                .chain(
                    perm.iter()
                        .enumerate()
                        .map(|(i, &k)| (fragments[k], mask >> i & 1 == 1)),
                )
                .collect();
            let mut added = Vec::with_capacity(m);
            let mut ok = true;
            for i in 0..m {
                let (_, tail) = ends(arrangement[i].0, arrangement[i].1);
                let (head, _) = ends(arrangement[(i + 1) % m].0, arrangement[(i + 1) % m].1);
                if idx.contains(tail, head) {
                    ok = false;
                    break;
                }
                added.push(Edge::new(tail, head));
            }
            if !ok {
                continue;
            }
            let pair = ExchangePair::new(removed.clone(), added);
            if !seen.insert(pair.added().to_vec()) {
                continue;
            }
            let mut order = Vec::with_capacity(n);
            for &(f, rev) in &arrangement {
                if rev {
                    order.extend((0..f.len).rev().map(|k| at(f, k)));
                } else {
                    order.extend((0..f.len).map(|k| at(f, k)));
                }
            }
            out.push((pair, order));
        }
    }
    out
}

fn two_exchanges_with_tours(t: &Tour) -> Vec<(ExchangePair, Vec<usize>)> {
    let n = t.n();
    let idx = TourIndex::new(t);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            out.extend(reconnections(t, &idx, &[i, j]));
        }
    }
    out
}

fn three_exchanges_with_tours(t: &Tour) -> Vec<(ExchangePair, Vec<usize>)> {
    let n = t.n();
    let idx = TourIndex::new(t);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.extend(reconnections(t, &idx, &[i, j, k]));
            }
        }
    }
    out
}

/// All 2-exchanges: two non-adjacent tour edges and their unique
/// reconnection. There are `n(n-3)/2` of them; sorted.
pub fn enumerate_2exchanges(t: &Tour) -> Vec<ExchangePair> {
    let mut pairs: Vec<ExchangePair> = two_exchanges_with_tours(t).into_iter().map(|(p, _)| p).collect();
    pairs.sort();
    pairs
}

/// All pure 3-exchanges: three tour edges (adjacent or not) replaced by
/// three edges off the tour such that the result is a Hamilton cycle. Sorted.
pub fn enumerate_3exchanges(t: &Tour) -> Vec<ExchangePair> {
    let mut pairs: Vec<ExchangePair> = three_exchanges_with_tours(t).into_iter().map(|(p, _)| p).collect();
    pairs.sort();
    pairs.dedup();
    pairs
}

/// Every tour reachable by one 2- or 3-exchange, sorted by canonical form.
///
/// Each neighbor is listed once with the best-gain pair reaching it (ties go
/// to the lexicographically least pair). Requires all touched edges to be in
/// `inst`.
pub fn neighborhood(t: &Tour, inst: &WeightedInstance) -> Result<Vec<Neighbor<CanonicalTour>>> {
    let mut best: BTreeMap<CanonicalTour, (ExchangePair, Weight)> = BTreeMap::new();
    let candidates = two_exchanges_with_tours(t)
        .into_iter()
        .chain(three_exchanges_with_tours(t));
    for (pair, order) in candidates {
        let gain = pair.gain(inst)?;
        let key = canonicalize(&Tour { order });
        match best.get_mut(&key) {
            Some(slot) => {
                if gain > slot.1 || (gain == slot.1 && pair < slot.0) {
                    *slot = (pair, gain);
                }
            }
            None => {
                best.insert(key, (pair, gain));
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|(solution, (pair, gain))| Neighbor { solution, pair, gain })
        .collect())
}

/// Splits the move from `h` to `h2` into a sequence of 2- and 3-exchanges.
///
/// Every pair removes edges of `h \ h2` and adds edges of `h2 \ h`, and each
/// prefix of the sequence applied to `h` is a Hamilton cycle. At each step
/// the first 2-exchange (else 3-exchange) moving strictly closer to `h2` is
/// taken; if none exists the pair of tours is returned as a
/// [`Error::DecompositionFailure`].
pub fn decompose_difference(h: &Tour, h2: &Tour) -> Result<Vec<ExchangePair>> {
    if h.n() != h2.n() {
        return Err(Error::InvalidParameter(format!(
            "tours on {} and {} vertices",
            h.n(),
            h2.n()
        )));
    }
    let target = canonicalize(h2);
    if canonicalize(h) == target {
        return Err(Error::InvalidParameter("tours are identical".into()));
    }
    let target_edges: BTreeSet<Edge> = target.edges().into_iter().collect();
    let n = h.n();
    let mut current = canonicalize(h).to_tour();
    let mut steps = Vec::new();
    while canonicalize(&current) != target {
        let idx = TourIndex::new(&current);
        let foreign: Vec<usize> = (0..n)
            .filter(|&i| !target_edges.contains(&current.edge_at(i)))
            .collect();
        let fits = |p: &ExchangePair| p.added().iter().all(|e| target_edges.contains(e));
        let mut found = None;
        'search: for size in 2..=3 {
            for cuts in foreign.iter().copied().combinations(size) {
                if size == 2 && (cuts[1] == cuts[0] + 1 || (cuts[0] == 0 && cuts[1] == n - 1)) {
                    continue;
                }
                if let Some(hit) = reconnections(&current, &idx, &cuts).into_iter().find(|(p, _)| fits(p)) {
                    found = Some(hit);
                    break 'search;
                }
            }
        }
        let Some((pair, order)) = found else {
            return Err(Error::DecompositionFailure {
                from: canonicalize(h).0,
                to: target.0,
            });
        };
        current = canonicalize(&Tour { order }).to_tour();
        steps.push(pair);
    }
    Ok(steps)
}

/// Number of tour edges of `a` missing from `b`.
pub fn tour_distance(a: &Tour, b: &Tour) -> usize {
    let idx = TourIndex::new(b);
    (0..a.n()).filter(|&i| !idx.contains_edge(a.edge_at(i))).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_instance;
    use crate::instance::tests::k4_powers;
    use crate::instance::RandomSpec;
    use crate::testing::all_canonical_orders;
    use proptest::prelude::*;

    fn tour(order: &[usize]) -> Tour {
        Tour::new(order.to_vec()).unwrap()
    }

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b)
    }

    fn edge_set(order: &[usize]) -> BTreeSet<Edge> {
        let n = order.len();
        (0..n).map(|i| e(order[i], order[(i + 1) % n])).collect()
    }

    #[test]
    fn tour_validation() {
        assert!(Tour::new(vec![0, 1]).is_err());
        assert!(Tour::new(vec![0, 1, 1]).is_err());
        assert!(Tour::new(vec![0, 1, 3]).is_err());
        assert!(Tour::from_edges(4, &[e(0, 1), e(1, 2), e(2, 0), e(0, 3)]).is_err());
        // two triangles
        assert!(Tour::from_edges(6, &[e(0, 1), e(1, 2), e(0, 2), e(3, 4), e(4, 5), e(3, 5)]).is_err());
        let t = Tour::from_edges(4, &[e(2, 3), e(0, 3), e(1, 2), e(0, 1)]).unwrap();
        assert_eq!(t.order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonicalize(&tour(&[2, 3, 0, 1])).order(), &[0, 1, 2, 3]);
        assert_eq!(canonicalize(&tour(&[0, 3, 2, 1])).order(), &[0, 1, 2, 3]);
        let c = canonicalize(&tour(&[4, 1, 3, 0, 2]));
        assert_eq!(canonicalize(&c.to_tour()), c);
        assert_eq!(c.order(), &[0, 2, 4, 1, 3]);
    }

    #[test]
    fn apply_2opt_on_k4() {
        let p = ExchangePair::new(vec![e(0, 1), e(2, 3)], vec![e(0, 2), e(1, 3)]);
        let out = apply_exchange(&tour(&[0, 1, 2, 3]), &p).unwrap();
        assert_eq!(out.order(), &[0, 2, 1, 3]);
    }

    #[test]
    fn apply_rejects_empty_and_bad_pairs() {
        let t = tour(&[0, 1, 2, 3, 4]);
        let empty = ExchangePair::new(vec![], vec![]);
        assert!(matches!(apply_exchange(&t, &empty), Err(Error::InvalidExchange(_))));
        let off_tour = ExchangePair::new(vec![e(0, 2), e(1, 3)], vec![e(0, 1), e(2, 3)]);
        assert!(apply_exchange(&t, &off_tour).is_err());
        // adjacent edges: the only reconnection that avoids tour edges splits the cycle
        let split = ExchangePair::new(vec![e(0, 1), e(2, 3)], vec![e(0, 3), e(1, 2)]);
        assert!(apply_exchange(&t, &split).is_err());
        let uneven = ExchangePair::new(vec![e(0, 1), e(2, 3)], vec![e(0, 2)]);
        assert!(apply_exchange(&t, &uneven).is_err());
    }

    #[test]
    fn apply_on_k5_changes_weight_by_gain() {
        let inst = random_instance(&RandomSpec::complete(5, 1, 100, 11)).unwrap();
        let t = tour(&[0, 1, 2, 3, 4]);
        let p = ExchangePair::new(vec![e(0, 1), e(2, 3)], vec![e(0, 2), e(1, 3)]);
        let out = apply_exchange(&t, &p).unwrap();
        assert_eq!(out.order(), &[0, 2, 1, 3, 4]);
        let before = t.weight(&inst).unwrap();
        let after = out.weight(&inst).unwrap();
        assert_eq!(after, before.checked_sub(p.gain(&inst).unwrap()).unwrap());
    }

    #[test]
    fn two_exchange_counts() {
        assert!(enumerate_2exchanges(&tour(&[0, 1, 2])).is_empty());
        for n in 4..=8 {
            let t = Tour::identity(n).unwrap();
            let pairs = enumerate_2exchanges(&t);
            assert_eq!(pairs.len(), n * (n - 3) / 2, "n = {n}");
            let mut results = BTreeSet::new();
            for p in &pairs {
                let out = apply_exchange(&t, p).unwrap();
                assert_ne!(canonicalize(&out), canonicalize(&t));
                results.insert(canonicalize(&out));
            }
            assert_eq!(results.len(), pairs.len());
        }
    }

    // Oracle: every tour at distance exactly d from t, by full enumeration.
    fn tours_at_distance(t: &Tour, d: usize) -> BTreeSet<Vec<usize>> {
        let own = edge_set(t.order());
        all_canonical_orders(t.n())
            .into_iter()
            .filter(|o| edge_set(o).difference(&own).count() == d)
            .collect()
    }

    #[test]
    fn two_exchanges_match_distance_two_oracle() {
        for n in 4..=8 {
            let t = tour(&(0..n).rev().collect::<Vec<_>>());
            let got: BTreeSet<Vec<usize>> = enumerate_2exchanges(&t)
                .iter()
                .map(|p| canonicalize(&apply_exchange(&t, p).unwrap()).0)
                .collect();
            assert_eq!(got, tours_at_distance(&t, 2), "n = {n}");
        }
    }

    #[test]
    fn three_exchanges_match_distance_three_oracle() {
        assert!(enumerate_3exchanges(&tour(&[0, 1, 2, 3])).is_empty());
        for n in 5..=8 {
            let t = tour(&[&[1, 0][..], &(2..n).collect::<Vec<_>>()].concat());
            let pairs = enumerate_3exchanges(&t);
            let mut got = BTreeSet::new();
            for p in &pairs {
                assert_eq!(p.size(), 3);
                let out = apply_exchange(&t, p).unwrap();
                assert_eq!(tour_distance(&out, &t), 3);
                assert!(got.insert(canonicalize(&out).0), "duplicate result");
            }
            assert_eq!(got, tours_at_distance(&t, 3), "n = {n}");
        }
    }

    #[test]
    fn three_consecutive_edges_of_k5_have_no_pure_reconnection() {
        // Removing (0,1), (1,2), (2,3) isolates 1 and 2; closing the cycle
        // needs the removed edge (1,2) again.
        let t = tour(&[0, 1, 2, 3, 4]);
        let f = vec![e(0, 1), e(1, 2), e(2, 3)];
        assert!(enumerate_3exchanges(&t).iter().all(|p| p.removed() != f.as_slice()));
        let oracle = tours_at_distance(&t, 3)
            .into_iter()
            .filter(|o| {
                let es = edge_set(o);
                f.iter().all(|x| !es.contains(x))
            })
            .count();
        assert_eq!(oracle, 0);
        // With two adjacent edges and a third one apart there is a reconnection.
        let p = ExchangePair::new(vec![e(0, 1), e(1, 2), e(3, 4)], vec![e(1, 3), e(0, 2), e(1, 4)]);
        assert!(enumerate_3exchanges(&t).contains(&p));
    }

    #[test]
    fn neighborhood_of_k4_is_every_other_tour() {
        let inst = k4_powers();
        let t = tour(&[0, 2, 1, 3]);
        let nb = neighborhood(&t, &inst).unwrap();
        assert_eq!(nb.len(), 2);
        let w: Vec<Weight> = nb.iter().map(|x| x.solution.to_tour().weight(&inst).unwrap()).collect();
        let mut w_sorted = w.clone();
        w_sorted.sort();
        assert_eq!(
            w_sorted,
            vec![Weight::from_units(45).unwrap(), Weight::from_units(51).unwrap()]
        );
    }

    #[test]
    fn neighborhood_matches_distance_oracle_on_k5_to_k7() {
        for n in 5..=7 {
            let inst = random_instance(&RandomSpec::complete(n, -20, 20, n as u64)).unwrap();
            let t = Tour::identity(n).unwrap();
            let nb = neighborhood(&t, &inst).unwrap();
            let got: BTreeSet<Vec<usize>> = nb.iter().map(|x| x.solution.0.clone()).collect();
            let mut expected = tours_at_distance(&t, 2);
            expected.extend(tours_at_distance(&t, 3));
            assert_eq!(got, expected, "n = {n}");
            if n == 5 {
                assert!(nb.len() >= 5 && nb.len() <= 11);
            }
            let base = t.weight(&inst).unwrap();
            for x in &nb {
                let out = apply_exchange(&t, &x.pair).unwrap();
                assert_eq!(canonicalize(&out), x.solution);
                assert_eq!(out.weight(&inst).unwrap(), base.checked_sub(x.gain).unwrap());
                let d = tour_distance(&out, &t);
                assert!((2..=3).contains(&d));
            }
        }
    }

    #[test]
    fn neighborhood_graph_is_connected_up_to_k7() {
        for n in 4..=7 {
            let inst = WeightedInstance::complete_from(n, |_, _| Weight::ZERO).unwrap();
            let all = all_canonical_orders(n);
            let mut seen = BTreeSet::new();
            let start = CanonicalTour(all[0].clone());
            seen.insert(start.clone());
            let mut stack = vec![start];
            while let Some(c) = stack.pop() {
                for x in neighborhood(&c.to_tour(), &inst).unwrap() {
                    if seen.insert(x.solution.clone()) {
                        stack.push(x.solution);
                    }
                }
            }
            assert_eq!(seen.len(), all.len(), "n = {n}");
        }
    }

    #[test]
    fn decompose_distance_two_is_single_pair() {
        let h = tour(&[0, 1, 2, 3, 4, 5]);
        let h2 = tour(&[0, 3, 2, 1, 4, 5]);
        assert_eq!(tour_distance(&h, &h2), 2);
        let steps = decompose_difference(&h, &h2).unwrap();
        assert_eq!(
            steps,
            vec![ExchangePair::new(vec![e(0, 1), e(3, 4)], vec![e(0, 3), e(1, 4)])]
        );
    }

    #[test]
    fn decompose_rejects_same_tour() {
        let h = tour(&[0, 1, 2, 3, 4]);
        let rev = tour(&[4, 3, 2, 1, 0]);
        assert!(matches!(
            decompose_difference(&h, &rev),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn decompose_all_pairs_of_k6() {
        let all = all_canonical_orders(6);
        assert_eq!(all.len(), 60);
        for a in &all {
            for b in &all {
                if a == b {
                    continue;
                }
                let (h, h2) = (tour(a), tour(b));
                let steps = decompose_difference(&h, &h2).unwrap_or_else(|err| panic!("{err}"));
                let d = tour_distance(&h, &h2);
                assert!(steps.len() <= d.div_ceil(2));
                let removable = edge_set(a).difference(&edge_set(b)).copied().collect::<BTreeSet<_>>();
                let addable = edge_set(b).difference(&edge_set(a)).copied().collect::<BTreeSet<_>>();
                let mut cur = h.clone();
                for p in &steps {
                    assert!((2..=3).contains(&p.size()));
                    assert!(p.removed().iter().all(|x| removable.contains(x)));
                    assert!(p.added().iter().all(|x| addable.contains(x)));
                    cur = apply_exchange(&cur, p).unwrap();
                }
                assert_eq!(canonicalize(&cur), canonicalize(&h2));
            }
        }
    }

    fn arb_tour() -> impl Strategy<Value = Tour> {
        (4usize..10)
            .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|o| Tour::new(o).unwrap())
    }

    proptest! {
        #[test]
        fn every_exchange_is_valid_and_reversible(t in arb_tour(), seed in any::<u64>()) {
            let inst = random_instance(&RandomSpec::complete(t.n(), -50, 50, seed)).unwrap();
            let base = t.weight(&inst).unwrap();
            let pairs = enumerate_2exchanges(&t).into_iter().chain(enumerate_3exchanges(&t));
            for p in pairs {
                let out = apply_exchange(&t, &p).unwrap();
                prop_assert_eq!(out.weight(&inst).unwrap(), base.checked_sub(p.gain(&inst).unwrap()).unwrap());
                let back = apply_exchange(&out, &p.reversed()).unwrap();
                prop_assert_eq!(canonicalize(&back), canonicalize(&t));
            }
        }

        #[test]
        fn canonicalize_is_invariant(t in arb_tour(), shift in 0usize..10, flip in any::<bool>()) {
            let n = t.n();
            let mut o: Vec<usize> = (0..n).map(|k| t.order()[(k + shift) % n]).collect();
            if flip { o.reverse(); }
            let c = canonicalize(&t);
            prop_assert_eq!(canonicalize(&Tour::new(o).unwrap()), c.clone());
            prop_assert_eq!(canonicalize(&c.to_tour()), c.clone());
            prop_assert_eq!(c.order()[0], 0);
            prop_assert!(c.order()[1] < c.order()[n - 1]);
        }
    }
}
