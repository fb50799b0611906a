//! Weighted undirected instances: parsing, serialization, generation and the
//! big-M completion of non-complete graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weight::{Objective, Weight, SCALE};

/// Canonical undirected edge, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Canonical edge between two distinct vertices.
    ///
    /// Panics on a self-loop; use [`Edge::try_new`] for untrusted input.
    pub fn new(a: usize, b: usize) -> Edge {
        Edge::try_new(a, b).expect("self-loop edge")
    }

    pub fn try_new(a: usize, b: usize) -> Result<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop { vertex: a }),
        }
    }

    pub fn u(self) -> usize {
        self.u
    }

    pub fn v(self) -> usize {
        self.v
    }

    pub fn touches(self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// An undirected simple graph on vertices `0..n` with exact edge weights.
///
/// The sum of absolute weights always fits in an `i64`, so every solution
/// weight and every exchange gain computed over an instance is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedInstance {
    n: usize,
    weights: BTreeMap<Edge, Weight>,
    artificial: BTreeSet<Edge>,
    // Dense lookup, row-major n x n, mirrors `weights`.
    matrix: Vec<Option<Weight>>,
    total_abs: Weight,
}

impl WeightedInstance {
    pub fn new(n: usize) -> WeightedInstance {
        WeightedInstance {
            n,
            weights: BTreeMap::new(),
            artificial: BTreeSet::new(),
            matrix: vec![None; n * n],
            total_abs: Weight::ZERO,
        }
    }

    /// Complete instance from a weight function over all pairs `u < v`.
    pub fn complete_from<F: FnMut(usize, usize) -> Weight>(n: usize, mut weight: F) -> Result<Self> {
        let mut inst = WeightedInstance::new(n);
        for u in 0..n {
            for v in u + 1..n {
                inst.insert_edge(u, v, weight(u, v))?;
            }
        }
        Ok(inst)
    }

    pub fn insert_edge(&mut self, a: usize, b: usize, w: Weight) -> Result<Edge> {
        for x in [a, b] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        let edge = Edge::try_new(a, b)?;
        if self.weights.contains_key(&edge) {
            return Err(Error::DuplicateEdge { u: edge.u, v: edge.v });
        }
        self.total_abs = self.total_abs.checked_add(w.abs()?)?;
        self.weights.insert(edge, w);
        self.matrix[edge.u * self.n + edge.v] = Some(w);
        self.matrix[edge.v * self.n + edge.u] = Some(w);
        Ok(edge)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn is_complete(&self) -> bool {
        self.weights.len() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn missing_edge_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2 - self.weights.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, Weight)> + '_ {
        self.weights.iter().map(|(&e, &w)| (e, w))
    }

    pub fn weight(&self, e: Edge) -> Option<Weight> {
        self.weights.get(&e).copied()
    }

    /// Weight lookup by vertex pair; `None` for absent edges and `u == v`.
    #[inline]
    pub fn weight_between(&self, u: usize, v: usize) -> Option<Weight> {
        self.matrix[u * self.n + v]
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.weights.contains_key(&e)
    }

    pub fn is_artificial(&self, e: Edge) -> bool {
        self.artificial.contains(&e)
    }

    pub fn artificial_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.artificial.iter().copied()
    }

    /// Sum of absolute edge weights.
    pub fn total_abs_weight(&self) -> Weight {
        self.total_abs
    }

    /// Same graph with every weight negated; artificial flags are kept.
    pub fn negated(&self) -> WeightedInstance {
        let mut out = WeightedInstance::new(self.n);
        for (e, w) in self.edges() {
            out.insert_edge(e.u, e.v, -w).expect("negation preserves validity");
        }
        out.artificial = self.artificial.clone();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            let row = &self.matrix[x * self.n..(x + 1) * self.n];
            for (y, w) in row.iter().enumerate() {
                if !seen[y] && w.is_some() {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Renders the instance in the text format accepted by [`parse_instance`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {}", self.n).unwrap();
        for (e, w) in self.edges() {
            writeln!(out, "e {} {} {}", e.u, e.v, w).unwrap();
        }
        out
    }
}

/// Parses the line-oriented instance format:
///
/// ```text
/// # comment
/// n 4
/// e 0 1 2.5
/// ```
pub fn parse_instance(text: &str) -> Result<WeightedInstance> {
    let mut inst: Option<WeightedInstance> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (fields[0], inst.as_mut()) {
            ("n", None) => {
                if fields.len() != 2 {
                    return Err(Error::Parse("expected `n <count>`".into()).at_line(line_no));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex count {:?}", fields[1])).at_line(line_no))?;
                inst = Some(WeightedInstance::new(n));
            }
            ("n", Some(_)) => {
                return Err(Error::Parse("`n` declared twice".into()).at_line(line_no));
            }
            ("e", Some(inst)) => {
                if fields.len() != 4 {
                    return Err(Error::Parse("expected `e <u> <v> <w>`".into()).at_line(line_no));
                }
                let vertex = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad vertex {s:?}")).at_line(line_no))
                };
                let u = vertex(fields[1])?;
                let v = vertex(fields[2])?;
                let w: Weight = fields[3].parse().map_err(|e: Error| e.at_line(line_no))?;
                inst.insert_edge(u, v, w).map_err(|e| e.at_line(line_no))?;
            }
            ("e", None) => {
                return Err(Error::Parse("`n` must precede edges".into()).at_line(line_no));
            }
            (other, _) => {
                return Err(Error::Parse(format!("unknown directive {other:?}")).at_line(line_no));
            }
        }
    }
    inst.ok_or_else(|| Error::Parse("missing `n <count>` line".into()))
}

/// Completes `inst` to `K_n`, giving every missing edge the penalty weight
/// `M = sum |c(e)| + 1` (min objective).
pub fn embed_complete(inst: &WeightedInstance) -> Result<(WeightedInstance, Weight)> {
    embed_complete_for(inst, Objective::Min)
}

/// Like [`embed_complete`]; under [`Objective::Max`] the artificial edges
/// get `-M` so that they rank last in that direction too.
///
/// Any tour using an artificial edge weighs at least `M - N` while a real
/// tour weighs at most `P`, where `P`/`N` are the summed positive/negative
/// magnitudes. `M > P + N` gives the strict separation.
pub fn embed_complete_for(inst: &WeightedInstance, objective: Objective) -> Result<(WeightedInstance, Weight)> {
    let big_m = inst.total_abs_weight().checked_add(Weight::from_scaled(SCALE))?;
    big_m.checked_mul_int(inst.n as i64)?;
    let penalty = match objective {
        Objective::Min => big_m,
        Objective::Max => -big_m,
    };
    let mut out = inst.clone();
    for u in 0..inst.n {
        for v in u + 1..inst.n {
            if inst.weight_between(u, v).is_none() {
                let e = out.insert_edge(u, v, penalty)?;
                out.artificial.insert(e);
            }
        }
    }
    Ok((out, big_m))
}

/// Parameters for [`random_instance`].
#[derive(Debug, Clone, Copy)]
pub struct RandomSpec {
    pub n: usize,
    pub weight_min: Weight,
    pub weight_max: Weight,
    pub seed: u64,
    pub density: f64,
}

impl RandomSpec {
    /// Complete instance with whole-unit weights in `[lo, hi]`.
    pub fn complete(n: usize, lo: i64, hi: i64, seed: u64) -> RandomSpec {
        RandomSpec {
            n,
            weight_min: Weight::from_units(lo).expect("small bound"),
            weight_max: Weight::from_units(hi).expect("small bound"),
            seed,
            density: 1.0,
        }
    }
}

/// Seeded random instance. Each canonical edge is kept with probability
/// `density` (all edges when `density == 1`). Weights are uniform whole
/// units when both bounds are whole, otherwise uniform on the 10^-6 grid.
pub fn random_instance(spec: &RandomSpec) -> Result<WeightedInstance> {
    if spec.n < 3 {
        return Err(Error::InvalidParameter(format!("n = {} (need n >= 3)", spec.n)));
    }
    if spec.weight_min > spec.weight_max {
        return Err(Error::InvalidParameter(format!(
            "weight range [{}, {}] is empty",
            spec.weight_min, spec.weight_max
        )));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "density {} not in (0, 1]",
            spec.density
        )));
    }
    let whole = spec.weight_min.is_whole() && spec.weight_max.is_whole();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut inst = WeightedInstance::new(spec.n);
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            if spec.density < 1.0 && !rng.gen_bool(spec.density) {
                continue;
            }
            let w = if whole {
                let lo = spec.weight_min.scaled() / SCALE;
                let hi = spec.weight_max.scaled() / SCALE;
                Weight::from_scaled(rng.gen_range(lo..=hi) * SCALE)
            } else {
                Weight::from_scaled(rng.gen_range(spec.weight_min.scaled()..=spec.weight_max.scaled()))
            };
            inst.insert_edge(u, v, w)?;
        }
    }
    Ok(inst)
}

/// Exact total weight of an edge set.
pub fn solution_weight(inst: &WeightedInstance, edges: &[Edge]) -> Result<Weight> {
    let mut total = Weight::ZERO;
    for &e in edges {
        let w = inst.weight(e).ok_or(Error::UnknownEdge(e))?;
        total = total.checked_add(w)?;
    }
    Ok(total)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The K4 instance with weights 1, 2, 4, ..., 32 in canonical edge order.
    pub(crate) fn k4_powers() -> WeightedInstance {
        parse_instance("n 4\ne 0 1 1\ne 0 2 2\ne 0 3 4\ne 1 2 8\ne 1 3 16\ne 2 3 32\n").unwrap()
    }

    fn units(w: i64) -> Weight {
        Weight::from_units(w).unwrap()
    }

    fn all_tour_edge_sets(n: usize) -> Vec<Vec<Edge>> {
        crate::testing::all_canonical_orders(n)
            .into_iter()
            .map(|o| {
                let mut es: Vec<Edge> = (0..n).map(|i| Edge::new(o[i], o[(i + 1) % n])).collect();
                es.sort();
                es
            })
            .collect()
    }

    #[test]
    fn parses_complete_k4() {
        let inst = k4_powers();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.edge_count(), 6);
        assert!(inst.is_complete());
        assert_eq!(inst.weight(Edge::new(3, 2)), Some(units(32)));
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = parse_instance("n 3\ne 0 0 5\n").unwrap_err();
        assert_eq!(err.root(), &Error::SelfLoop { vertex: 0 });
        assert!(matches!(err, Error::AtLine { line: 2, .. }));
    }

    #[test]
    fn parse_scales_decimal_weight() {
        let inst = parse_instance("n 4\ne 0 1 1.25\n").unwrap();
        assert_eq!(inst.weight(Edge::new(0, 1)).unwrap().scaled(), 1_250_000);
    }

    #[test]
    fn parse_errors() {
        let dup = parse_instance("n 3\ne 0 1 1\ne 1 0 2\n").unwrap_err();
        assert_eq!(dup.root(), &Error::DuplicateEdge { u: 0, v: 1 });
        assert!(matches!(dup, Error::AtLine { line: 3, .. }));

        let range = parse_instance("# c\n\nn 3\ne 0 3 1\n").unwrap_err();
        assert_eq!(range.root(), &Error::VertexOutOfRange { vertex: 3, n: 3 });
        assert!(matches!(range, Error::AtLine { line: 4, .. }));

        let bad_w = parse_instance("n 3\ne 0 1 x\n").unwrap_err();
        assert!(matches!(bad_w.root(), Error::Parse(_)));

        let big = parse_instance("n 3\ne 0 1 9000000000000\ne 1 2 9000000000000\n").unwrap_err();
        assert!(matches!(big.root(), Error::WeightOverflow(_)));

        assert!(parse_instance("e 0 1 1\n").is_err());
        assert!(parse_instance("n 3\nn 3\n").is_err());
        assert!(parse_instance("# only a comment\n").is_err());
        assert!(parse_instance("n 3\nq 1\n").is_err());
        assert!(parse_instance("n 3\ne 0 1\n").is_err());
    }

    #[test]
    fn embed_leaves_complete_instance_unchanged() {
        let inst = k4_powers();
        let (out, m) = embed_complete(&inst).unwrap();
        assert_eq!(out, inst);
        assert_eq!(m, units(64));
    }

    #[test]
    fn embed_fills_single_missing_edge() {
        let inst = parse_instance("n 4\ne 0 1 1\ne 0 2 2\ne 0 3 4\ne 1 2 8\ne 2 3 16\n").unwrap();
        let (out, m) = embed_complete(&inst).unwrap();
        assert_eq!(m, units(32));
        assert!(out.is_complete());
        assert_eq!(out.weight(Edge::new(1, 3)), Some(units(32)));
        assert_eq!(out.artificial_edges().collect::<Vec<_>>(), vec![Edge::new(1, 3)]);
    }

    #[test]
    fn embed_cycle_c5_separates_real_tour() {
        let mut c5 = WeightedInstance::new(5);
        for i in 0..5 {
            c5.insert_edge(i, (i + 1) % 5, units(1)).unwrap();
        }
        let (out, m) = embed_complete(&c5).unwrap();
        assert_eq!(m, units(6));
        assert_eq!(out.artificial_edges().count(), 5);
        for e in out.artificial_edges() {
            assert_eq!(out.weight(e), Some(units(6)));
        }
        let tours = all_tour_edge_sets(5);
        assert_eq!(tours.len(), 12);
        let mut real = Vec::new();
        let mut fake = Vec::new();
        for t in &tours {
            let w = solution_weight(&out, t).unwrap();
            if t.iter().any(|&e| out.is_artificial(e)) {
                fake.push(w);
            } else {
                real.push(w);
            }
        }
        assert_eq!(real, vec![units(5)]);
        assert_eq!(fake.len(), 11);
        assert!(fake.iter().all(|&w| w > units(5)));
    }

    #[test]
    fn embed_max_uses_negative_penalty() {
        let inst = parse_instance("n 4\ne 0 1 3\ne 1 2 -2\ne 2 3 1\ne 0 3 5\n").unwrap();
        let (out, m) = embed_complete_for(&inst, Objective::Max).unwrap();
        assert_eq!(m, units(12));
        assert_eq!(out.weight(Edge::new(0, 2)), Some(units(-12)));
    }

    #[test]
    fn embed_detects_overflow() {
        let mut inst = WeightedInstance::new(4);
        inst.insert_edge(0, 1, Weight::from_scaled(i64::MAX / 2)).unwrap();
        assert!(matches!(embed_complete(&inst), Err(Error::WeightOverflow(_))));
    }

    #[test]
    fn random_complete_is_deterministic() {
        let spec = RandomSpec::complete(5, 1, 100, 7);
        let a = random_instance(&spec).unwrap();
        let b = random_instance(&spec).unwrap();
        assert_eq!(a.edge_count(), 10);
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn random_constant_weights() {
        let inst = random_instance(&RandomSpec::complete(4, 1, 1, 0)).unwrap();
        assert!(inst.edges().all(|(_, w)| w == units(1)));
        for t in all_tour_edge_sets(4) {
            assert_eq!(solution_weight(&inst, &t).unwrap(), units(4));
        }
    }

    #[test]
    fn random_half_density_edge_count() {
        let spec = RandomSpec {
            density: 0.5,
            ..RandomSpec::complete(6, 1, 100, 3)
        };
        let inst = random_instance(&spec).unwrap();
        // Frozen from the seeded generator.
        assert_eq!(inst.edge_count(), FROZEN_HALF_DENSITY_EDGES);
        assert!(inst
            .edges()
            .all(|(_, w)| w >= units(1) && w <= units(100) && w.is_whole()));
    }
    const FROZEN_HALF_DENSITY_EDGES: usize = 7;

    #[test]
    fn random_rejects_bad_parameters() {
        let base = RandomSpec::complete(5, 1, 10, 0);
        assert!(random_instance(&RandomSpec { n: 2, ..base }).is_err());
        assert!(random_instance(&RandomSpec { density: 0.0, ..base }).is_err());
        assert!(random_instance(&RandomSpec { density: 1.5, ..base }).is_err());
        assert!(random_instance(&RandomSpec {
            weight_min: units(11),
            ..base
        })
        .is_err());
    }

    #[test]
    fn solution_weights_on_k4() {
        let inst = k4_powers();
        let e = Edge::new;
        assert_eq!(
            solution_weight(&inst, &[e(0, 2), e(1, 2), e(1, 3), e(0, 3)]).unwrap(),
            units(30)
        );
        assert_eq!(solution_weight(&inst, &[]).unwrap(), Weight::ZERO);
        assert_eq!(
            solution_weight(&inst, &[e(0, 1), e(1, 2), e(2, 3), e(0, 3)]).unwrap(),
            units(45)
        );
        // 30 is the minimum over all three tours.
        let best = all_tour_edge_sets(4)
            .iter()
            .map(|t| solution_weight(&inst, t).unwrap())
            .min()
            .unwrap();
        assert_eq!(best, units(30));
        let missing = parse_instance("n 3\ne 0 1 1\n").unwrap();
        assert_eq!(solution_weight(&missing, &[e(1, 2)]), Err(Error::UnknownEdge(e(1, 2))));
    }

    #[test]
    fn embedded_tours_are_separated_exhaustively() {
        for n in 4..=7 {
            for seed in 0..4 {
                let spec = RandomSpec {
                    n,
                    weight_min: units(-50),
                    weight_max: units(50),
                    seed,
                    density: 0.6,
                };
                let inst = random_instance(&spec).unwrap();
                let (out, _) = embed_complete(&inst).unwrap();
                let mut worst_real = None::<Weight>;
                let mut best_fake = None::<Weight>;
                for t in all_tour_edge_sets(n) {
                    let w = solution_weight(&out, &t).unwrap();
                    if t.iter().any(|&e| out.is_artificial(e)) {
                        best_fake = Some(best_fake.map_or(w, |b| b.min(w)));
                    } else {
                        worst_real = Some(worst_real.map_or(w, |b| b.max(w)));
                    }
                }
                if let (Some(r), Some(f)) = (worst_real, best_fake) {
                    assert!(r < f, "n={n} seed={seed}");
                }
            }
        }
    }

    fn arb_instance() -> impl Strategy<Value = WeightedInstance> {
        (3usize..8, any::<u64>(), 0.2f64..=1.0).prop_map(|(n, seed, density)| {
            random_instance(&RandomSpec {
                n,
                weight_min: Weight::from_scaled(-5_000_000_000),
                weight_max: Weight::from_scaled(5_000_000_000),
                seed,
                density,
            })
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(inst in arb_instance()) {
            let again = parse_instance(&inst.to_text()).unwrap();
            prop_assert_eq!(&again, &inst);
            prop_assert_eq!(again.to_text(), inst.to_text());
        }

        #[test]
        fn embed_is_idempotent(inst in arb_instance()) {
            let (once, _) = embed_complete(&inst).unwrap();
            let (twice, _) = embed_complete(&once).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn weight_is_additive(inst in arb_instance(), split in any::<u64>()) {
            let edges: Vec<Edge> = inst.edges().map(|(e, _)| e).collect();
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &e) in edges.iter().enumerate() {
                if split >> (i % 64) & 1 == 1 { a.push(e) } else { b.push(e) }
            }
            let whole = solution_weight(&inst, &edges).unwrap();
            let parts = solution_weight(&inst, &a).unwrap().checked_add(solution_weight(&inst, &b).unwrap()).unwrap();
            prop_assert_eq!(whole, parts);
        }
    }
}
