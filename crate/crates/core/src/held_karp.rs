// Exact TSP by dynamic programming over vertex subsets (Held-Karp).
//
// `rest[S][v]` is the best cost of a path that starts at `v`, visits every
// vertex of `S` and then returns to vertex 0. Vertices 1..n are packed into
// bits 0..n-1 of `S`. Reconstruction walks forward from 0 and always takes
// the smallest vertex that still completes an optimal tour, which yields the
// canonical-least optimal tour.

use crate::error::{Error, Result};
use crate::hamilton::Tour;
use crate::instance::WeightedInstance;
use crate::weight::Objective;

/// Default vertex limit for [`solve_best_tour`].
pub const HELD_KARP_LIMIT: usize = 18;

const UNSET: i64 = i64::MAX;

/// Optimal tour of a complete instance, ties broken towards the
/// lexicographically least canonical order.
pub fn solve_best_tour(inst: &WeightedInstance, objective: Objective) -> Result<Tour> {
    solve_best_tour_with_limit(inst, objective, HELD_KARP_LIMIT)
}

pub fn solve_best_tour_with_limit(inst: &WeightedInstance, objective: Objective, limit: usize) -> Result<Tour> {
    let n = inst.n();
    if n > limit {
        return Err(Error::InstanceTooLarge {
            what: "the exact tour solver",
            n,
            limit,
        });
    }
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n} (tours need n >= 3)")));
    }
    if !inst.is_complete() {
        return Err(Error::IncompleteInstance {
            missing: inst.missing_edge_count(),
        });
    }
    // |score| never exceeds the total absolute weight, which fits in i64.
    let cost = |a: usize, b: usize| -> i64 {
        let w = inst.weight_between(a, b).expect("complete instance");
        match objective {
            Objective::Min => w.scaled(),
            Objective::Max => -w.scaled(),
        }
    };
    let m = n - 1;
    let full: usize = (1 << m) - 1;
    let mut rest = vec![UNSET; (full + 1) * m];
    for (v, slot) in rest[..m].iter_mut().enumerate() {
        *slot = cost(v + 1, 0);
    }
    for set in 1..=full {
        for v in 0..m {
            if set >> v & 1 == 1 {
                continue;
            }
            let mut best = UNSET;
            let mut bits = set;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let cand = cost(v + 1, u + 1) + rest[(set & !(1 << u)) * m + u];
                best = best.min(cand);
            }
            rest[set * m + v] = best;
        }
    }
    let optimum = (0..m)
        .map(|v| cost(0, v + 1) + rest[(full & !(1 << v)) * m + v])
        .min()
        .expect("n >= 3");

    let mut order = Vec::with_capacity(n);
    order.push(0);
    let (mut cur, mut set, mut acc) = (0usize, full, 0i64);
    while set != 0 {
        let v = (0..m)
            .filter(|&v| set >> v & 1 == 1)
            .find(|&v| acc + cost(cur, v + 1) + rest[(set & !(1 << v)) * m + v] == optimum)
            .expect("some vertex continues an optimal tour");
        acc += cost(cur, v + 1);
        set &= !(1 << v);
        cur = v + 1;
        order.push(cur);
    }
    Tour::new(order)
}
