//! Exchangeable pairs shared by the tour and spanning-tree systems.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{Edge, WeightedInstance};
use crate::weight::Weight;

/// A swap `(F, F')`: remove `F` from a solution and add `F'`.
///
/// Both sides are kept sorted, so the derived ordering is lexicographic on
/// `(removed, added)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExchangePair {
    removed: Vec<Edge>,
    added: Vec<Edge>,
}

impl ExchangePair {
    pub fn new(mut removed: Vec<Edge>, mut added: Vec<Edge>) -> ExchangePair {
        removed.sort_unstable();
        added.sort_unstable();
        ExchangePair { removed, added }
    }

    pub fn removed(&self) -> &[Edge] {
        &self.removed
    }

    pub fn added(&self) -> &[Edge] {
        &self.added
    }

    /// `|F|`; both sides have equal size for every pair built by this crate.
    pub fn size(&self) -> usize {
        self.removed.len()
    }

    /// The pair that undoes this one.
    pub fn reversed(&self) -> ExchangePair {
        ExchangePair {
            removed: self.added.clone(),
            added: self.removed.clone(),
        }
    }

    /// `c(F) - c(F')`: how much the solution weight drops when applied.
    pub fn gain(&self, inst: &WeightedInstance) -> Result<Weight> {
        let side = |edges: &[Edge]| -> Result<Weight> {
            let mut total = Weight::ZERO;
            for &e in edges {
                total = total.checked_add(inst.weight(e).ok_or(Error::UnknownEdge(e))?)?;
            }
            Ok(total)
        };
        side(&self.removed)?.checked_sub(side(&self.added)?)
    }
}

impl fmt::Display for ExchangePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |es: &[Edge]| es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "-{{{}}} +{{{}}}", list(&self.removed), list(&self.added))
    }
}

/// One neighbor of a solution and the exchange that reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor<S> {
    pub solution: S,
    pub pair: ExchangePair,
    /// `c(F) - c(F')`, so `weight(solution) = weight(origin) - gain`.
    pub gain: Weight,
}
