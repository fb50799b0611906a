//! Runtime as a function of K on a fixed seeded complete instance.

use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::engine::{run_engine, EngineKind};
use crate::error::{Error, Result};
use crate::instance::{random_instance, RandomSpec};
use crate::system::HamiltonSystem;
use crate::weight::Objective;

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub n: usize,
    pub k_max: usize,
    pub step: usize,
    pub engine: EngineKind,
    pub seed: u64,
}

/// One `(n, K, engine)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub n: usize,
    pub k: usize,
    pub engine: EngineKind,
    pub elapsed: Duration,
    /// Part of `elapsed` spent finding the first solution.
    pub best_solution_elapsed: Duration,
    pub pool_size_max: usize,
    pub neighborhoods_expanded: usize,
}

impl BenchRecord {
    pub fn search_elapsed(&self) -> Duration {
        self.elapsed.saturating_sub(self.best_solution_elapsed)
    }
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    k: usize,
    engine: &'static str,
    elapsed_ms: String,
    pool_size_max: usize,
    neighborhoods_expanded: usize,
}

/// Rows for `K = 1, 1 + step, ...` up to `k_max`. Weights are whole units in
/// `[1, 100]` drawn from `seed`.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.k_max == 0 || cfg.step == 0 {
        return Err(Error::InvalidParameter("k-max and step must be positive".into()));
    }
    let inst = random_instance(&RandomSpec::complete(cfg.n, 1, 100, cfg.seed))?;
    let sys = HamiltonSystem::new(&inst)?;
    let mut records = Vec::new();
    for k in (1..=cfg.k_max).step_by(cfg.step) {
        let (_, stats) = run_engine(&sys, cfg.engine, k, Objective::Min)?;
        records.push(BenchRecord {
            n: cfg.n,
            k,
            engine: cfg.engine,
            elapsed: stats.elapsed,
            best_solution_elapsed: stats.best_solution_elapsed,
            pool_size_max: stats.pool_size_max,
            neighborhoods_expanded: stats.neighborhoods_expanded,
        });
    }
    Ok(records)
}

/// Header `n,k,engine,elapsed_ms,pool_size_max,neighborhoods_expanded`.
/// Without `timing` the elapsed column is written as `0`.
pub fn write_csv<W: Write>(records: &[BenchRecord], timing: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        let elapsed_ms = if timing {
            format!("{:.3}", r.elapsed.as_secs_f64() * 1e3)
        } else {
            "0".to_string()
        };
        w.serialize(CsvRow {
            n: r.n,
            k: r.k,
            engine: r.engine.as_str(),
            elapsed_ms,
            pool_size_max: r.pool_size_max,
            neighborhoods_expanded: r.neighborhoods_expanded,
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record([
            "n",
            "k",
            "engine",
            "elapsed_ms",
            "pool_size_max",
            "neighborhoods_expanded",
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_follow_k_schedule() {
        let cfg = BenchConfig {
            n: 7,
            k_max: 50,
            step: 10,
            engine: EngineKind::Pool,
            seed: 1,
        };
        let records = run_bench(&cfg).unwrap();
        let ks: Vec<usize> = records.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![1, 11, 21, 31, 41]);
        assert!(records
            .windows(2)
            .all(|w| w[0].neighborhoods_expanded <= w[1].neighborhoods_expanded));
        let mut buf = Vec::new();
        write_csv(&records, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("n,k,engine,elapsed_ms,pool_size_max,neighborhoods_expanded")
        );
        assert_eq!(lines.next(), Some("7,1,pool,0,0,0"));
    }

    #[test]
    fn single_row_for_k_max_one() {
        let cfg = BenchConfig {
            n: 8,
            k_max: 1,
            step: 100,
            engine: EngineKind::Greedy,
            seed: 0,
        };
        let records = run_bench(&cfg).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].neighborhoods_expanded, 0);
    }

    #[test]
    fn oracle_respects_limit() {
        let cfg = BenchConfig {
            n: 10,
            k_max: 1,
            step: 1,
            engine: EngineKind::Oracle,
            seed: 0,
        };
        assert!(matches!(run_bench(&cfg), Err(Error::InstanceTooLarge { .. })));
    }
}
