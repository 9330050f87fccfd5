use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use super::{BenchInstance, Family};
use crate::compile::{
    pipeline_brzozowski_explicit, pipeline_brzozowski_symbolic, pipeline_hopcroft, CompileOptions, Pipeline,
};
use crate::limits::{Budget, LimitError, DEFAULT_STATE_CAP};
use crate::symbolic::{encode_explicit_dfa, solve_game, Prune};
use crate::{par, Error, Result};

pub const CSV_HEADER: [&str; 11] = [
    "instance",
    "family",
    "pipeline",
    "revdfa_states",
    "dfa_states_or_statevars",
    "construct_ms",
    "game_ms",
    "total_ms",
    "iterations",
    "realizable",
    "status",
];

#[derive(Debug, Clone, Copy)]
pub struct HarnessConfig {
    /// Wall-clock limit per (instance, pipeline) cell.
    pub timeout: Option<Duration>,
    pub state_cap: usize,
    /// Pruning for the symbolic pipeline. Explicit pipelines solve unpruned.
    pub prune: Prune,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig { timeout: Some(Duration::from_secs(60)), state_cap: DEFAULT_STATE_CAP, prune: Prune::Restrict }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realizable {
    Yes,
    No,
    NotApplicable,
}

impl fmt::Display for Realizable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realizable::Yes => "yes",
            Realizable::No => "no",
            Realizable::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Timeout,
    Resource,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Timeout => "timeout",
            Status::Resource => "resource",
        })
    }
}

/// One (instance, pipeline) cell. Numeric fields are `None` unless the
/// status is ok. `revdfa_states` is 0 for the Hopcroft pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessRow {
    pub instance: String,
    pub family: Family,
    pub pipeline: Pipeline,
    pub revdfa_states: Option<usize>,
    pub dfa_states_or_statevars: Option<usize>,
    pub construct_ms: Option<f64>,
    pub game_ms: Option<f64>,
    pub total_ms: Option<f64>,
    pub iterations: Option<usize>,
    pub realizable: Realizable,
    pub status: Status,
}

impl HarnessRow {
    fn failed(inst: &BenchInstance, pipeline: Pipeline, status: Status) -> Self {
        HarnessRow {
            instance: inst.id.clone(),
            family: inst.family,
            pipeline,
            revdfa_states: None,
            dfa_states_or_statevars: None,
            construct_ms: None,
            game_ms: None,
            total_ms: None,
            iterations: None,
            realizable: Realizable::NotApplicable,
            status,
        }
    }

    fn record(&self) -> [String; 11] {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let ms = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
        [
            self.instance.clone(),
            self.family.to_string(),
            self.pipeline.to_string(),
            opt(self.revdfa_states),
            opt(self.dfa_states_or_statevars),
            ms(self.construct_ms),
            ms(self.game_ms),
            ms(self.total_ms),
            opt(self.iterations),
            self.realizable.to_string(),
            self.status.to_string(),
        ]
    }
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn run_cell(inst: &BenchInstance, pipeline: Pipeline, cfg: &HarnessConfig) -> Result<HarnessRow> {
    let mut budget = Budget::default().with_state_cap(cfg.state_cap);
    if let Some(t) = cfg.timeout {
        budget = budget.with_timeout(t);
    }
    let opts = CompileOptions { alphabet: Some(inst.partition.props()), budget };
    let start = Instant::now();
    let outcome = (|| {
        let (mut d, revdfa, size, prune, reach) = match pipeline {
            Pipeline::Hopcroft | Pipeline::BrzExplicit => {
                let (a, rep) = if pipeline == Pipeline::Hopcroft {
                    pipeline_hopcroft(&inst.formula, &opts)?
                } else {
                    pipeline_brzozowski_explicit(&inst.formula, &opts)?
                };
                let d = encode_explicit_dfa(&a, &inst.partition)?;
                (d, rep.revdfa_states, a.num_states(), Prune::None, None)
            }
            Pipeline::BrzSymbolic => {
                let (d, r, rep) = pipeline_brzozowski_symbolic(&inst.formula, &inst.partition, &opts)?;
                let r = (cfg.prune != Prune::None).then_some(r);
                (d, rep.revdfa_states, rep.dfa_states_or_statevars, cfg.prune, r)
            }
        };
        let constructed = start.elapsed();
        let g = solve_game(&mut d, prune, reach, &budget)?;
        Ok::<_, Error>((revdfa, size, constructed, g))
    })();
    let status = match outcome {
        Ok((revdfa, size, constructed, g)) => {
            let total = start.elapsed();
            return Ok(HarnessRow {
                instance: inst.id.clone(),
                family: inst.family,
                pipeline,
                revdfa_states: Some(revdfa),
                dfa_states_or_statevars: Some(size),
                construct_ms: Some(millis(constructed)),
                game_ms: Some(millis(total - constructed)),
                total_ms: Some(millis(total)),
                iterations: Some(g.iterations),
                realizable: if g.realizable { Realizable::Yes } else { Realizable::No },
                status: Status::Ok,
            });
        }
        Err(Error::Limit(LimitError::Timeout)) => Status::Timeout,
        Err(Error::Limit(LimitError::StateCap(_))) => Status::Resource,
        Err(e) => return Err(e),
    };
    Ok(HarnessRow::failed(inst, pipeline, status))
}

/// Runs every pipeline on every instance, in parallel when enabled. Rows
/// come back ordered by instance, then by the order of `pipelines`, and are
/// written to `csv_path` when given.
pub fn run_harness(
    instances: &[BenchInstance],
    pipelines: &[Pipeline],
    cfg: &HarnessConfig,
    csv_path: Option<&Path>,
) -> Result<Vec<HarnessRow>> {
    let cells: Vec<(&BenchInstance, Pipeline)> =
        instances.iter().flat_map(|i| pipelines.iter().map(move |&p| (i, p))).collect();
    let rows = par::map(&cells, |&(inst, p)| run_cell(inst, p, cfg)).into_iter().collect::<Result<Vec<_>>>()?;
    if let Some(path) = csv_path {
        write_csv(&rows, path)?;
    }
    Ok(rows)
}

pub fn write_csv(rows: &[HarnessRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{random_corpus, BenchInstance};

    #[test]
    fn cross_product_rows() {
        let inst = random_corpus(2, 0, 2, 10).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let rows = run_harness(&inst, &Pipeline::ALL, &HarnessConfig::default(), Some(&path)).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].pipeline, Pipeline::Hopcroft);
        assert_eq!(rows[3].instance, inst[1].id);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), 7);
        assert!(rows.iter().all(|r| r.status == Status::Ok));
        assert!(rows.windows(3).step_by(3).all(|w| w[0].realizable == w[1].realizable && w[1].realizable == w[2].realizable));
    }

    #[test]
    fn timeout_leaves_numbers_empty() {
        let inst = [BenchInstance::kv(2).unwrap()];
        let cfg = HarnessConfig { timeout: Some(Duration::ZERO), ..Default::default() };
        let rows = run_harness(&inst, &[Pipeline::Hopcroft], &cfg, None).unwrap();
        assert_eq!(rows[0].status, Status::Timeout);
        assert_eq!(rows[0].record()[3..9].iter().filter(|s| s.is_empty()).count(), 6);
        assert_eq!(rows[0].realizable, Realizable::NotApplicable);
    }

    #[test]
    fn state_cap_is_resource() {
        let inst = [BenchInstance::kv(2).unwrap()];
        let cfg = HarnessConfig { state_cap: 2, ..Default::default() };
        let rows = run_harness(&inst, &[Pipeline::Hopcroft], &cfg, None).unwrap();
        assert_eq!(rows[0].status, Status::Resource);
    }

    #[test]
    fn rerun_is_identical_outside_timings() {
        let inst = random_corpus(3, 10, 3, 10).unwrap();
        let strip = |rows: Vec<HarnessRow>| -> Vec<Vec<String>> {
            rows.iter()
                .map(|r| r.record().iter().enumerate().filter(|(i, _)| !(5..=7).contains(i)).map(|(_, s)| s.clone()).collect())
                .collect()
        };
        let a = run_harness(&inst, &Pipeline::ALL, &HarnessConfig::default(), None).unwrap();
        let b = run_harness(&inst, &Pipeline::ALL, &HarnessConfig::default(), None).unwrap();
        assert_eq!(strip(a), strip(b));
    }
}
