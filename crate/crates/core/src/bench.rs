//! Matching benchmark: every fixture on both engines, timed per query.
//!
//! Each (engine, fixture) cell runs on its own worker thread: 3 discarded
//! warmup queries, then `reps` timed ones on a monotonic clock. The trie is
//! built once per cell, so the warmup pays for forcing and the timed queries
//! measure memoized lookups. A cell that exceeds the timeout is reported as
//! `TIMEOUT`; its worker is abandoned, not killed.

use std::fmt;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::algebra::NatCount;
use crate::par::{self, Exec};
use crate::regexp::{
    bench_fixtures, canonical_input, index_word, reinterpret, Fixture, LangError, RegExp,
};
use crate::trie::{forced_cells, Trie};

pub const WARMUP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Engine {
    RegExp,
    Trie,
}

impl Engine {
    pub const ALL: [Engine; 2] = [Engine::RegExp, Engine::Trie];

    pub fn name(self) -> &'static str {
        match self {
            Engine::RegExp => "regexp",
            Engine::Trie => "trie",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("engines disagree on {fixture}: regexp {regexp}, trie {trie}")]
    Divergence {
        fixture: String,
        regexp: String,
        trie: String,
    },
    #[error("{engine} on {fixture}: {source}")]
    Lang {
        engine: Engine,
        fixture: String,
        #[source]
        source: LangError,
    },
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Fixture names; empty means all.
    pub fixtures: Vec<String>,
    pub length: usize,
    pub reps: usize,
    pub timeout: Duration,
    /// Parallelism across cells. Timed queries themselves are never split.
    pub exec: Exec,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            fixtures: Vec::new(),
            length: 100,
            reps: 100,
            timeout: Duration::from_secs(60),
            exec: Exec::Sequential,
        }
    }
}

/// Timing summary of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub min: Duration,
    pub median: Duration,
    pub mean: Duration,
}

impl Timing {
    /// Statistics of a nonempty sample.
    pub fn from_samples(samples: &mut [Duration]) -> Self {
        samples.sort();
        let n = samples.len();
        let median = if n % 2 == 1 {
            samples[n / 2]
        } else {
            (samples[n / 2 - 1] + samples[n / 2]) / 2
        };
        let total: Duration = samples.iter().sum();
        Timing {
            min: samples[0],
            median,
            mean: total / n as u32,
        }
    }
}

/// One (engine, fixture) cell.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub engine: Engine,
    pub fixture: String,
    pub length: usize,
    pub reps: usize,
    /// `None` when the cell timed out.
    pub timing: Option<Timing>,
    pub weight: Option<NatCount>,
    /// Trie cells forced by the first (warmup) query.
    pub cells_first: Option<u64>,
    /// Trie cells forced by all later queries together.
    pub cells_repeat: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub const TSV_HEADER: &str =
    "engine\tfixture\tlength\treps\tmin_us\tmedian_us\tmean_us\tweight\tcells_first\tcells_repeat";

fn micros(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e6)
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

impl BenchReport {
    pub fn row(&self, engine: Engine, fixture: &str) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.engine == engine && r.fixture == fixture)
    }

    pub fn median(&self, engine: Engine, fixture: &str) -> Option<Duration> {
        self.row(engine, fixture)?.timing.map(|t| t.median)
    }

    /// Header plus one line per cell. Timed-out cells print `TIMEOUT` in
    /// every timing and weight column.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("{TSV_HEADER}\n");
        for r in &self.rows {
            let (min, med, mean, weight) = match r.timing {
                Some(t) => (
                    micros(t.min),
                    micros(t.median),
                    micros(t.mean),
                    opt(&r.weight),
                ),
                None => {
                    let t = "TIMEOUT".to_string();
                    (t.clone(), t.clone(), t.clone(), t)
                }
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{min}\t{med}\t{mean}\t{weight}\t{}\t{}\n",
                r.engine,
                r.fixture,
                r.length,
                r.reps,
                opt(&r.cells_first),
                opt(&r.cells_repeat)
            ));
        }
        out
    }
}

struct CellResult {
    samples: Vec<Duration>,
    weight: NatCount,
    cells_first: Option<u64>,
    cells_repeat: Option<u64>,
}

fn time_queries(
    reps: usize,
    mut query: impl FnMut() -> Result<NatCount, LangError>,
) -> Result<(NatCount, Vec<Duration>), LangError> {
    let mut weight = query()?;
    for _ in 1..WARMUP {
        weight = query()?;
    }
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        let w = std::hint::black_box(query()?);
        samples.push(start.elapsed());
        weight = w;
    }
    Ok((weight, samples))
}

fn run_cell(
    engine: Engine,
    expr: RegExp<NatCount>,
    input: Vec<char>,
    reps: usize,
) -> Result<CellResult, LangError> {
    match engine {
        Engine::RegExp => {
            let (weight, samples) = time_queries(reps, || index_word(&expr, &input))?;
            Ok(CellResult {
                samples,
                weight,
                cells_first: None,
                cells_repeat: None,
            })
        }
        Engine::Trie => {
            let trie: Trie<NatCount> = reinterpret(&expr)?;
            let start = forced_cells();
            let first = trie.index(&input)?;
            let after_first = forced_cells();
            let (weight, samples) = time_queries(reps, || trie.index(&input))?;
            debug_assert_eq!(first, weight);
            Ok(CellResult {
                samples,
                weight,
                cells_first: Some(after_first - start),
                cells_repeat: Some(forced_cells() - after_first),
            })
        }
    }
}

fn bench_cell(
    engine: Engine,
    fixture: &Fixture<NatCount>,
    cfg: &BenchConfig,
) -> Result<BenchRow, BenchError> {
    let input: Vec<char> = canonical_input(fixture.name, cfg.length)
        .ok_or_else(|| BenchError::UnknownFixture(fixture.name.to_string()))?
        .chars()
        .collect();
    let (tx, rx) = mpsc::channel();
    let expr = fixture.expr.clone();
    let reps = cfg.reps.max(1);
    thread::spawn(move || {
        let _ = tx.send(run_cell(engine, expr, input, reps));
    });
    let mut row = BenchRow {
        engine,
        fixture: fixture.name.to_string(),
        length: cfg.length,
        reps,
        timing: None,
        weight: None,
        cells_first: None,
        cells_repeat: None,
    };
    match rx.recv_timeout(cfg.timeout) {
        Ok(Ok(mut cell)) => {
            row.timing = Some(Timing::from_samples(&mut cell.samples));
            row.weight = Some(cell.weight);
            row.cells_first = cell.cells_first;
            row.cells_repeat = cell.cells_repeat;
            Ok(row)
        }
        Ok(Err(source)) => Err(BenchError::Lang {
            engine,
            fixture: fixture.name.to_string(),
            source,
        }),
        Err(_) => Ok(row),
    }
}

/// Run the benchmark and enforce cross-engine weight agreement.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    let all = bench_fixtures::<NatCount>();
    let chosen: Vec<Fixture<NatCount>> = if cfg.fixtures.is_empty() {
        all
    } else {
        let mut out = Vec::new();
        for name in &cfg.fixtures {
            let f = all
                .iter()
                .find(|f| f.name == name.as_str())
                .ok_or_else(|| BenchError::UnknownFixture(name.clone()))?;
            out.push(Fixture {
                name: f.name,
                expr: f.expr.clone(),
            });
        }
        out
    };
    let cells: Vec<(Engine, usize)> = (0..chosen.len())
        .flat_map(|i| Engine::ALL.map(|e| (e, i)))
        .collect();
    let rows = par::map_slice(cfg.exec, &cells, |(e, i)| bench_cell(*e, &chosen[*i], cfg));
    let rows: Vec<BenchRow> = rows.into_iter().collect::<Result<_, _>>()?;
    for f in &chosen {
        let w = |e| {
            rows.iter()
                .find(|r| r.engine == e && r.fixture == f.name)
                .and_then(|r| r.weight.clone())
        };
        if let (Some(a), Some(b)) = (w(Engine::RegExp), w(Engine::Trie)) {
            if a != b {
                return Err(BenchError::Divergence {
                    fixture: f.name.to_string(),
                    regexp: a.to_string(),
                    trie: b.to_string(),
                });
            }
        }
    }
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_reports_expected_weights() {
        let cfg = BenchConfig {
            length: 20,
            reps: 3,
            ..BenchConfig::default()
        };
        let report = run_bench(&cfg).unwrap();
        assert_eq!(report.rows.len(), 16);
        for r in &report.rows {
            let want = if r.fixture == "star_a_star_a" { 21 } else { 1 };
            assert_eq!(r.weight, Some(NatCount::new(want)), "{}", r.fixture);
        }
        let trie = report.row(Engine::Trie, "fishy").unwrap();
        assert_eq!(trie.cells_repeat, Some(0));
        assert!(trie.cells_first.unwrap() > 0);
        let tsv = report.to_tsv();
        assert!(tsv.starts_with(TSV_HEADER));
        assert_eq!(tsv.lines().count(), 17);
    }

    #[test]
    fn empty_input_weighs_the_empty_word() {
        let cfg = BenchConfig {
            fixtures: vec!["star_a_b_star_a".into(), "dyck".into()],
            length: 0,
            reps: 1,
            exec: Exec::Parallel,
            ..BenchConfig::default()
        };
        let report = run_bench(&cfg).unwrap();
        assert_eq!(
            report.row(Engine::Trie, "star_a_b_star_a").unwrap().weight,
            Some(NatCount::new(0))
        );
        assert_eq!(
            report.row(Engine::RegExp, "dyck").unwrap().weight,
            Some(NatCount::new(1))
        );
    }

    #[test]
    fn timeout_is_reported() {
        let cfg = BenchConfig {
            fixtures: vec!["star_a_star_a".into()],
            length: 400,
            reps: 100_000,
            timeout: Duration::from_millis(1),
            ..BenchConfig::default()
        };
        let report = run_bench(&cfg).unwrap();
        let row = report.row(Engine::RegExp, "star_a_star_a").unwrap();
        assert!(row.timing.is_none());
        assert!(report.to_tsv().contains("TIMEOUT"));
    }

    #[test]
    fn unknown_fixture_is_an_error() {
        let cfg = BenchConfig {
            fixtures: vec!["nope".into()],
            ..BenchConfig::default()
        };
        assert!(matches!(
            run_bench(&cfg),
            Err(BenchError::UnknownFixture(_))
        ));
    }

    #[test]
    fn timing_statistics() {
        let ms = Duration::from_millis;
        let t = Timing::from_samples(&mut [ms(4), ms(1), ms(3), ms(2)]);
        assert_eq!(
            (t.min, t.median, t.mean),
            (
                ms(1),
                Duration::from_micros(2500),
                Duration::from_micros(2500)
            )
        );
    }
}
