//! Benchmark harness: runs a matrix of (instance, algorithm, eps) cells over
//! several seeded trials and reports values, oracle ratios and timings.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use diam_core::{exact_diameter, run, satisfies_guarantee, Algorithm};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::gen::{generate, GeneratorSpec};

/// Largest `n` for which the quadratic oracle runs by default.
pub const DEFAULT_ORACLE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchCell {
    /// Instance with the base seed; trial `t` uses `seed + t`.
    pub spec: GeneratorSpec,
    pub algorithm: Algorithm,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub trials: usize,
    pub with_oracle: bool,
    pub oracle_limit: usize,
    /// Worker count; `None` lets rayon decide.
    pub threads: Option<usize>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            trials: 1,
            with_oracle: true,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub algo: &'static str,
    pub eps: f64,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub value: f64,
    pub oracle: Option<f64>,
    pub ratio: Option<f64>,
    pub wall_time_ns: u128,
    #[serde(skip)]
    pub witness: Option<(usize, usize)>,
    /// Set when the oracle shows the result outside its contract.
    #[serde(skip)]
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub instance: String,
    pub algo: &'static str,
    pub eps: f64,
    pub trials: usize,
    pub min_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub cells: Vec<CellSummary>,
    pub violations: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    /// Sorted by cell, then trial.
    pub records: Vec<BenchRecord>,
    pub warnings: Vec<String>,
}

impl BenchOutput {
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|r| r.violation).count()
    }

    pub fn summary(&self) -> BenchSummary {
        let mut groups: BTreeMap<(String, &'static str, u64), Vec<&BenchRecord>> = BTreeMap::new();
        for r in &self.records {
            groups
                .entry((r.instance.clone(), r.algo, r.eps.to_bits()))
                .or_default()
                .push(r);
        }
        let cells = groups
            .into_values()
            .map(|rs| {
                let mut ratios: Vec<f64> = rs.iter().filter_map(|r| r.ratio).collect();
                ratios.sort_by(f64::total_cmp);
                CellSummary {
                    instance: rs[0].instance.clone(),
                    algo: rs[0].algo,
                    eps: rs[0].eps,
                    trials: rs.len(),
                    min_ratio: ratios.first().copied(),
                    median_ratio: median(&ratios),
                    max_ratio: ratios.last().copied(),
                    violations: rs.iter().filter(|r| r.violation).count(),
                }
            })
            .collect();
        BenchSummary {
            cells,
            violations: self.violations(),
            warnings: self.warnings.clone(),
        }
    }
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

struct Job {
    cell: usize,
    trial: usize,
}

fn run_job(cell: &BenchCell, trial: usize, oracle: bool) -> Result<BenchRecord, CliError> {
    let spec = cell
        .spec
        .with_seed(cell.spec.seed.wrapping_add(trial as u64));
    let s = generate(&spec)?;
    let start = Instant::now();
    let r = run(cell.algorithm, &s, cell.epsilon)?;
    let wall_time_ns = start.elapsed().as_nanos();
    let oracle = if oracle {
        Some(exact_diameter(&s)?.value)
    } else {
        None
    };
    let ratio = oracle.map(|o| if o > 0.0 { r.value / o } else { 1.0 });
    let violation = oracle
        .is_some_and(|o| !satisfies_guarantee(cell.algorithm, cell.epsilon, spec.d, r.value, o));
    Ok(BenchRecord {
        instance: cell.spec.label(),
        algo: cell.algorithm.as_str(),
        eps: if cell.algorithm.uses_epsilon() {
            cell.epsilon
        } else {
            0.0
        },
        n: spec.n,
        d: spec.d,
        seed: spec.seed,
        value: r.value,
        oracle,
        ratio,
        wall_time_ns,
        witness: r.witness,
        violation,
    })
}

pub fn run_bench(cells: &[BenchCell], opts: &BenchOptions) -> Result<BenchOutput, CliError> {
    if opts.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    for c in cells {
        c.spec.validate()?;
        if c.algorithm.uses_epsilon() && !(c.epsilon > 0.0 && c.epsilon <= 1.0) {
            return Err(diam_core::Error::InvalidEpsilon(c.epsilon).into());
        }
    }
    let mut warnings = Vec::new();
    let oracle: Vec<bool> = cells
        .iter()
        .map(|c| {
            let ok = c.spec.n <= opts.oracle_limit;
            if opts.with_oracle && !ok {
                warnings.push(format!(
                    "oracle skipped for {} {}: n = {} exceeds {}",
                    c.spec.label(),
                    c.algorithm,
                    c.spec.n,
                    opts.oracle_limit
                ));
            }
            opts.with_oracle && ok
        })
        .collect();
    let jobs: Vec<Job> = (0..cells.len())
        .flat_map(|cell| (0..opts.trials).map(move |trial| Job { cell, trial }))
        .collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = opts.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let records = pool.install(|| {
        jobs.par_iter()
            .map(|j| run_job(&cells[j.cell], j.trial, oracle[j.cell]))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(BenchOutput { records, warnings })
}

/// `DIAM_THREADS` as a worker cap, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("DIAM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t| t > 0)
}

pub const CSV_COLUMNS: [&str; 10] = [
    "instance",
    "algo",
    "eps",
    "n",
    "d",
    "seed",
    "value",
    "oracle",
    "ratio",
    "wall_time_ns",
];

pub fn write_csv(records: &[BenchRecord], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:?}"));
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.algo.to_string(),
            format!("{:?}", r.eps),
            r.n.to_string(),
            r.d.to_string(),
            r.seed.to_string(),
            format!("{:?}", r.value),
            opt(r.oracle),
            opt(r.ratio),
            r.wall_time_ns.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_summary(summary: &BenchSummary, out: impl Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(out, summary)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::Distribution;

    fn cell(algorithm: Algorithm, eps: f64) -> BenchCell {
        BenchCell {
            spec: GeneratorSpec::new(Distribution::Cube, 40, 3, 5),
            algorithm,
            epsilon: eps,
        }
    }

    #[test]
    fn three_trials_in_range() {
        let opts = BenchOptions {
            trials: 3,
            ..BenchOptions::default()
        };
        let out = run_bench(&[cell(Algorithm::Algorithm1, 0.25)], &opts).unwrap();
        assert_eq!(out.records.len(), 3);
        let seeds: Vec<u64> = out.records.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![5, 6, 7]);
        for r in &out.records {
            let ratio = r.ratio.unwrap();
            assert!((1.0..=1.25).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn no_oracle_no_ratio() {
        let opts = BenchOptions {
            with_oracle: false,
            ..BenchOptions::default()
        };
        let out = run_bench(&[cell(Algorithm::Chan, 0.5)], &opts).unwrap();
        assert_eq!(out.records.len(), 1);
        assert!(out.records[0].oracle.is_none() && out.records[0].ratio.is_none());
    }

    #[test]
    fn exact_ratio_is_one() {
        let out = run_bench(&[cell(Algorithm::Exact, 0.5)], &BenchOptions::default()).unwrap();
        assert_eq!(out.records[0].ratio, Some(1.0));
        assert_eq!(out.records[0].eps, 0.0);
        assert_eq!(out.violations(), 0);
    }

    #[test]
    fn oracle_skipped_with_warning() {
        let opts = BenchOptions {
            oracle_limit: 10,
            ..BenchOptions::default()
        };
        let out = run_bench(&[cell(Algorithm::Agarwal, 0.5)], &opts).unwrap();
        assert!(out.records[0].oracle.is_none());
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn summary_aggregates() {
        let opts = BenchOptions {
            trials: 4,
            ..BenchOptions::default()
        };
        let cells = [
            cell(Algorithm::TwoApprox, 1.0),
            cell(Algorithm::Algorithm2, 0.5),
        ];
        let out = run_bench(&cells, &opts).unwrap();
        let s = out.summary();
        assert_eq!(s.cells.len(), 2);
        for c in &s.cells {
            assert_eq!(c.trials, 4);
            assert!(c.min_ratio <= c.median_ratio && c.median_ratio <= c.max_ratio);
        }
    }

    #[test]
    fn csv_columns_fixed() {
        let out = run_bench(&[cell(Algorithm::Exact, 0.5)], &BenchOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&out.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("instance,algo,eps,n,d,seed,value,oracle,ratio,wall_time_ns\n"));
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let opts = BenchOptions {
            trials: 0,
            ..BenchOptions::default()
        };
        assert!(run_bench(&[cell(Algorithm::Exact, 0.5)], &opts).is_err());
        assert!(run_bench(&[cell(Algorithm::Chan, 1.5)], &BenchOptions::default()).is_err());
    }
}
