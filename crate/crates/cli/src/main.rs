use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use diam_cli::bench::{threads_from_env, write_csv, write_summary};
use diam_cli::{
    generate, read_points, run_bench, write_points, BenchCell, BenchOptions, CliError,
    Distribution, GeneratorSpec,
};
use diam_core::{run, Algorithm};
use serde_json::json;

#[derive(Parser)]
#[command(name = "diam", version, about = "Approximate diameter of point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random point set as CSV.
    Gen {
        #[arg(long)]
        dist: Distribution,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of clusters (clusters only).
        #[arg(long)]
        clusters: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the diameter of a CSV point file.
    Diam {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a benchmark matrix and write a CSV report plus a JSON summary.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        algos: Vec<Algorithm>,
        #[arg(long = "eps-list", value_delimiter = ',', default_value = "0.1")]
        eps_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "cube")]
        dists: Vec<Distribution>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Base seed; trial t uses seed + t.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        clusters: Option<usize>,
        #[arg(long)]
        no_oracle: bool,
        #[arg(long)]
        report: PathBuf,
        /// Defaults to the report path with a `.summary.json` extension.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Gen {
            dist,
            n,
            d,
            seed,
            clusters,
            out,
        } => {
            let spec = GeneratorSpec {
                cluster_count: clusters,
                ..GeneratorSpec::new(dist, n, d, seed)
            };
            write_points(&generate(&spec)?, &out)?;
        }
        Command::Diam {
            algo,
            eps,
            input,
            json,
        } => {
            let s = read_points(&input)?;
            let r = run(algo, &s, eps)?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let written = if json {
                let doc = json!({
                    "algorithm": algo.as_str(),
                    "epsilon": r.epsilon,
                    "n": s.len(),
                    "d": s.dim(),
                    "value": r.value,
                    "witness": r.witness.map(|(i, j)| [i, j]),
                    "guarantee": r.guarantee.as_str(),
                });
                writeln!(out, "{doc}")
            } else {
                match r.witness {
                    Some((i, j)) => writeln!(out, "{:?} {i} {j}", r.value),
                    None => writeln!(out, "{:?}", r.value),
                }
            };
            written.map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        }
        Command::Bench {
            algos,
            eps_list,
            sizes,
            dims,
            dists,
            trials,
            seed,
            clusters,
            no_oracle,
            report,
            summary,
        } => {
            let mut cells = Vec::new();
            for &distribution in &dists {
                for &d in &dims {
                    for &n in &sizes {
                        let spec = GeneratorSpec {
                            cluster_count: clusters
                                .filter(|_| distribution == Distribution::Clusters),
                            ..GeneratorSpec::new(distribution, n, d, seed)
                        };
                        for &algorithm in &algos {
                            let eps: &[f64] = if algorithm.uses_epsilon() {
                                &eps_list
                            } else {
                                &eps_list[..1]
                            };
                            for &epsilon in eps {
                                cells.push(BenchCell {
                                    spec,
                                    algorithm,
                                    epsilon,
                                });
                            }
                        }
                    }
                }
            }
            let opts = BenchOptions {
                trials,
                with_oracle: !no_oracle,
                threads: threads_from_env(),
                ..BenchOptions::default()
            };
            let output = run_bench(&cells, &opts)?;
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            let io_err = |path: &Path| {
                let path = path.to_path_buf();
                move |source| CliError::Io { path, source }
            };
            let mut out = create(&report)?;
            write_csv(&output.records, &mut out)?;
            out.flush().map_err(io_err(&report))?;

            let summary_path = summary.unwrap_or_else(|| report.with_extension("summary.json"));
            let mut out = create(&summary_path)?;
            write_summary(&output.summary(), &mut out)?;
            out.flush().map_err(io_err(&summary_path))?;

            let violations = output.violations();
            if violations > 0 {
                for r in output.records.iter().filter(|r| r.violation) {
                    eprintln!(
                        "violation: {} {} eps={} seed={} value={:?} oracle={:?}",
                        r.instance, r.algo, r.eps, r.seed, r.value, r.oracle
                    );
                }
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
