use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand};
use sfc_bench::{replay, replay_workload, run_dynamic, run_static, selftest, BenchConfig, MonotonicClock, ReplayOptions, Structure};
use sfc_index::datagen::{gen_points, gen_queries, DatasetSpec, Distribution, QuerySpec, PRNG_ALGORITHM};
use sfc_index::io::{write_points, write_queries, write_results, write_workload, PointFormat, ReadOptions, ResultRecord, Workload};
use sfc_index::{Domain, Metric};

#[derive(Parser)]
#[command(name = "sfc-bench", version, about = "Space-filling-curve distance query benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic point file and optionally a query file.
    Gen(GenArgs),
    /// Construction time and query latency of a static structure.
    BenchStatic(BenchArgs),
    /// Insertion time and query latency of a dynamic structure.
    BenchDynamic(BenchArgs),
    /// Build once and run every query of a recorded workload.
    Replay(ReplayArgs),
    /// Check every structure against brute force on small random inputs.
    Selftest(SelftestArgs),
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Point distribution: uniform, gaussian, skewed, clustered.
    #[arg(long, default_value = "uniform")]
    dist: Distribution,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    /// Bits per coordinate (Δ = 2^omega).
    #[arg(long, default_value_t = 16, value_parser = clap::builder::PossibleValuesParser::new(["8", "16", "32"]).map(|s| s.parse::<u32>().unwrap()))]
    omega: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Clone)]
struct QueryArgs {
    /// Query centre distribution.
    #[arg(long, default_value = "uniform")]
    query_dist: Distribution,
    /// Query diameter relative to Δ.
    #[arg(long, default_value_t = 0.01)]
    rho: f64,
    /// Length of the query stream (cycled during throughput runs).
    #[arg(long, default_value_t = 10_000)]
    query_count: usize,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    query: QueryArgs,
    /// Output point file.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Write the point file in the binary format.
    #[arg(long)]
    binary: bool,
    /// Output query file (`qx,qy,r` lines).
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Output combined workload file.
    #[arg(long)]
    workload: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "curve-z")]
    structure: Structure,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, default_value = "linf")]
    metric: Metric,
    #[arg(long, default_value_t = 3)]
    runs: u32,
    #[arg(long, default_value_t = sfc_bench::DEFAULT_BATCH)]
    batch: usize,
    /// Override the min(n/10^6, 10) second throughput limit.
    #[arg(long)]
    limit_seconds: Option<f64>,
    /// Append result rows to this CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sort with all cores during construction.
    #[arg(long)]
    parallel: bool,
    /// Store only the points; codes are recomputed during queries.
    #[arg(long)]
    no_rank: bool,
    /// Interleave deletions (not supported).
    #[arg(long)]
    deletions: bool,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long, default_value = "curve-z")]
    structure: Structure,
    #[arg(long, requires = "queries", conflicts_with = "workload")]
    points: Option<PathBuf>,
    #[arg(long)]
    queries: Option<PathBuf>,
    #[arg(long)]
    workload: Option<PathBuf>,
    #[arg(long, default_value = "linf")]
    metric: Metric,
    /// Input coordinates are in [1, 2^omega].
    #[arg(long)]
    one_based: bool,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    no_rank: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    queries: usize,
}

fn dataset_spec(d: &DataArgs) -> anyhow::Result<DatasetSpec> {
    Ok(DatasetSpec {
        distribution: d.dist,
        n: d.n,
        domain: Domain::new(d.omega)?,
        seed: d.seed,
    })
}

/// Query streams use the next seed so they differ from the data.
fn query_spec(d: &DataArgs, q: &QueryArgs) -> anyhow::Result<QuerySpec> {
    Ok(QuerySpec {
        centre_distribution: q.query_dist,
        rho: q.rho,
        count: q.query_count,
        seed: d.seed.wrapping_add(1),
        domain: Domain::new(d.omega)?,
    })
}

fn print_records(records: &[ResultRecord]) {
    println!("{:<12} {:<10} {:>10} {:>7} {:>14} {:>10} {:>4} {:>6}", "structure", "phase", "n", "metric", "ms", "queries", "run", "median");
    for r in records {
        println!(
            "{:<12} {:<10} {:>10} {:>7} {:>14.6} {:>10} {:>4} {:>6}",
            r.structure,
            format!("{:?}", r.phase).to_lowercase(),
            r.n,
            r.metric,
            r.ms,
            r.queries,
            r.run,
            r.is_median
        );
    }
}

fn emit(records: &[ResultRecord], out: Option<&PathBuf>) -> anyhow::Result<()> {
    print_records(records);
    if let Some(path) = out {
        write_results(path, records).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn bench(args: &BenchArgs, dynamic: bool) -> anyhow::Result<()> {
    let mut config = BenchConfig::new(args.structure, dataset_spec(&args.data)?, query_spec(&args.data, &args.query)?);
    config.metric = args.metric;
    config.runs = args.runs;
    config.batch = args.batch;
    config.parallel_sort = args.parallel;
    config.no_rank = args.no_rank;
    config.deletions = args.deletions;
    if let Some(s) = args.limit_seconds {
        if !(s >= 0.0 && s.is_finite()) {
            bail!("--limit-seconds must be a non-negative number");
        }
        config.limit = Some(Duration::from_secs_f64(s));
    }
    eprintln!("prng: {PRNG_ALGORITHM}; time limit {:?}", config.time_limit());
    let clock = MonotonicClock::new();
    let records = if dynamic {
        run_dynamic(&config, &clock)?
    } else {
        run_static(&config, &clock)?
    };
    emit(&records, args.out.as_ref())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Gen(args) => {
            let spec = dataset_spec(&args.data)?;
            let points = gen_points(&spec)?;
            let queries = if args.queries.is_some() || args.workload.is_some() {
                gen_queries(&query_spec(&args.data, &args.query)?)?
            } else {
                Vec::new()
            };
            if args.points.is_none() && args.queries.is_none() && args.workload.is_none() {
                bail!("nothing to write: pass --points, --queries or --workload");
            }
            if let Some(path) = &args.points {
                let format = if args.binary { PointFormat::Binary } else { PointFormat::Text };
                write_points(path, &spec.domain, &points, format)?;
                eprintln!("wrote {} points to {}", points.len(), path.display());
            }
            if let Some(path) = &args.queries {
                write_queries(path, &spec.domain, &queries)?;
                eprintln!("wrote {} queries to {}", queries.len(), path.display());
            }
            if let Some(path) = &args.workload {
                write_workload(
                    path,
                    &Workload {
                        domain: spec.domain,
                        points,
                        queries,
                    },
                )?;
                eprintln!("wrote workload to {}", path.display());
            }
            Ok(true)
        }
        Command::BenchStatic(args) => bench(&args, false).map(|_| true),
        Command::BenchDynamic(args) => bench(&args, true).map(|_| true),
        Command::Replay(args) => {
            let opts = ReplayOptions {
                structure: args.structure,
                metric: args.metric,
                read: ReadOptions {
                    one_based: args.one_based,
                },
                parallel_sort: args.parallel,
                no_rank: args.no_rank,
            };
            let clock = MonotonicClock::new();
            let outcome = match (&args.points, &args.queries, &args.workload) {
                (Some(p), Some(q), None) => replay(p, q, &opts, &clock)?,
                (None, None, Some(w)) => replay_workload(w, &opts, &clock)?,
                _ => bail!("pass either --points and --queries, or --workload"),
            };
            let total: usize = outcome.result_counts.iter().sum();
            eprintln!("{} queries reported {total} points", outcome.result_counts.len());
            emit(&[outcome.record], args.out.as_ref())?;
            Ok(true)
        }
        Command::Selftest(args) => {
            let outcomes = selftest::run(args.seed, args.n, args.queries)?;
            for o in &outcomes {
                println!("{} {}", if o.passed { "PASS" } else { "FAIL" }, o.name);
            }
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
