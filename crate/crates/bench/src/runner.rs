//! Experiment protocols. Timed regions cover only index construction,
//! insertion and querying; data generation, file I/O and hashing happen
//! outside them.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use sha2::{Digest, Sha256};
use sfc_index::datagen::{gen_points, gen_queries, DatasetSpec, QuerySpec};
use sfc_index::io::{read_points, read_queries, read_workload, Phase, ReadOptions, ResultRecord};
use sfc_index::{
    brute_force_query, BruteForce, BuildOptions, CurveKind, DistanceQuery, Domain, LogIndex, Metric, Point, StaticIndex,
};

use crate::clock::Clock;
use crate::throughput::{throughput, time_limit, DEFAULT_BATCH};
use crate::{BenchError, Result};

/// Largest dataset whose dynamic runs are spot-checked against the oracle.
const SPOT_CHECK_MAX_N: usize = 10_000;
const SPOT_CHECK_QUERIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    CurveZ,
    CurveH,
    CurveZDyn,
    CurveHDyn,
    Oracle,
}

impl Structure {
    pub const ALL: [Structure; 5] = [
        Structure::CurveZ,
        Structure::CurveH,
        Structure::CurveZDyn,
        Structure::CurveHDyn,
        Structure::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Structure::CurveZ => "curve-z",
            Structure::CurveH => "curve-h",
            Structure::CurveZDyn => "curve-z-dyn",
            Structure::CurveHDyn => "curve-h-dyn",
            Structure::Oracle => "oracle",
        }
    }

    pub fn curve(self) -> Option<CurveKind> {
        match self {
            Structure::CurveZ | Structure::CurveZDyn => Some(CurveKind::Z),
            Structure::CurveH | Structure::CurveHDyn => Some(CurveKind::Hilbert),
            Structure::Oracle => None,
        }
    }

    pub fn is_dynamic(self) -> bool {
        matches!(self, Structure::CurveZDyn | Structure::CurveHDyn)
    }

    fn curve_name(self) -> &'static str {
        self.curve().map_or("none", CurveKind::name)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Structure {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Structure::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown structure `{s}`")))
    }
}

/// One synthetic configuration: structure, dataset, query stream and timing rules.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub structure: Structure,
    pub dataset: DatasetSpec,
    pub queries: QuerySpec,
    pub metric: Metric,
    pub runs: u32,
    /// Overrides the `min(n / 10^6, 10)` second rule.
    pub limit: Option<Duration>,
    pub batch: usize,
    pub parallel_sort: bool,
    pub no_rank: bool,
    /// Requests delete operations, which no structure supports.
    pub deletions: bool,
}

impl BenchConfig {
    pub fn new(structure: Structure, dataset: DatasetSpec, queries: QuerySpec) -> Self {
        Self {
            structure,
            dataset,
            queries,
            metric: Metric::Linf,
            runs: 3,
            limit: None,
            batch: DEFAULT_BATCH,
            parallel_sort: false,
            no_rank: false,
            deletions: false,
        }
    }

    pub fn time_limit(&self) -> Duration {
        self.limit.unwrap_or_else(|| time_limit(self.dataset.n))
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(BenchError::Config("runs must be at least 1".into()));
        }
        if self.batch == 0 {
            return Err(BenchError::Config("batch size must be positive".into()));
        }
        if self.dataset.domain != self.queries.domain {
            return Err(BenchError::Config("dataset and query domains differ".into()));
        }
        if self.deletions {
            return Err(BenchError::Unsupported("deletions are not implemented".into()));
        }
        Ok(())
    }

    fn build_options(&self) -> BuildOptions {
        BuildOptions {
            store_codes: !self.no_rank,
            parallel_sort: self.parallel_sort,
        }
    }

    fn record(&self, dataset: &str, phase: Phase, ms: f64, queries: u64, run: u32) -> ResultRecord {
        ResultRecord {
            structure: self.structure.name().into(),
            dataset: dataset.into(),
            n: self.dataset.n,
            curve: self.structure.curve_name().into(),
            rho: self.queries.rho,
            metric: self.metric.name().into(),
            phase,
            ms,
            queries,
            run,
            is_median: false,
        }
    }
}

type DynIndex = Box<dyn DistanceQuery<2> + Sync>;

fn build_static(structure: Structure, points: &[Point<2>], domain: Domain<2>, opts: BuildOptions) -> Result<DynIndex> {
    Ok(match structure.curve() {
        Some(curve) if !structure.is_dynamic() => Box::new(StaticIndex::<u64, 2>::build(points, curve, domain, opts)?),
        None => Box::new(BruteForce::new(points.to_vec())),
        Some(_) => {
            return Err(BenchError::Config(format!(
                "{structure} is a dynamic structure; use the dynamic protocol"
            )))
        }
    })
}

fn build_dynamic(structure: Structure, points: &[Point<2>], domain: Domain<2>) -> Result<DynIndex> {
    match structure.curve() {
        Some(curve) if structure.is_dynamic() => {
            let mut idx = LogIndex::<u64, 2>::new(curve, domain)?;
            for &p in points {
                idx.insert(p)?;
            }
            Ok(Box::new(idx))
        }
        None => {
            let mut idx = BruteForce::default();
            for (i, &p) in points.iter().enumerate() {
                domain.check_point(i, &p)?;
                idx.push(p);
            }
            Ok(Box::new(idx))
        }
        Some(_) => Err(BenchError::Config(format!(
            "{structure} is a static structure; use curve-z-dyn or curve-h-dyn"
        ))),
    }
}

/// First 8 bytes of SHA-256 over the little-endian coordinates, in hex.
pub fn dataset_hash(points: &[Point<2>]) -> String {
    let mut h = Sha256::new();
    for p in points {
        h.update(p.x().to_le_bytes());
        h.update(p.y().to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn dataset_id(spec: &DatasetSpec, points: &[Point<2>]) -> String {
    format!("{}-s{}-{}", spec.distribution, spec.seed, dataset_hash(points))
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Arithmetic median; the mean of the two middle values for even counts.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Adds one median row per phase present in `records`.
fn push_medians(records: &mut Vec<ResultRecord>) {
    let phases: Vec<Phase> = records.iter().fold(Vec::new(), |mut acc, r| {
        if !acc.contains(&r.phase) {
            acc.push(r.phase);
        }
        acc
    });
    for phase in phases {
        let rows: Vec<&ResultRecord> = records.iter().filter(|r| r.phase == phase && !r.is_median).collect();
        let ms: Vec<f64> = rows.iter().map(|r| r.ms).collect();
        let queries: Vec<f64> = rows.iter().map(|r| r.queries as f64).collect();
        let mut m = rows[0].clone();
        m.ms = median(&ms);
        m.queries = median(&queries).round() as u64;
        m.run = 0;
        m.is_median = true;
        records.push(m);
    }
}

fn run_queries(
    index: &dyn DistanceQuery<2>,
    queries: &[(Point<2>, u64)],
    config: &BenchConfig,
    clock: &dyn Clock,
) -> Result<(f64, u64)> {
    let mut out = Vec::new();
    let tp = throughput(queries, config.time_limit(), config.batch, clock, |(q, r)| {
        out.clear();
        index.query_into(q, *r, config.metric, &mut out);
        out.len()
    })?;
    Ok((tp.latency_ms(), tp.queries))
}

/// Construction time plus query latency, `runs` times, with median rows.
pub fn run_static(config: &BenchConfig, clock: &dyn Clock) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    if config.structure.is_dynamic() {
        return Err(BenchError::Config(format!(
            "{} is a dynamic structure; use the dynamic protocol",
            config.structure
        )));
    }
    let points = gen_points(&config.dataset)?;
    let queries = gen_queries(&config.queries)?;
    let dataset = dataset_id(&config.dataset, &points);
    let mut records = Vec::new();
    for run in 1..=config.runs {
        let t0 = clock.now();
        let index = build_static(config.structure, &points, config.dataset.domain, config.build_options())?;
        let built = clock.now().saturating_sub(t0);
        records.push(config.record(&dataset, Phase::Build, ms(built), 0, run));
        let (latency, executed) = run_queries(index.as_ref(), &queries, config, clock)?;
        records.push(config.record(&dataset, Phase::Query, latency, executed, run));
    }
    push_medians(&mut records);
    Ok(records)
}

/// Sequential inserts of the whole dataset, then the query throughput run.
pub fn run_dynamic(config: &BenchConfig, clock: &dyn Clock) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    if config.no_rank && config.structure.is_dynamic() {
        return Err(BenchError::Unsupported(
            "dynamic buckets merge by stored codes; --no-rank applies to static structures only".into(),
        ));
    }
    if config.structure.curve().is_some() && !config.structure.is_dynamic() {
        return Err(BenchError::Config(format!(
            "{} is a static structure; use curve-z-dyn or curve-h-dyn",
            config.structure
        )));
    }
    let points = gen_points(&config.dataset)?;
    let queries = gen_queries(&config.queries)?;
    let dataset = dataset_id(&config.dataset, &points);
    let mut records = Vec::new();
    for run in 1..=config.runs {
        let t0 = clock.now();
        let index = build_dynamic(config.structure, &points, config.dataset.domain)?;
        let inserted = clock.now().saturating_sub(t0);
        records.push(config.record(&dataset, Phase::Insert, ms(inserted), 0, run));
        if points.len() <= SPOT_CHECK_MAX_N {
            spot_check(index.as_ref(), &points, &queries, config.metric)?;
        }
        let (latency, executed) = run_queries(index.as_ref(), &queries, config, clock)?;
        records.push(config.record(&dataset, Phase::Query, latency, executed, run));
    }
    push_medians(&mut records);
    Ok(records)
}

fn spot_check(index: &dyn DistanceQuery<2>, points: &[Point<2>], queries: &[(Point<2>, u64)], metric: Metric) -> Result<()> {
    for (q, r) in queries.iter().take(SPOT_CHECK_QUERIES) {
        let mut got = index.query(q, *r, metric);
        let mut want = brute_force_query(points, q, *r, metric);
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            return Err(BenchError::Verification(format!(
                "query {q:?} r={r}: {} points reported, oracle has {}",
                got.len(),
                want.len()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct ReplayOptions {
    pub structure: Structure,
    pub metric: Metric,
    pub read: ReadOptions,
    pub parallel_sort: bool,
    pub no_rank: bool,
}

impl ReplayOptions {
    pub fn new(structure: Structure) -> Self {
        Self {
            structure,
            metric: Metric::Linf,
            read: ReadOptions::default(),
            parallel_sort: false,
            no_rank: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReplayOutcome {
    /// Single `total` row: construction plus one pass over every query.
    pub record: ResultRecord,
    /// Result size of each query, in log order.
    pub result_counts: Vec<usize>,
}

/// Replays a recorded point file and query log.
pub fn replay(points_path: impl AsRef<Path>, queries_path: impl AsRef<Path>, opts: &ReplayOptions, clock: &dyn Clock) -> Result<ReplayOutcome> {
    let (domain, points) = read_points::<2>(points_path.as_ref(), opts.read)?;
    let queries = read_queries(queries_path, &domain, opts.read)?;
    let name = file_label(points_path.as_ref());
    replay_data(&name, domain, &points, &queries, opts, clock)
}

/// Replays a combined workload file.
pub fn replay_workload(path: impl AsRef<Path>, opts: &ReplayOptions, clock: &dyn Clock) -> Result<ReplayOutcome> {
    let w = read_workload::<2>(path.as_ref(), opts.read)?;
    replay_data(&file_label(path.as_ref()), w.domain, &w.points, &w.queries, opts, clock)
}

fn file_label(path: &Path) -> String {
    path.file_stem().map_or_else(|| "replay".into(), |s| s.to_string_lossy().replace(',', "_"))
}

fn replay_data(
    name: &str,
    domain: Domain<2>,
    points: &[Point<2>],
    queries: &[(Point<2>, u64)],
    opts: &ReplayOptions,
    clock: &dyn Clock,
) -> Result<ReplayOutcome> {
    if queries.is_empty() {
        return Err(BenchError::Config("query log is empty".into()));
    }
    let dataset = format!("{name}-{}", dataset_hash(points));
    let build_opts = BuildOptions {
        store_codes: !opts.no_rank,
        parallel_sort: opts.parallel_sort,
    };
    let t0 = clock.now();
    let index = if opts.structure.is_dynamic() {
        build_dynamic(opts.structure, points, domain)?
    } else {
        build_static(opts.structure, points, domain, build_opts)?
    };
    let mut out = Vec::new();
    let mut result_counts = Vec::with_capacity(queries.len());
    for (q, r) in queries {
        out.clear();
        index.query_into(q, *r, opts.metric, &mut out);
        result_counts.push(out.len());
    }
    let elapsed = clock.now().saturating_sub(t0);
    let record = ResultRecord {
        structure: opts.structure.name().into(),
        dataset,
        n: points.len(),
        curve: opts.structure.curve_name().into(),
        rho: 0.0,
        metric: opts.metric.name().into(),
        phase: Phase::Total,
        ms: ms(elapsed),
        queries: queries.len() as u64,
        run: 1,
        is_median: false,
    };
    Ok(ReplayOutcome { record, result_counts })
}
