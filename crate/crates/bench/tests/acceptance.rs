//! Acceptance suite. Runs each criterion in sequence (timing criteria must
//! not share the machine with parallel tests), prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::cell::Cell;
use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfc_bench::{run_static, throughput, time_limit, BenchConfig, Clock, MonotonicClock, Structure};
use sfc_index::datagen::{gen_points, gen_queries, DatasetSpec, Distribution, QuerySpec};
use sfc_index::io::Phase;
use sfc_index::{
    brute_force_query, cells, BuildOptions, Code, CurveKind, DistanceQuery, Domain, LogIndex, Metric, Point, QueryBox,
    StaticIndex,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn sorted(mut v: Vec<Point<2>>) -> Vec<Point<2>> {
    v.sort_unstable();
    v
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut queries_checked = 0u64;
    let mut reported = 0u64;
    for config in 0..1000 {
        let dist = Distribution::ALL[rng.random_range(0..4)];
        let omega = [8, 16, 32][rng.random_range(0..3)];
        let domain = Domain::new(omega).unwrap();
        // log-uniform sizes so tiny sets are covered too
        let n = (10f64.powf(rng.random_range(0.0..4.0)) as usize).clamp(1, 10_000);
        let seed = rng.random();
        let points = gen_points(&DatasetSpec {
            distribution: dist,
            n,
            domain,
            seed,
        })
        .unwrap();
        let rho = 10f64.powf(rng.random_range(-3.0..-0.3));
        let queries = gen_queries(&QuerySpec {
            centre_distribution: Distribution::ALL[rng.random_range(0..4)],
            rho,
            count: 10,
            seed: seed ^ 0x5eed,
            domain,
        })
        .unwrap();
        for curve in [CurveKind::Z, CurveKind::Hilbert] {
            let st = StaticIndex::<u64, 2>::build(&points, curve, domain, BuildOptions::default()).unwrap();
            let mut dy = LogIndex::<u64, 2>::new(curve, domain).unwrap();
            dy.extend(points.iter().copied()).unwrap();
            for (i, (q, r)) in queries.iter().enumerate() {
                // every other query is centred on a stored point
                let q = if i % 2 == 1 { points[rng.random_range(0..n)] } else { *q };
                for metric in [Metric::Linf, Metric::L2] {
                    let want = sorted(brute_force_query(&points, &q, *r, metric));
                    let got_static = sorted(st.query(&q, *r, metric));
                    let got_dynamic = sorted(dy.query(&q, *r, metric));
                    ensure!(
                        got_static == want && got_dynamic == want,
                        "config {config}: {dist} n={n} omega={omega} {curve} {metric} q={q:?} r={r}: \
                         static {} dynamic {} oracle {}",
                        got_static.len(),
                        got_dynamic.len(),
                        want.len()
                    );
                    queries_checked += 1;
                    reported += want.len() as u64;
                }
            }
        }
    }
    Ok(format!("1000 configurations, {queries_checked} query/metric pairs, {reported} points matched"))
}

fn grid(omega: u32) -> impl Iterator<Item = Point<2>> {
    let e = 1u32 << omega;
    (0..e).flat_map(move |x| (0..e).map(move |y| Point([x, y])))
}

fn codec_exhaustiveness() -> Outcome {
    for (curve, max_omega) in [(CurveKind::Z, 8), (CurveKind::Hilbert, 6)] {
        for omega in 1..=max_omega {
            let d = Domain::<2>::new(omega).unwrap();
            let total = 1usize << (2 * omega);
            let mut seen = vec![false; total];
            for p in grid(omega) {
                let c = curve.encode::<u64, 2>(&p, &d).unwrap();
                ensure!((c.0 as usize) < total, "{curve} omega={omega}: code {} out of range", c.0);
                ensure!(!seen[c.0 as usize], "{curve} omega={omega}: code {} repeated", c.0);
                seen[c.0 as usize] = true;
                ensure!(curve.decode(c, &d).unwrap() == p, "{curve} omega={omega}: roundtrip {p:?}");
            }
            for k in 0..total as u64 {
                let p = curve.decode::<u64, 2>(Code(k), &d).unwrap();
                ensure!(curve.encode::<u64, 2>(&p, &d).unwrap().0 == k, "{curve} omega={omega}: code roundtrip {k}");
            }
        }
    }
    for curve in [CurveKind::Z, CurveKind::Hilbert] {
        for omega in 1..=5 {
            let d = Domain::<2>::new(omega).unwrap();
            for level in 0..=omega {
                let mut prefix_of: HashMap<(u32, u32), u64> = HashMap::new();
                for p in grid(omega) {
                    let prefix = curve.encode::<u64, 2>(&p, &d).unwrap().0 >> (2 * level);
                    let cell = (p.x() >> level, p.y() >> level);
                    ensure!(
                        *prefix_of.entry(cell).or_insert(prefix) == prefix,
                        "{curve} omega={omega} level={level}: prefix differs inside cell {cell:?}"
                    );
                }
                let distinct: HashSet<_> = prefix_of.values().collect();
                ensure!(distinct.len() == prefix_of.len(), "{curve} omega={omega} level={level}: shared prefixes");
            }
        }
    }
    Ok("Z bijective for omega<=8, Hilbert for omega<=6, prefix property at every level for omega<=5".into())
}

fn hilbert_locality() -> Outcome {
    for omega in 1..=6 {
        let d = Domain::<2>::new(omega).unwrap();
        let mut prev = CurveKind::Hilbert.decode::<u64, 2>(Code(0), &d).unwrap();
        for k in 1..(1u64 << (2 * omega)) {
            let p = CurveKind::Hilbert.decode::<u64, 2>(Code(k), &d).unwrap();
            let l1 = p.x().abs_diff(prev.x()) + p.y().abs_diff(prev.y());
            ensure!(l1 == 1, "omega={omega}: codes {} and {k} are {l1} apart", k - 1);
            prev = p;
        }
    }
    Ok("every consecutive pair at L1 distance 1 for omega<=6".into())
}

fn cells_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xce11);
    for omega in [8u32, 16, 32] {
        let d = Domain::<2>::new(omega).unwrap();
        let extent = d.extent();
        for _ in 0..100_000 {
            let side = (2f64.powf(rng.random_range(0.0..=omega as f64)) as u64).clamp(1, extent);
            let lo = Point([rng.random_range(0..=extent - side) as u32, rng.random_range(0..=extent - side) as u32]);
            let b = QueryBox::new(lo, side, &d).unwrap();
            let cs = cells(&b, &d);
            ensure!((1..=4).contains(&cs.len()), "omega={omega} {lo:?} side={side}: {} cells", cs.len());
            let hi = b.hi();
            let mut per_axis: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
            for c in &cs {
                ensure!(
                    c.side() >= side && c.side() < 2 * side,
                    "omega={omega} side={side}: cell side {}",
                    c.side()
                );
                for (a, seen) in per_axis.iter_mut().enumerate() {
                    let start = c.anchor.0[a] as u64;
                    let end = start + c.side() - 1;
                    ensure!(
                        start <= hi.0[a] as u64 && lo.0[a] as u64 <= end,
                        "cell {c:?} misses box {lo:?}..={hi:?}"
                    );
                    if !seen.contains(&start) {
                        seen.push(start);
                    }
                }
            }
            // cells form the full product of per-axis anchors, and the anchors
            // cover [lo, hi] on each axis
            ensure!(cs.len() == per_axis[0].len() * per_axis[1].len(), "cells are not a product grid");
            for (a, anchors) in per_axis.iter_mut().enumerate() {
                anchors.sort_unstable();
                let s = cs[0].side();
                ensure!(anchors[0] <= lo.0[a] as u64, "axis {a} starts after the box");
                ensure!(*anchors.last().unwrap() + s > hi.0[a] as u64, "axis {a} ends before the box");
                ensure!(anchors.windows(2).all(|w| w[1] == w[0] + s), "gap between anchors on axis {a}");
            }
            let probe = Point([
                rng.random_range(lo.x() as u64..=hi.x() as u64) as u32,
                rng.random_range(lo.y() as u64..=hi.y() as u64) as u32,
            ]);
            ensure!(cs.iter().any(|c| c.contains(&probe)), "{probe:?} uncovered");
        }
    }
    Ok("3 x 100000 random boxes: 1-4 cells, covering, side in [s, 2s)".into())
}

fn logarithmic_method() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x109);
    let d = Domain::<2>::new(16).unwrap();
    let n = 10_000u64;
    for curve in [CurveKind::Z, CurveKind::Hilbert] {
        let mut idx = LogIndex::<u64, 2>::new(curve, d).unwrap();
        for k in 1..=n {
            idx.insert(Point([rng.random_range(0..65536), rng.random_range(0..65536)])).unwrap();
            ensure!(idx.occupancy() == k, "{curve}: occupancy {:b} after {k} inserts", idx.occupancy());
            for (i, size) in idx.bucket_sizes().into_iter().enumerate() {
                ensure!(size == 0 || size == 1 << i, "{curve}: bucket {i} holds {size}");
            }
        }
        let bound = n * (n.ilog2() as u64 + 1);
        ensure!(idx.merge_moves() <= bound, "{curve}: {} moves > {bound}", idx.merge_moves());
    }
    Ok(format!("occupancy == binary(n) after every insert; moves <= {}", n * (n.ilog2() as u64 + 1)))
}

fn output_size() -> Outcome {
    let domain = Domain::<2>::new(16).unwrap();
    let points = gen_points(&DatasetSpec {
        distribution: Distribution::Uniform,
        n: 1_000_000,
        domain,
        seed: 77,
    })
    .unwrap();
    let queries = gen_queries(&QuerySpec {
        centre_distribution: Distribution::Uniform,
        rho: 0.01,
        count: 10_000,
        seed: 78,
        domain,
    })
    .unwrap();
    let idx = StaticIndex::<u64, 2>::build(&points, CurveKind::Z, domain, BuildOptions::default()).unwrap();
    let mut out = Vec::new();
    let mut total = 0usize;
    for (q, r) in &queries {
        out.clear();
        idx.query_into(q, *r, Metric::Linf, &mut out);
        total += out.len();
    }
    let mean = total as f64 / queries.len() as f64;
    let expected = 1e6 * 0.01f64 * 0.01;
    ensure!((mean - expected).abs() <= 0.1 * expected, "mean result count {mean:.2}, expected {expected} +-10%");
    Ok(format!("mean L-inf result count {mean:.2} (target {expected} +-10%)"))
}

struct FakeClock(Cell<Duration>);

impl Clock for FakeClock {
    fn now(&self) -> Duration {
        self.0.get()
    }
}

fn harness_protocol() -> Outcome {
    ensure!(time_limit(500_000) == Duration::from_millis(500), "limit at 0.5M is {:?}", time_limit(500_000));
    ensure!(time_limit(40_000_000) == Duration::from_secs(10), "limit at 40M is {:?}", time_limit(40_000_000));
    ensure!(time_limit(20_000_000) == Duration::from_secs(10), "limit at 20M is {:?}", time_limit(20_000_000));
    for (tick_us, batch, n) in [(1500u64, 64usize, 500_000usize), (7, 1024, 40_000_000), (250, 1, 1_000_000), (13, 100, 0)] {
        let clock = FakeClock(Cell::new(Duration::from_secs(1)));
        let tick = Duration::from_micros(tick_us);
        let limit = time_limit(n);
        let tp = throughput(&[0u8; 7], limit, batch, &clock, |_| {
            clock.0.set(clock.0.get() + tick);
            1
        })
        .map_err(|e| e.to_string())?;
        let batch_time = tick * batch as u32;
        ensure!(tp.elapsed >= limit, "stopped early: {:?} < {limit:?}", tp.elapsed);
        ensure!(tp.elapsed <= limit + batch_time, "overshoot {:?} beyond one batch", tp.elapsed - limit);
        ensure!(tp.queries % batch as u64 == 0 && tp.queries >= batch as u64, "partial batch: {}", tp.queries);
        let expected = tp.elapsed.as_secs_f64() * 1e3 / tp.queries as f64;
        ensure!((tp.latency_ms() - expected).abs() <= 1e-12 * expected, "latency {} vs {expected}", tp.latency_ms());
        ensure!((tp.latency_ms() - tick_us as f64 / 1e3).abs() <= 1e-9, "latency {} vs tick", tp.latency_ms());
    }
    Ok("limit = min(n/1e6, 10) s, overshoot <= one batch, latency = elapsed/queries".into())
}

fn median_build_ms(structure: Structure, n: usize) -> f64 {
    let domain = Domain::new(16).unwrap();
    let dataset = DatasetSpec {
        distribution: Distribution::Uniform,
        n,
        domain,
        seed: 5,
    };
    let queries = QuerySpec {
        centre_distribution: Distribution::Uniform,
        rho: 0.01,
        count: 16,
        seed: 6,
        domain,
    };
    let mut config = BenchConfig::new(structure, dataset, queries);
    config.runs = 3;
    config.batch = 16;
    config.limit = Some(Duration::ZERO);
    let records = run_static(&config, &MonotonicClock::new()).unwrap();
    records
        .iter()
        .find(|r| r.is_median && r.phase == Phase::Build)
        .map(|r| r.ms)
        .expect("median build row")
}

fn relative_performance() -> Outcome {
    let z5 = median_build_ms(Structure::CurveZ, 5_000_000);
    let h5 = median_build_ms(Structure::CurveH, 5_000_000);
    ensure!(z5 < h5, "Curve-Z build {z5:.1} ms is not below Curve-H {h5:.1} ms at n=5M");
    let mut notes = vec![format!("n=5M: Z {z5:.1} ms < H {h5:.1} ms (ratio {:.2})", h5 / z5)];
    for structure in [Structure::CurveZ, Structure::CurveH] {
        let t2 = median_build_ms(structure, 2_000_000);
        let t4 = median_build_ms(structure, 4_000_000);
        let ratio = t4 / t2;
        ensure!((1.5..=3.0).contains(&ratio), "{structure}: build(4M)/build(2M) = {ratio:.2}");
        notes.push(format!("{structure} 4M/2M = {ratio:.2}"));
    }
    Ok(notes.join("; "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("codec exhaustiveness", codec_exhaustiveness),
        ("hilbert locality", hilbert_locality),
        ("cells(Q) contract", cells_contract),
        ("logarithmic-method structure", logarithmic_method),
        ("statistical output size", output_size),
        ("harness protocol", harness_protocol),
        ("relative performance", relative_performance),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
