//! Quick randomized agreement check between every structure and the oracle.

use sfc_index::datagen::{gen_points, gen_queries, DatasetSpec, Distribution, QuerySpec};
use sfc_index::{brute_force_query, BuildOptions, CurveKind, DistanceQuery, Domain, LogIndex, Metric, Point, StaticIndex};

use crate::Result;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
}

fn sorted(mut v: Vec<Point<2>>) -> Vec<Point<2>> {
    v.sort_unstable();
    v
}

/// One check per (distribution, omega, curve): static, no-rank and dynamic
/// indexes against brute force under both metrics.
pub fn run(seed: u64, n: usize, queries: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for dist in Distribution::ALL {
        for omega in [8, 16, 32] {
            let domain = Domain::new(omega)?;
            let ds = DatasetSpec {
                distribution: dist,
                n,
                domain,
                seed,
            };
            let points = gen_points(&ds)?;
            let qs = gen_queries(&QuerySpec {
                centre_distribution: dist,
                rho: 0.02,
                count: queries,
                seed: seed.wrapping_add(1),
                domain,
            })?;
            for curve in [CurveKind::Z, CurveKind::Hilbert] {
                let st = StaticIndex::<u64, 2>::build(&points, curve, domain, BuildOptions::default())?;
                let bare = StaticIndex::<u64, 2>::build(
                    &points,
                    curve,
                    domain,
                    BuildOptions {
                        store_codes: false,
                        parallel_sort: true,
                    },
                )?;
                let mut dy = LogIndex::<u64, 2>::new(curve, domain)?;
                dy.extend(points.iter().copied())?;
                let indexes: [&dyn DistanceQuery<2>; 3] = [&st, &bare, &dy];
                let passed = qs.iter().all(|(q, r)| {
                    [Metric::Linf, Metric::L2].into_iter().all(|m| {
                        let want = sorted(brute_force_query(&points, q, *r, m));
                        indexes.iter().all(|idx| sorted(idx.query(q, *r, m)) == want)
                    })
                });
                out.push(CheckOutcome {
                    name: format!("{dist} omega={omega} curve={curve}"),
                    passed,
                });
            }
        }
    }
    Ok(out)
}
