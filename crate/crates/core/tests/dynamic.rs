use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfc_index::{BuildOptions, CurveKind, DistanceQuery, Domain, LogIndex, Metric, Point, StaticIndex};

fn sorted(mut v: Vec<Point<2>>) -> Vec<Point<2>> {
    v.sort_unstable();
    v
}

#[test]
fn occupancy_tracks_binary_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let d = Domain::new(16).unwrap();
    let mut idx = LogIndex::<u64, 2>::new(CurveKind::Hilbert, d).unwrap();
    for n in 1..=3000u64 {
        idx.insert(Point([rng.random_range(0..65536), rng.random_range(0..65536)])).unwrap();
        assert_eq!(idx.occupancy(), n);
        assert_eq!(idx.len() as u64, n);
        for (i, size) in idx.bucket_sizes().into_iter().enumerate() {
            assert!(size == 0 || size == 1 << i);
        }
    }
    let n = 3000u64;
    assert!(idx.merge_moves() <= n * (n.ilog2() as u64 + 1));
    for b in idx.buckets() {
        assert!(b.codes().unwrap().windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn matches_static_after_random_inserts() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let d = Domain::new(8).unwrap();
    // small domain forces duplicates
    let pts: Vec<_> = (0..5000).map(|_| Point([rng.random_range(0..256), rng.random_range(0..256)])).collect();
    for curve in [CurveKind::Z, CurveKind::Hilbert] {
        let mut dynamic = LogIndex::<u64, 2>::new(curve, d).unwrap();
        dynamic.extend(pts.iter().copied()).unwrap();
        let st = StaticIndex::<u64, 2>::build(&pts, curve, d, BuildOptions::default()).unwrap();
        for _ in 0..200 {
            let q = Point([rng.random_range(0..256), rng.random_range(0..256)]);
            let r = rng.random_range(0..40);
            for m in [Metric::Linf, Metric::L2] {
                assert_eq!(sorted(dynamic.query(&q, r, m)), sorted(st.query(&q, r, m)));
            }
        }
    }
}

#[test]
fn len_is_conserved_by_merges() {
    let d = Domain::new(8).unwrap();
    let mut idx = LogIndex::<u64, 2>::new(CurveKind::Z, d).unwrap();
    for k in 0..100u32 {
        idx.insert(Point([k % 256, 7])).unwrap();
        let stored: usize = idx.buckets().map(|b| b.len()).sum();
        assert_eq!(stored, idx.len());
    }
}
