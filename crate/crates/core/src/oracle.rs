//! Linear-scan reference answers.

use crate::geometry::Point;
use crate::query::{DistanceQuery, Metric};

/// Every point within distance `r` of `q`, in input order.
pub fn brute_force_query<const D: usize>(points: &[Point<D>], q: &Point<D>, r: u64, metric: Metric) -> Vec<Point<D>> {
    points.iter().filter(|p| metric.within(p, q, r)).copied().collect()
}

/// An unsorted point list answering queries by linear scan.
#[derive(Clone, Debug, Default)]
pub struct BruteForce<const D: usize> {
    points: Vec<Point<D>>,
}

impl<const D: usize> BruteForce<D> {
    pub fn new(points: Vec<Point<D>>) -> Self {
        Self { points }
    }

    pub fn push(&mut self, p: Point<D>) {
        self.points.push(p);
    }

    pub fn points(&self) -> &[Point<D>] {
        &self.points
    }
}

impl<const D: usize> DistanceQuery<D> for BruteForce<D> {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn query_into(&self, q: &Point<D>, r: u64, metric: Metric, out: &mut Vec<Point<D>>) {
        out.extend(self.points.iter().filter(|p| metric.within(p, q, r)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let o = Point([0, 0]);
        assert!(brute_force_query::<2>(&[], &o, 5, Metric::Linf).is_empty());
        assert_eq!(
            brute_force_query(&[Point([1, 1]), Point([4, 4])], &o, 2, Metric::Linf),
            vec![Point([1, 1])]
        );
        assert_eq!(brute_force_query(&[Point([3, 0])], &o, 3, Metric::L2), vec![Point([3, 0])]);
        assert!(brute_force_query(&[Point([3, 0])], &o, 2, Metric::L2).is_empty());
    }

    #[test]
    fn keeps_input_order() {
        let pts = [Point([5, 5]), Point([0, 0]), Point([2, 2])];
        assert_eq!(brute_force_query(&pts, &Point([1, 1]), 10, Metric::Linf), pts.to_vec());
    }

    fn arb_points() -> impl Strategy<Value = Vec<Point<2>>> {
        prop::collection::vec((0u32..64, 0u32..64).prop_map(|(x, y)| Point([x, y])), 0..100)
    }

    proptest! {
        #[test]
        fn linf_contains_l2(pts in arb_points(), qx in 0u32..64, qy in 0u32..64, r in 0u64..80) {
            let q = Point([qx, qy]);
            let linf = brute_force_query(&pts, &q, r, Metric::Linf);
            for p in brute_force_query(&pts, &q, r, Metric::L2) {
                prop_assert!(linf.contains(&p));
            }
        }

        #[test]
        fn monotone_in_radius(pts in arb_points(), qx in 0u32..64, qy in 0u32..64, r in 0u64..80) {
            let q = Point([qx, qy]);
            for m in [Metric::Linf, Metric::L2] {
                prop_assert!(brute_force_query(&pts, &q, r, m).len() <= brute_force_query(&pts, &q, r + 1, m).len());
            }
        }
    }
}
