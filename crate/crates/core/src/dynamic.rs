//! Insertion-only index by the logarithmic method.
//!
//! Bucket `i` is either empty or a [`StaticIndex`] of exactly `2^i` points,
//! so the occupied buckets spell `n` in binary. An insert adds a one-point
//! bucket and carries like a binary counter, merging equal-size buckets by
//! a linear merge of their code arrays.

use crate::code::CodeWord;
use crate::encoding::CurveKind;
use crate::error::Result;
use crate::geometry::{Domain, Point};
use crate::query::{DistanceQuery, Metric};
use crate::static_index::StaticIndex;

#[derive(Clone, Debug)]
pub struct LogIndex<C, const D: usize> {
    buckets: Vec<Option<StaticIndex<C, D>>>,
    curve: CurveKind,
    domain: Domain<D>,
    len: usize,
    merge_moves: u64,
}

impl<C: CodeWord, const D: usize> LogIndex<C, D> {
    pub fn new(curve: CurveKind, domain: Domain<D>) -> Result<Self> {
        curve.check_dims(D)?;
        domain.check_code_width::<C>()?;
        Ok(Self {
            buckets: Vec::new(),
            curve,
            domain,
            len: 0,
            merge_moves: 0,
        })
    }

    pub fn insert(&mut self, p: Point<D>) -> Result<()> {
        self.domain.check_point(self.len, &p)?;
        let code: C = self.curve.encode_unchecked(&p, self.domain.omega());
        let mut points = vec![p];
        let mut codes = vec![code];
        let mut slot = 0;
        while let Some(bucket) = self.buckets.get_mut(slot).and_then(Option::take) {
            let (old_points, old_codes) = bucket.into_parts();
            let old_codes = old_codes.expect("dynamic buckets always store codes");
            (points, codes) = merge(old_points, old_codes, points, codes);
            self.merge_moves += points.len() as u64;
            slot += 1;
        }
        if slot == self.buckets.len() {
            self.buckets.push(None);
        }
        self.buckets[slot] = Some(StaticIndex::from_sorted_parts(points, codes, self.curve, self.domain));
        self.len += 1;
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Point<D>>>(&mut self, points: I) -> Result<()> {
        points.into_iter().try_for_each(|p| self.insert(p))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn curve(&self) -> CurveKind {
        self.curve
    }

    pub fn domain(&self) -> &Domain<D> {
        &self.domain
    }

    /// Sizes of all bucket slots, 0 for empty ones.
    pub fn bucket_sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(|b| b.as_ref().map_or(0, StaticIndex::len)).collect()
    }

    /// Bit `i` set iff bucket `i` is occupied.
    pub fn occupancy(&self) -> u64 {
        self.buckets
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_some())
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn buckets(&self) -> impl Iterator<Item = &StaticIndex<C, D>> {
        self.buckets.iter().flatten()
    }

    /// Total number of elements written by merges so far.
    pub fn merge_moves(&self) -> u64 {
        self.merge_moves
    }
}

/// Stable linear merge; on equal codes the older run comes first.
fn merge<C: CodeWord, const D: usize>(
    old_points: Vec<Point<D>>,
    old_codes: Vec<C>,
    new_points: Vec<Point<D>>,
    new_codes: Vec<C>,
) -> (Vec<Point<D>>, Vec<C>) {
    let n = old_points.len() + new_points.len();
    let mut points = Vec::with_capacity(n);
    let mut codes = Vec::with_capacity(n);
    let (mut i, mut j) = (0, 0);
    while i < old_codes.len() && j < new_codes.len() {
        if new_codes[j] < old_codes[i] {
            points.push(new_points[j]);
            codes.push(new_codes[j]);
            j += 1;
        } else {
            points.push(old_points[i]);
            codes.push(old_codes[i]);
            i += 1;
        }
    }
    points.extend_from_slice(&old_points[i..]);
    codes.extend_from_slice(&old_codes[i..]);
    points.extend_from_slice(&new_points[j..]);
    codes.extend_from_slice(&new_codes[j..]);
    (points, codes)
}

impl<C: CodeWord, const D: usize> DistanceQuery<D> for LogIndex<C, D> {
    fn len(&self) -> usize {
        self.len
    }

    fn query_into(&self, q: &Point<D>, r: u64, metric: Metric, out: &mut Vec<Point<D>>) {
        for bucket in self.buckets() {
            bucket.query_into(q, r, metric, out);
        }
    }
}
