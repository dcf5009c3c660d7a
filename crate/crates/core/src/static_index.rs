//! The sorted-array index: points ordered by curve code, with an optional
//! parallel array of the codes themselves.

use rayon::slice::ParallelSliceMut;

use crate::code::CodeWord;
use crate::encoding::{cell_range_unchecked, CurveKind};
use crate::error::Result;
use crate::geometry::{CodeRange, Domain, Point};
use crate::radix;
use crate::query::{bounding_box, for_each_cell, DistanceQuery, Metric};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Keep the code array next to the points. Without it every binary-search
    /// probe and every scanned element re-encodes its point.
    pub store_codes: bool,
    /// Sort with rayon instead of the sequential radix sort. Both sorts are
    /// stable, so the result is identical.
    pub parallel_sort: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            store_codes: true,
            parallel_sort: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StaticIndex<C, const D: usize> {
    points: Vec<Point<D>>,
    codes: Option<Vec<C>>,
    curve: CurveKind,
    domain: Domain<D>,
}

impl<C: CodeWord, const D: usize> StaticIndex<C, D> {
    /// Sorts `points` by curve code. Equal codes keep their input order.
    pub fn build(points: &[Point<D>], curve: CurveKind, domain: Domain<D>, opts: BuildOptions) -> Result<Self> {
        curve.check_dims(D)?;
        domain.check_code_width::<C>()?;
        for (i, p) in points.iter().enumerate() {
            domain.check_point(i, p)?;
        }
        let omega = domain.omega();
        let mut keyed: Vec<(C, Point<D>)> = match curve {
            CurveKind::Z => points
                .iter()
                .map(|p| (crate::encoding::morton::encode_raw(&p.0, omega), *p))
                .collect(),
            CurveKind::Hilbert => points
                .iter()
                .map(|p| (crate::encoding::hilbert::encode_raw(p.0[0], p.0[1], omega), *p))
                .collect(),
        };
        if opts.parallel_sort {
            keyed.par_sort_by_key(|e| e.0);
        } else {
            radix::sort_by_code(&mut keyed, domain.code_bits());
        }
        let (codes, points) = if opts.store_codes {
            let (c, p): (Vec<C>, Vec<Point<D>>) = keyed.into_iter().unzip();
            (Some(c), p)
        } else {
            (None, keyed.into_iter().map(|e| e.1).collect())
        };
        Ok(Self {
            points,
            codes,
            curve,
            domain,
        })
    }

    /// Assembles an index from arrays that are already sorted and encoded.
    pub(crate) fn from_sorted_parts(points: Vec<Point<D>>, codes: Vec<C>, curve: CurveKind, domain: Domain<D>) -> Self {
        debug_assert_eq!(points.len(), codes.len());
        debug_assert!(codes.windows(2).all(|w| w[0] <= w[1]));
        Self {
            points,
            codes: Some(codes),
            curve,
            domain,
        }
    }

    pub(crate) fn into_parts(self) -> (Vec<Point<D>>, Option<Vec<C>>) {
        (self.points, self.codes)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in curve order.
    pub fn points(&self) -> &[Point<D>] {
        &self.points
    }

    /// Codes in curve order, or `None` for a build without stored codes.
    pub fn codes(&self) -> Option<&[C]> {
        self.codes.as_deref()
    }

    pub fn curve(&self) -> CurveKind {
        self.curve
    }

    pub fn domain(&self) -> &Domain<D> {
        &self.domain
    }

    #[inline(always)]
    fn encode(&self, p: &Point<D>) -> C {
        self.curve.encode_unchecked(p, self.domain.omega())
    }

    /// Index range of the stored points whose codes fall in `range`.
    #[inline]
    fn slice_bounds(&self, range: &CodeRange<C>) -> (usize, usize) {
        match &self.codes {
            Some(codes) => {
                let start = codes.partition_point(|&c| c < range.lo);
                let len = codes[start..].iter().take_while(|&&c| c <= range.hi).count();
                (start, start + len)
            }
            None => {
                let start = self.points.partition_point(|p| self.encode(p) < range.lo);
                let len = self.points[start..]
                    .iter()
                    .take_while(|p| self.encode(p) <= range.hi)
                    .count();
                (start, start + len)
            }
        }
    }

    /// Runs of points visited for a query, before the distance filter.
    #[inline]
    fn for_each_candidate_run(&self, q: &Point<D>, r: u64, mut f: impl FnMut(&[Point<D>])) {
        if self.points.is_empty() {
            return;
        }
        let qbox = bounding_box(q, r, &self.domain);
        let omega = self.domain.omega();
        for_each_cell(&qbox, &self.domain, |cell| {
            let range = cell_range_unchecked::<C, D>(&cell, omega, self.curve);
            let (start, end) = self.slice_bounds(&range);
            if start < end {
                f(&self.points[start..end]);
            }
        });
    }

    /// Every point the scan touches for `(q, r)`, unfiltered.
    pub fn candidates(&self, q: &Point<D>, r: u64) -> Vec<Point<D>> {
        let mut out = Vec::new();
        self.for_each_candidate_run(q, r, |run| out.extend_from_slice(run));
        out
    }
}

impl<C: CodeWord, const D: usize> DistanceQuery<D> for StaticIndex<C, D> {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn query_into(&self, q: &Point<D>, r: u64, metric: Metric, out: &mut Vec<Point<D>>) {
        self.for_each_candidate_run(q, r, |run| {
            out.extend(run.iter().filter(|p| metric.within(p, q, r)));
        });
    }
}
