//! Query geometry shared by every index: metrics, the L∞ bounding box of a
//! ball, and its decomposition into at most `2^D` quadtree cells.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Cell, Domain, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    #[default]
    Linf,
    L2,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Linf => "linf",
            Metric::L2 => "l2",
        }
    }

    /// `dist(p, q) <= r`, exact in integer arithmetic.
    #[inline(always)]
    pub fn within<const D: usize>(self, p: &Point<D>, q: &Point<D>, r: u64) -> bool {
        match self {
            Metric::Linf => p.0.iter().zip(q.0.iter()).all(|(&a, &b)| a.abs_diff(b) as u64 <= r),
            Metric::L2 => {
                let mut sum = 0u128;
                for (&a, &b) in p.0.iter().zip(q.0.iter()) {
                    let diff = a.abs_diff(b) as u128;
                    sum += diff * diff;
                }
                sum <= (r as u128) * (r as u128)
            }
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linf" | "l-inf" | "chebyshev" => Ok(Metric::Linf),
            "l2" | "euclidean" => Ok(Metric::L2),
            _ => Err(Error::Config(format!("unknown metric `{s}`"))),
        }
    }
}

/// An axis-aligned square query, clamped to the domain.
///
/// `lo..=hi` is the clamped extent per axis. `nominal_side` is the side
/// before clamping; the cell level is derived from it so that clamping never
/// changes the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryBox<const D: usize> {
    lo: [u64; D],
    hi: [u64; D],
    nominal_side: u64,
}

impl<const D: usize> QueryBox<D> {
    /// The half-open box `[lo, lo + side)` clamped to `dom`.
    pub fn new(lo: Point<D>, side: u64, dom: &Domain<D>) -> Result<Self> {
        dom.check_point(0, &lo)?;
        if side == 0 {
            return Err(Error::Config("query box side must be positive".into()));
        }
        let last = dom.extent() - 1;
        Ok(Self {
            lo: lo.0.map(u64::from),
            hi: lo.0.map(|c| (c as u64).saturating_add(side - 1).min(last)),
            nominal_side: side,
        })
    }

    /// Lower corner. Only meaningful for a non-empty box.
    pub fn lo(&self) -> Point<D> {
        Point(self.lo.map(|c| c as u32))
    }

    /// Upper corner, inclusive.
    pub fn hi(&self) -> Point<D> {
        Point(self.hi.map(|c| c as u32))
    }

    /// Largest clamped side length.
    pub fn side(&self) -> u64 {
        (0..D).map(|a| self.hi[a].saturating_sub(self.lo[a]) + 1).max().unwrap_or(0)
    }

    pub fn nominal_side(&self) -> u64 {
        self.nominal_side
    }

    /// True when clamping removed the whole box (only for centres outside the domain).
    pub fn is_empty(&self) -> bool {
        (0..D).any(|a| self.lo[a] > self.hi[a])
    }

    pub fn contains(&self, p: &Point<D>) -> bool {
        (0..D).all(|a| self.lo[a] <= p.0[a] as u64 && p.0[a] as u64 <= self.hi[a])
    }

    /// Level `l` with `side <= 2^l < 2 * side`, capped at `omega`.
    pub fn level(&self, dom: &Domain<D>) -> u32 {
        let side = self.nominal_side.max(1);
        let level = 64 - (side - 1).leading_zeros();
        level.min(dom.omega())
    }
}

/// Smallest box containing the L∞ ball of radius `r` around `q`, clamped to `dom`.
pub fn bounding_box<const D: usize>(q: &Point<D>, r: u64, dom: &Domain<D>) -> QueryBox<D> {
    let last = dom.extent() - 1;
    QueryBox {
        lo: q.0.map(|c| (c as u64).saturating_sub(r)),
        hi: q.0.map(|c| (c as u64).saturating_add(r).min(last)),
        nominal_side: r.saturating_mul(2).saturating_add(1),
    }
}

/// Calls `f` for every level-`l` cell intersecting `qbox`; at most two per axis.
#[inline]
pub(crate) fn for_each_cell<const D: usize>(qbox: &QueryBox<D>, dom: &Domain<D>, mut f: impl FnMut(Cell<D>)) {
    if qbox.is_empty() {
        return;
    }
    let level = qbox.level(dom);
    let mask = !((1u64 << level) - 1);
    let first = qbox.lo.map(|c| c & mask);
    let last = qbox.hi.map(|c| c & mask);
    // Bit `a` of `pick` selects the upper anchor on axis `a`.
    'outer: for pick in 0..(1usize << D) {
        let mut anchor = [0u32; D];
        for a in 0..D {
            if pick >> a & 1 == 1 {
                if first[a] == last[a] {
                    continue 'outer;
                }
                anchor[a] = last[a] as u32;
            } else {
                anchor[a] = first[a] as u32;
            }
        }
        f(Cell {
            level,
            anchor: Point(anchor),
        });
    }
}

/// The quadtree cells of side in `[side, 2 * side)` that intersect `qbox`.
pub fn cells<const D: usize>(qbox: &QueryBox<D>, dom: &Domain<D>) -> Vec<Cell<D>> {
    let mut out = Vec::with_capacity(1 << D);
    for_each_cell(qbox, dom, |c| out.push(c));
    out
}

/// Anything that answers distance reporting queries.
pub trait DistanceQuery<const D: usize> {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends every stored point within distance `r` of `q` to `out`.
    fn query_into(&self, q: &Point<D>, r: u64, metric: Metric, out: &mut Vec<Point<D>>);

    fn query(&self, q: &Point<D>, r: u64, metric: Metric) -> Vec<Point<D>> {
        let mut out = Vec::new();
        self.query_into(q, r, metric, &mut out);
        out
    }
}
