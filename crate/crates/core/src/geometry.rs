//! Grid domain, points, quadtree cells and code intervals.

use std::fmt;

use crate::code::CodeWord;
use crate::error::{Error, Result};

/// The grid `[0, 2^omega)^D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Domain<const D: usize> {
    omega: u32,
}

impl<const D: usize> Domain<D> {
    /// Largest supported total code width, `D * omega`.
    pub const MAX_CODE_BITS: u32 = 128;

    pub fn new(omega: u32) -> Result<Self> {
        if !(2..=4).contains(&D) {
            return Err(Error::InvalidDomain {
                omega,
                dims: D,
                reason: "dimension must be in 2..=4",
            });
        }
        if omega == 0 || omega > 32 {
            return Err(Error::InvalidDomain {
                omega,
                dims: D,
                reason: "omega must be in 1..=32",
            });
        }
        if D as u32 * omega > Self::MAX_CODE_BITS {
            return Err(Error::InvalidDomain {
                omega,
                dims: D,
                reason: "codes exceed 128 bits",
            });
        }
        Ok(Self { omega })
    }

    #[inline]
    pub fn omega(&self) -> u32 {
        self.omega
    }

    #[inline]
    pub const fn dims(&self) -> usize {
        D
    }

    /// Side length `2^omega` in grid units.
    #[inline]
    pub fn extent(&self) -> u64 {
        1u64 << self.omega
    }

    /// Number of bits in a full code.
    #[inline]
    pub fn code_bits(&self) -> u32 {
        D as u32 * self.omega
    }

    /// Fails when codes of this domain do not fit in `C`.
    pub fn check_code_width<C: CodeWord>(&self) -> Result<()> {
        if self.code_bits() > C::BITS {
            return Err(Error::InvalidDomain {
                omega: self.omega,
                dims: D,
                reason: "code word too narrow for this domain",
            });
        }
        Ok(())
    }

    #[inline]
    pub fn contains(&self, p: &Point<D>) -> bool {
        p.0.iter().all(|&c| (c as u64) < self.extent())
    }

    /// Validates `p`, reporting it as element `index` on failure.
    pub fn check_point(&self, index: usize, p: &Point<D>) -> Result<()> {
        let extent = self.extent();
        for (axis, &c) in p.0.iter().enumerate() {
            if c as u64 >= extent {
                return Err(Error::DomainViolation {
                    index,
                    axis,
                    value: c as u64,
                    extent,
                });
            }
        }
        Ok(())
    }

    /// The level-`omega` cell covering the whole grid.
    pub fn root_cell(&self) -> Cell<D> {
        Cell {
            level: self.omega,
            anchor: Point([0; D]),
        }
    }
}

/// A grid point with unsigned coordinates in axis order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<const D: usize>(pub [u32; D]);

impl<const D: usize> Point<D> {
    #[inline]
    pub const fn new(coords: [u32; D]) -> Self {
        Self(coords)
    }

    #[inline]
    pub fn coords(&self) -> &[u32; D] {
        &self.0
    }
}

impl Point<2> {
    #[inline]
    pub fn x(&self) -> u32 {
        self.0[0]
    }

    #[inline]
    pub fn y(&self) -> u32 {
        self.0[1]
    }
}

impl<const D: usize> From<[u32; D]> for Point<D> {
    fn from(coords: [u32; D]) -> Self {
        Self(coords)
    }
}

impl<const D: usize> fmt::Debug for Point<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut t = f.debug_tuple("");
        for c in &self.0 {
            t.field(c);
        }
        t.finish()
    }
}

/// A position along a curve: `D * omega` significant bits, most significant first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct Code<C>(pub C);

impl<C: CodeWord> Code<C> {
    #[inline]
    pub fn value(self) -> C {
        self.0
    }
}

/// A quadtree cell of side `2^level` whose anchor is its minimum corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell<const D: usize> {
    pub level: u32,
    pub anchor: Point<D>,
}

impl<const D: usize> Cell<D> {
    /// Builds the level-`level` cell containing `p`.
    pub fn containing(p: Point<D>, level: u32, dom: &Domain<D>) -> Result<Self> {
        if level > dom.omega() {
            return Err(Error::Config(format!(
                "cell level {level} exceeds omega {}",
                dom.omega()
            )));
        }
        dom.check_point(0, &p)?;
        let mask = !((1u64 << level) - 1);
        Ok(Self {
            level,
            anchor: Point(p.0.map(|c| (c as u64 & mask) as u32)),
        })
    }

    #[inline]
    pub fn side(&self) -> u64 {
        1u64 << self.level
    }

    pub fn is_valid(&self, dom: &Domain<D>) -> bool {
        let side = self.side();
        self.level <= dom.omega()
            && self
                .anchor
                .0
                .iter()
                .all(|&a| (a as u64).is_multiple_of(side) && a as u64 + side <= dom.extent())
    }

    pub fn contains(&self, p: &Point<D>) -> bool {
        let side = self.side();
        self.anchor
            .0
            .iter()
            .zip(p.0.iter())
            .all(|(&a, &c)| c >= a && (c as u64) < a as u64 + side)
    }
}

/// Inclusive interval of codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeRange<C> {
    pub lo: C,
    pub hi: C,
}

impl<C: CodeWord> CodeRange<C> {
    #[inline]
    pub fn contains(&self, code: C) -> bool {
        self.lo <= code && code <= self.hi
    }

    /// `hi - lo + 1`, as a `u128` so the full 128-bit range does not wrap to 0
    /// silently (it saturates instead).
    pub fn len(&self) -> u128 {
        (self.hi.to_u128() - self.lo.to_u128()).saturating_add(1)
    }

    /// Always false: a range holds at least `lo`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_range(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}
