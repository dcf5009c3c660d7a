//! Curve codecs and cell code ranges.
//!
//! Both curves are recursive: the points of a level-`l` quadtree cell share
//! the top `D * (omega - l)` code bits, so each cell maps to one contiguous
//! code interval.

pub(crate) mod hilbert;
pub(crate) mod morton;

use std::fmt;
use std::str::FromStr;

use crate::code::CodeWord;
use crate::error::{Error, Result};
use crate::geometry::{Cell, Code, CodeRange, Domain, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// Z-order / Morton curve.
    Z,
    /// Hilbert curve (two dimensions only).
    Hilbert,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Z => "z",
            CurveKind::Hilbert => "hilbert",
        }
    }

    pub fn supports_dims(self, dims: usize) -> bool {
        match self {
            CurveKind::Z => (2..=4).contains(&dims),
            CurveKind::Hilbert => dims == 2,
        }
    }

    pub(crate) fn check_dims(self, dims: usize) -> Result<()> {
        if self.supports_dims(dims) {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension {
                curve: self.name(),
                dims,
            })
        }
    }

    pub fn encode<C: CodeWord, const D: usize>(self, p: &Point<D>, dom: &Domain<D>) -> Result<Code<C>> {
        match self {
            CurveKind::Z => morton_encode(p, dom),
            CurveKind::Hilbert => hilbert_encode(p, dom),
        }
    }

    pub fn decode<C: CodeWord, const D: usize>(self, code: Code<C>, dom: &Domain<D>) -> Result<Point<D>> {
        match self {
            CurveKind::Z => morton_decode(code, dom),
            CurveKind::Hilbert => hilbert_decode(code, dom),
        }
    }

    /// Encodes a point already known to be valid. Hilbert requires `D == 2`.
    #[inline(always)]
    pub(crate) fn encode_unchecked<C: CodeWord, const D: usize>(self, p: &Point<D>, omega: u32) -> C {
        match self {
            CurveKind::Z => morton::encode_raw(&p.0, omega),
            CurveKind::Hilbert => hilbert::encode_raw(p.0[0], p.0[1], omega),
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "morton" | "zorder" | "z-order" => Ok(CurveKind::Z),
            "h" | "hilbert" => Ok(CurveKind::Hilbert),
            _ => Err(Error::Config(format!("unknown curve `{s}`"))),
        }
    }
}

fn check_code<C: CodeWord, const D: usize>(code: C, dom: &Domain<D>) -> Result<()> {
    dom.check_code_width::<C>()?;
    if code > C::low_mask(dom.code_bits()) {
        return Err(Error::CodeOutOfRange {
            code: code.to_u128(),
            bits: dom.code_bits(),
        });
    }
    Ok(())
}

pub fn morton_encode<C: CodeWord, const D: usize>(p: &Point<D>, dom: &Domain<D>) -> Result<Code<C>> {
    dom.check_code_width::<C>()?;
    dom.check_point(0, p)?;
    Ok(Code(morton::encode_raw(&p.0, dom.omega())))
}

pub fn morton_decode<C: CodeWord, const D: usize>(code: Code<C>, dom: &Domain<D>) -> Result<Point<D>> {
    check_code(code.0, dom)?;
    Ok(Point(morton::decode_raw(code.0, dom.omega())))
}

pub fn hilbert_encode<C: CodeWord, const D: usize>(p: &Point<D>, dom: &Domain<D>) -> Result<Code<C>> {
    CurveKind::Hilbert.check_dims(D)?;
    dom.check_code_width::<C>()?;
    dom.check_point(0, p)?;
    Ok(Code(hilbert::encode_raw(p.0[0], p.0[1], dom.omega())))
}

pub fn hilbert_decode<C: CodeWord, const D: usize>(code: Code<C>, dom: &Domain<D>) -> Result<Point<D>> {
    CurveKind::Hilbert.check_dims(D)?;
    check_code(code.0, dom)?;
    let (x, y) = hilbert::decode_raw(code.0, dom.omega());
    let mut out = [0u32; D];
    out[0] = x;
    out[1] = y;
    Ok(Point(out))
}

/// `[prefix ∘ 0…0, prefix ∘ 1…1]` for a valid cell.
#[inline]
pub(crate) fn cell_range_unchecked<C: CodeWord, const D: usize>(
    cell: &Cell<D>,
    omega: u32,
    curve: CurveKind,
) -> CodeRange<C> {
    let mask = C::low_mask(D as u32 * cell.level);
    let lo = curve.encode_unchecked::<C, D>(&cell.anchor, omega) & !mask;
    CodeRange { lo, hi: lo | mask }
}

/// The inclusive code interval owned by `cell`: every grid point inside the
/// cell encodes into it and no point outside does.
pub fn cell_code_range<C: CodeWord, const D: usize>(
    cell: &Cell<D>,
    dom: &Domain<D>,
    curve: CurveKind,
) -> Result<CodeRange<C>> {
    curve.check_dims(D)?;
    dom.check_code_width::<C>()?;
    if !cell.is_valid(dom) {
        return Err(Error::Config(format!("{cell:?} is not a cell of the domain")));
    }
    Ok(cell_range_unchecked(cell, dom.omega(), curve))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(omega: u32) -> Domain<2> {
        Domain::new(omega).unwrap()
    }

    #[test]
    fn morton_examples() {
        let d = dom(2);
        assert_eq!(morton_encode::<u64, 2>(&Point([0, 0]), &d).unwrap(), Code(0));
        assert_eq!(morton_encode::<u64, 2>(&Point([3, 3]), &d).unwrap(), Code(15));
        assert_eq!(morton_encode::<u64, 2>(&Point([2, 3]), &d).unwrap(), Code(13));
        assert_eq!(morton_decode::<u64, 2>(Code(0), &d).unwrap(), Point([0, 0]));
        assert_eq!(morton_decode::<u64, 2>(Code(13), &d).unwrap(), Point([2, 3]));
        assert_eq!(morton_decode::<u64, 2>(Code(15), &d).unwrap(), Point([3, 3]));
    }

    #[test]
    fn morton_errors() {
        let d = dom(2);
        assert!(matches!(
            morton_encode::<u64, 2>(&Point([4, 0]), &d),
            Err(Error::DomainViolation { axis: 0, value: 4, .. })
        ));
        assert!(matches!(
            morton_decode::<u64, 2>(Code(16), &d),
            Err(Error::CodeOutOfRange { code: 16, bits: 4 })
        ));
        // 2 * 32 bits do not fit a u32 code
        assert!(morton_encode::<u32, 2>(&Point([0, 0]), &dom(32)).is_err());
    }

    #[test]
    fn hilbert_anchors() {
        let d = dom(1);
        assert_eq!(hilbert_decode::<u64, 2>(Code(0), &d).unwrap(), Point([0, 0]));
        assert_eq!(hilbert_decode::<u64, 2>(Code(3), &d).unwrap(), Point([1, 0]));
        assert_eq!(hilbert_encode::<u64, 2>(&Point([1, 1]), &d).unwrap(), Code(2));
    }

    #[test]
    fn hilbert_rejects_other_dims() {
        let d3 = Domain::<3>::new(4).unwrap();
        assert!(matches!(
            hilbert_encode::<u64, 3>(&Point([0, 0, 0]), &d3),
            Err(Error::UnsupportedDimension { dims: 3, .. })
        ));
        assert!(hilbert_decode::<u64, 3>(Code(0), &d3).is_err());
        assert!("hilbert".parse::<CurveKind>().unwrap().check_dims(3).is_err());
    }

    #[test]
    fn cell_range_examples() {
        let d = dom(2);
        for curve in [CurveKind::Z, CurveKind::Hilbert] {
            let root = cell_code_range::<u64, 2>(&d.root_cell(), &d, curve).unwrap();
            assert_eq!((root.lo, root.hi), (0, 15));
            let p = Point([2, 1]);
            let unit = Cell { level: 0, anchor: p };
            let r = cell_code_range::<u64, 2>(&unit, &d, curve).unwrap();
            let c = curve.encode::<u64, 2>(&p, &d).unwrap().0;
            assert_eq!((r.lo, r.hi), (c, c));
        }
        let cell = Cell { level: 1, anchor: Point([2, 2]) };
        let r = cell_code_range::<u64, 2>(&cell, &d, CurveKind::Z).unwrap();
        assert_eq!((r.lo, r.hi), (12, 15));
    }

    #[test]
    fn full_width_root_range() {
        let d = dom(32);
        let r = cell_code_range::<u64, 2>(&d.root_cell(), &d, CurveKind::Z).unwrap();
        assert_eq!((r.lo, r.hi), (0, u64::MAX));
        let bad = Cell { level: 1, anchor: Point([1, 0]) };
        assert!(cell_code_range::<u64, 2>(&bad, &d, CurveKind::Z).is_err());
    }
}
