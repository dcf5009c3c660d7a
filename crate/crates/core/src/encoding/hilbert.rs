//! Two-dimensional Hilbert codes via the iterative rotate-and-reflect
//! construction.
//!
//! Orientation: the order-1 curve visits (0,0), (0,1), (1,1), (1,0).

use crate::code::CodeWord;

#[inline(always)]
pub(crate) fn encode_raw<C: CodeWord>(x: u32, y: u32, omega: u32) -> C {
    let (mut x, mut y) = (x, y);
    let mut code = C::zero();
    for level in (0..omega).rev() {
        let rx = (x >> level) & 1;
        let ry = (y >> level) & 1;
        code = (code << 2) | C::from_u64(((3 * rx) ^ ry) as u64);
        if ry == 0 {
            if rx == 1 {
                // Only bits below `level` are read from here on.
                x = !x;
                y = !y;
            }
            std::mem::swap(&mut x, &mut y);
        }
    }
    code
}

#[inline]
pub(crate) fn decode_raw<C: CodeWord>(code: C, omega: u32) -> (u32, u32) {
    let (mut x, mut y) = (0u32, 0u32);
    let mut t = code;
    let three = C::from_u64(3);
    for level in 0..omega {
        let quad = (t & three).low_u64() as u32;
        let rx = (quad >> 1) & 1;
        let ry = (quad ^ rx) & 1;
        if ry == 0 {
            if rx == 1 {
                let top = ((1u64 << level) - 1) as u32;
                x = top - x;
                y = top - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        x |= rx << level;
        y |= ry << level;
        t = t >> 2;
    }
    (x, y)
}
