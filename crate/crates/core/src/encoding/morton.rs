//! Z-order (Morton) codes by bit interleaving.
//!
//! Bit `i` of every coordinate (counting from the most significant of the
//! `omega` bits) lands in output group `i`, axis 0 first. For two dimensions
//! that puts x in the odd and y in the even bit positions.

use crate::code::CodeWord;

#[inline(always)]
fn spread2(v: u32) -> u64 {
    let mut x = v as u64;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[inline(always)]
fn compact2(v: u64) -> u32 {
    let mut x = v & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x >> 4)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x >> 8)) & 0x0000_ffff_0000_ffff;
    x = (x | (x >> 16)) & 0x0000_0000_ffff_ffff;
    x as u32
}

/// Interleaves `coords`; coordinates must already be `< 2^omega`.
#[inline(always)]
pub(crate) fn encode_raw<C: CodeWord, const D: usize>(coords: &[u32; D], omega: u32) -> C {
    if D == 2 {
        // Bits above omega are zero, so interleaving all 32 bits gives the
        // same low 2*omega bits.
        return C::from_u64((spread2(coords[0]) << 1) | spread2(coords[1]));
    }
    let mut code = C::zero();
    for bit in (0..omega).rev() {
        for &c in coords {
            code = (code << 1) | C::from_u64(((c >> bit) & 1) as u64);
        }
    }
    code
}

/// Inverse of [`encode_raw`]; `code` must be `< 2^(D*omega)`.
#[inline]
pub(crate) fn decode_raw<C: CodeWord, const D: usize>(code: C, omega: u32) -> [u32; D] {
    let mut out = [0u32; D];
    if D == 2 {
        let v = code.low_u64();
        out[0] = compact2(v >> 1);
        out[1] = compact2(v);
        return out;
    }
    let one = C::one();
    for bit in 0..omega {
        for (axis, o) in out.iter_mut().enumerate() {
            let pos = bit as usize * D + (D - 1 - axis);
            if (code >> pos) & one == one {
                *o |= 1 << bit;
            }
        }
    }
    out
}
