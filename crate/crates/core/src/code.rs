//! Fixed-width unsigned code words.

use std::fmt::Debug;
use std::hash::Hash;

use num_traits::{PrimInt, Unsigned};

/// An unsigned integer wide enough to hold a `D * omega` bit curve code.
///
/// Integer order on code words is the order along the curve, because codes
/// are built most-significant bit first.
pub trait CodeWord: PrimInt + Unsigned + Hash + Debug + Default + Send + Sync + 'static {
    const BITS: u32;

    /// Truncating conversion; callers guarantee the value fits.
    fn from_u64(v: u64) -> Self;

    /// Truncating conversion to the low 64 bits.
    fn low_u64(self) -> u64;

    fn to_u128(self) -> u128;

    /// All-ones in the low `bits` bits (saturating at the full width).
    #[inline]
    fn low_mask(bits: u32) -> Self {
        if bits >= Self::BITS {
            Self::max_value()
        } else {
            (Self::one() << bits as usize) - Self::one()
        }
    }
}

macro_rules! impl_code_word {
    ($($t:ty),*) => {$(
        impl CodeWord for $t {
            const BITS: u32 = <$t>::BITS;

            #[inline(always)]
            fn from_u64(v: u64) -> Self {
                v as $t
            }

            #[inline(always)]
            fn low_u64(self) -> u64 {
                self as u64
            }

            #[inline(always)]
            fn to_u128(self) -> u128 {
                self as u128
            }
        }
    )*};
}

impl_code_word!(u16, u32, u64, u128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_mask_saturates() {
        assert_eq!(u64::low_mask(0), 0);
        assert_eq!(u64::low_mask(4), 0xf);
        assert_eq!(u64::low_mask(64), u64::MAX);
        assert_eq!(u16::low_mask(20), u16::MAX);
        assert_eq!(u128::low_mask(100), (1u128 << 100) - 1);
    }
}
