//! Stable LSD radix sort of `(code, payload)` pairs by code.

use crate::code::CodeWord;

/// Below this size a comparison sort wins.
const SMALL: usize = 256;

/// Sorts by the low `key_bits` bits of the code, stably.
pub(crate) fn sort_by_code<C: CodeWord, T: Copy>(items: &mut Vec<(C, T)>, key_bits: u32) {
    let n = items.len();
    if n < SMALL {
        items.sort_by_key(|e| e.0);
        return;
    }
    let passes = key_bits.div_ceil(8) as usize;
    let mut counts = vec![[0usize; 256]; passes];
    for (code, _) in items.iter() {
        for (pass, c) in counts.iter_mut().enumerate() {
            c[digit(*code, pass)] += 1;
        }
    }
    let mut buf: Vec<(C, T)> = Vec::with_capacity(n);
    for (pass, count) in counts.iter().enumerate() {
        // all keys share this digit
        if count.contains(&n) {
            continue;
        }
        let mut offsets = [0usize; 256];
        let mut sum = 0;
        for (o, &c) in offsets.iter_mut().zip(count.iter()) {
            *o = sum;
            sum += c;
        }
        buf.clear();
        let dst = buf.spare_capacity_mut();
        for e in items.iter() {
            let d = digit(e.0, pass);
            dst[offsets[d]].write(*e);
            offsets[d] += 1;
        }
        // SAFETY: the offsets partition 0..n, so every slot was written once.
        unsafe { buf.set_len(n) };
        std::mem::swap(items, &mut buf);
    }
}

#[inline(always)]
fn digit<C: CodeWord>(code: C, pass: usize) -> usize {
    ((code >> (pass * 8)).low_u64() & 0xff) as usize
}
