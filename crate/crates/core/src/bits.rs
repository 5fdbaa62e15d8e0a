//! Word-level primitives: carry-less multiplication, bit spreading and
//! truncated F2[x] products on packed words.

/// Carry-less 64x64 -> 128 bit product, returned as `(lo, hi)`.
#[inline(always)]
pub(crate) fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    // 4-bit windowed table on `a`.
    let a = a as u128;
    let mut table = [0u128; 16];
    for i in 1..16 {
        table[i] = if i & 1 == 0 {
            table[i >> 1] << 1
        } else {
            table[i - 1] ^ a
        };
    }
    let mut acc = 0u128;
    for shift in (0..64).step_by(4) {
        acc ^= table[((b >> shift) & 0xf) as usize] << shift;
    }
    (acc as u64, (acc >> 64) as u64)
}

#[cfg(target_arch = "x86_64")]
#[inline(always)]
unsafe fn clmul_hw(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::*;
    let x = _mm_set_epi64x(0, a as i64);
    let y = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(x, y, 0);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
    (lo, hi)
}

/// Returns true when the hardware carry-less multiply is usable.
#[inline]
pub(crate) fn have_hw_clmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// Carry-less product with runtime dispatch. Prefer the row kernels below in
/// hot loops; they dispatch once per call instead of per word.
#[inline]
pub fn clmul(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if have_hw_clmul() {
            // SAFETY: feature checked above.
            return unsafe { clmul_hw(a, b) };
        }
    }
    clmul_soft(a, b)
}

trait Clmul {
    fn mul(a: u64, b: u64) -> (u64, u64);
}

struct Soft;
impl Clmul for Soft {
    #[inline(always)]
    fn mul(a: u64, b: u64) -> (u64, u64) {
        clmul_soft(a, b)
    }
}

#[cfg(target_arch = "x86_64")]
struct Hw;
#[cfg(target_arch = "x86_64")]
impl Clmul for Hw {
    #[inline(always)]
    fn mul(a: u64, b: u64) -> (u64, u64) {
        // SAFETY: only instantiated inside `pclmulqdq`-enabled functions.
        unsafe { clmul_hw(a, b) }
    }
}

/// Truncated bivariate product on row-major tables.
///
/// `a` and `b` hold `m` rows of `w` words each (row = coefficient polynomial
/// in the second variable); `out` receives `a * b` truncated to `m` rows and
/// `m` bits per row. `out` must be zeroed by the caller.
pub(crate) fn mul_rows(a: &[u64], b: &[u64], out: &mut [u64], m: usize, w: usize) {
    #[cfg(target_arch = "x86_64")]
    {
        if have_hw_clmul() {
            // SAFETY: feature checked above.
            unsafe { mul_rows_hw(a, b, out, m, w) };
            return;
        }
    }
    mul_rows_impl::<Soft>(a, b, out, m, w);
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn mul_rows_hw(a: &[u64], b: &[u64], out: &mut [u64], m: usize, w: usize) {
    mul_rows_impl::<Hw>(a, b, out, m, w);
}

#[inline(always)]
fn mul_rows_impl<C: Clmul>(a: &[u64], b: &[u64], out: &mut [u64], m: usize, w: usize) {
    let mask = last_word_mask(m);
    let b_rows: Vec<usize> = (0..m)
        .filter(|&j| b[j * w..(j + 1) * w].iter().any(|&x| x != 0))
        .collect();
    for i in 0..m {
        let ra = &a[i * w..(i + 1) * w];
        if ra.iter().all(|&x| x == 0) {
            continue;
        }
        for &j in &b_rows {
            if i + j >= m {
                break;
            }
            let rb = &b[j * w..(j + 1) * w];
            let ro = &mut out[(i + j) * w..(i + j + 1) * w];
            if w == 1 {
                let (lo, _) = C::mul(ra[0], rb[0]);
                ro[0] ^= lo & mask;
            } else {
                for (p, &x) in ra.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (q, &y) in rb.iter().enumerate() {
                        if p + q >= w {
                            break;
                        }
                        let (lo, hi) = C::mul(x, y);
                        ro[p + q] ^= lo;
                        if p + q + 1 < w {
                            ro[p + q + 1] ^= hi;
                        }
                    }
                }
                ro[w - 1] &= mask;
            }
        }
    }
}

/// Truncated univariate product: `a * b mod x^bound`, both packed LSB-first.
pub(crate) fn mul_poly(a: &[u64], b: &[u64], bound: usize) -> Vec<u64> {
    let w = words_for(bound);
    let mut out = vec![0u64; w];
    for (p, &x) in a.iter().enumerate().take(w) {
        if x == 0 {
            continue;
        }
        for (q, &y) in b.iter().enumerate() {
            if p + q >= w {
                break;
            }
            if y == 0 {
                continue;
            }
            let (lo, hi) = clmul(x, y);
            out[p + q] ^= lo;
            if p + q + 1 < w {
                out[p + q + 1] ^= hi;
            }
        }
    }
    out[w - 1] &= last_word_mask(bound);
    out
}

/// Spreads the low 32 bits of `x` to the even bit positions.
#[inline]
pub(crate) fn spread32(x: u64) -> u64 {
    let mut x = x & 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64).max(1)
}

/// Mask of the valid bits in the last word of a `bits`-bit vector.
#[inline]
pub(crate) fn last_word_mask(bits: usize) -> u64 {
    match bits % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

#[inline]
pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i / 64] >> (i % 64)) & 1 == 1
}

#[inline]
pub(crate) fn flip_bit(words: &mut [u64], i: usize) {
    words[i / 64] ^= 1u64 << (i % 64);
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Iterator over set-bit positions.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            }
        })
    })
}

#[inline]
pub(crate) fn lowest_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .position(|&w| w != 0)
        .map(|i| i * 64 + words[i].trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clmul_naive(a: u64, b: u64) -> (u64, u64) {
        let mut lo = 0u64;
        let mut hi = 0u64;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                lo ^= a << i;
                if i > 0 {
                    hi ^= a >> (64 - i);
                }
            }
        }
        (lo, hi)
    }

    #[test]
    fn clmul_variants_agree_with_naive() {
        let samples = [
            0u64,
            1,
            3,
            0x8000_0000_0000_0000,
            0xffff_ffff_ffff_ffff,
            0xe000_0000_0000_0001,
            0x1234_5678_9abc_def0,
            0xdead_beef_cafe_f00d,
        ];
        for &a in &samples {
            for &b in &samples {
                assert_eq!(clmul_soft(a, b), clmul_naive(a, b), "soft {a:x} {b:x}");
                assert_eq!(clmul(a, b), clmul_naive(a, b), "dispatch {a:x} {b:x}");
            }
        }
    }

    #[test]
    fn spread_doubles_exponents() {
        assert_eq!(spread32(0b1011), 0b1000101);
        assert_eq!(spread32(1 << 31), 1 << 62);
    }

    #[test]
    fn ones_lists_positions() {
        let w = [0b101u64, 1 << 3];
        assert_eq!(ones(&w).collect::<Vec<_>>(), vec![0, 2, 67]);
        assert_eq!(lowest_one(&w), Some(0));
        assert_eq!(lowest_one(&[0, 0]), None);
    }
}
