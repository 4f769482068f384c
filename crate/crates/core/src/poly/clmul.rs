//! 64x64 -> 128 bit carry-less multiplication.
//!
//! On x86_64 with PCLMULQDQ the hardware instruction is used; everything else
//! goes through the portable shift-and-xor kernel.

/// Portable carry-less product, returned as `(low, high)` words.
#[inline]
pub fn clmul64_soft(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        rest &= rest - 1;
    }
    (lo, hi)
}

#[cfg(target_arch = "x86_64")]
mod hw {
    use std::sync::OnceLock;

    pub fn available() -> bool {
        static HAS: OnceLock<bool> = OnceLock::new();
        *HAS.get_or_init(|| {
            std::is_x86_feature_detected!("pclmulqdq") && std::is_x86_feature_detected!("sse2")
        })
    }

    #[target_feature(enable = "pclmulqdq,sse2")]
    pub unsafe fn clmul64(a: u64, b: u64) -> (u64, u64) {
        use std::arch::x86_64::*;
        let va = _mm_set_epi64x(0, a as i64);
        let vb = _mm_set_epi64x(0, b as i64);
        let r = _mm_clmulepi64_si128::<0x00>(va, vb);
        let lo = _mm_cvtsi128_si64(r) as u64;
        let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
        (lo, hi)
    }
}

/// Carry-less product using the fastest kernel available on this machine.
#[inline]
pub fn clmul64(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if hw::available() {
            // SAFETY: the required CPU features were detected at runtime.
            return unsafe { hw::clmul64(a, b) };
        }
    }
    clmul64_soft(a, b)
}

/// Spreads the low 32 bits of `w` to the even bit positions (squaring in GF(2)[x]).
#[inline]
pub fn spread32(w: u64) -> u64 {
    let mut x = w & 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bitwise(a: u64, b: u64) -> u128 {
        let mut acc = 0u128;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                acc ^= (a as u128) << i;
            }
        }
        acc
    }

    #[test]
    fn kernels_agree_with_bitwise_product() {
        let samples = [
            0u64,
            1,
            7,
            0x8000_0000_0000_0001,
            u64::MAX,
            0xdead_beef_cafe_f00d,
            0x0123_4567_89ab_cdef,
        ];
        for &a in &samples {
            for &b in &samples {
                let want = bitwise(a, b);
                let (lo, hi) = clmul64_soft(a, b);
                assert_eq!(((hi as u128) << 64) | lo as u128, want);
                let (lo, hi) = clmul64(a, b);
                assert_eq!(((hi as u128) << 64) | lo as u128, want);
            }
        }
    }

    #[test]
    fn spread_matches_self_product() {
        for w in [0u64, 1, 0b111, 0xffff_ffff, 0x1234_5678] {
            let (lo, hi) = clmul64_soft(w, w);
            assert_eq!(hi, 0);
            assert_eq!(spread32(w), lo);
        }
    }
}
