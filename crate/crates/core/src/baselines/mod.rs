//! Coefficient-form reference multipliers: schoolbook, Karatsuba and a
//! single-prime NTT. They share the [`LimbNumber`] representation and
//! serve both as correctness oracles and as benchmark comparators.

mod karatsuba;
mod ntt;

use num_bigint::BigUint;

pub use karatsuba::{karatsuba_mul, karatsuba_mul_with, DEFAULT_KARATSUBA_CUTOFF};
pub use ntt::{ntt_mul, plan_ntt, NttPlan, NTT_GENERATOR, NTT_MODULUS};

/// Limb width in bits.
pub const LIMB_BITS: u32 = 32;

/// Little-endian `u32` limbs with no leading zero limb; zero has no limbs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LimbNumber {
    limbs: Vec<u32>,
}

impl LimbNumber {
    pub fn from_limbs(mut limbs: Vec<u32>) -> Self {
        trim(&mut limbs);
        LimbNumber { limbs }
    }

    pub fn limbs(&self) -> &[u32] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn bits(&self) -> u64 {
        match self.limbs.last() {
            None => 0,
            Some(&top) => {
                (self.limbs.len() as u64 - 1) * u64::from(LIMB_BITS)
                    + u64::from(LIMB_BITS - top.leading_zeros())
            }
        }
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        LimbNumber::from_limbs(n.to_u32_digits())
    }

    pub fn to_biguint(&self) -> BigUint {
        BigUint::from_slice(&self.limbs)
    }

    /// Re-slices the value into `width`-bit digits (1..=32), little-endian.
    pub fn to_chunks(&self, width: u32) -> Vec<u64> {
        assert!((1..=LIMB_BITS).contains(&width));
        let count = self.bits().div_ceil(u64::from(width)) as usize;
        let mask = (1u64 << width) - 1;
        (0..count)
            .map(|k| {
                let bit = k as u64 * u64::from(width);
                let word = (bit / 64) as usize;
                let shift = bit % 64;
                let lo = self.u64_word(word) >> shift;
                let hi = if shift == 0 { 0 } else { self.u64_word(word + 1) << (64 - shift) };
                (lo | hi) & mask
            })
            .collect()
    }

    /// Inverse of [`to_chunks`](Self::to_chunks), except that the digits may
    /// exceed `width` bits; the excess is carried upward.
    pub fn from_chunks(chunks: &[u64], width: u32) -> Self {
        assert!((1..=LIMB_BITS).contains(&width));
        let total_bits = chunks.len() as u64 * u64::from(width) + 64;
        let mut limbs = vec![0u32; total_bits.div_ceil(u64::from(LIMB_BITS)) as usize + 1];
        let mut carry: u128 = 0;
        let mut acc: u128 = 0;
        let mut acc_bits = 0u32;
        let mut out = 0usize;
        let mask = (1u128 << width) - 1;
        for &chunk in chunks {
            carry += u128::from(chunk);
            acc |= (carry & mask) << acc_bits;
            carry >>= width;
            acc_bits += width;
            while acc_bits >= LIMB_BITS {
                limbs[out] = acc as u32;
                out += 1;
                acc >>= LIMB_BITS;
                acc_bits -= LIMB_BITS;
            }
        }
        acc |= carry << acc_bits;
        while acc != 0 {
            limbs[out] = acc as u32;
            out += 1;
            acc >>= LIMB_BITS;
        }
        LimbNumber::from_limbs(limbs)
    }

    fn u64_word(&self, word: usize) -> u64 {
        let lo = self.limbs.get(2 * word).copied().unwrap_or(0);
        let hi = self.limbs.get(2 * word + 1).copied().unwrap_or(0);
        u64::from(lo) | (u64::from(hi) << 32)
    }
}

impl From<u64> for LimbNumber {
    fn from(value: u64) -> Self {
        LimbNumber::from_limbs(vec![value as u32, (value >> 32) as u32])
    }
}

pub(crate) fn trim(limbs: &mut Vec<u32>) {
    while limbs.last() == Some(&0) {
        limbs.pop();
    }
}

/// O(n·m) long multiplication with 64-bit accumulation.
pub fn schoolbook_mul(a: &LimbNumber, b: &LimbNumber) -> LimbNumber {
    if a.is_zero() || b.is_zero() {
        return LimbNumber::default();
    }
    let mut out = vec![0u32; a.limbs.len() + b.limbs.len()];
    schoolbook_into(&a.limbs, &b.limbs, &mut out);
    LimbNumber::from_limbs(out)
}

/// Adds `a * b` into `out`, which must hold `a.len() + b.len()` limbs.
pub(crate) fn schoolbook_into(a: &[u32], b: &[u32], out: &mut [u32]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let mut carry = 0u64;
        for (j, &y) in b.iter().enumerate() {
            let t = u64::from(x) * u64::from(y) + u64::from(out[i + j]) + carry;
            out[i + j] = t as u32;
            carry = t >> 32;
        }
        let mut k = i + b.len();
        while carry != 0 {
            let t = u64::from(out[k]) + carry;
            out[k] = t as u32;
            carry = t >> 32;
            k += 1;
        }
    }
}
