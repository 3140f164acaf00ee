use super::LimbNumber;
use crate::error::{Error, Result};

/// `119 * 2^23 + 1`.
pub const NTT_MODULUS: u64 = 998_244_353;
/// Primitive root of [`NTT_MODULUS`].
pub const NTT_GENERATOR: u64 = 3;
const TWO_ADICITY: u32 = (NTT_MODULUS - 1).trailing_zeros();

/// Largest digit width tried when slicing operands into coefficients.
const MAX_CHUNK_BITS: u32 = 16;

fn mul_mod(a: u64, b: u64) -> u64 {
    a * b % NTT_MODULUS
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    base %= NTT_MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Precomputed radix-2 transform of one power-of-two length.
#[derive(Clone, Debug)]
pub struct NttPlan {
    length: usize,
    root: u64,
    length_inv: u64,
    /// `root^k` for `k < length / 2`.
    twiddles: Vec<u64>,
    /// `root^-k` for `k < length / 2`.
    inverse_twiddles: Vec<u64>,
}

/// Plan for the smallest power-of-two length `>= max_coeff_count`.
pub fn plan_ntt(max_coeff_count: usize) -> Result<NttPlan> {
    let capacity = 1usize << TWO_ADICITY;
    let length = max_coeff_count.max(1).next_power_of_two();
    if length > capacity {
        return Err(Error::NttCapacity {
            requested: max_coeff_count,
            capacity,
        });
    }
    let root = pow_mod(NTT_GENERATOR, (NTT_MODULUS - 1) / length as u64);
    let root_inv = pow_mod(root, NTT_MODULUS - 2);
    let powers = |base: u64| {
        let mut table = Vec::with_capacity(length / 2);
        let mut w = 1;
        for _ in 0..length / 2 {
            table.push(w);
            w = mul_mod(w, base);
        }
        table
    };
    Ok(NttPlan {
        length,
        root,
        length_inv: pow_mod(length as u64, NTT_MODULUS - 2),
        twiddles: powers(root),
        inverse_twiddles: powers(root_inv),
    })
}

impl NttPlan {
    pub fn length(&self) -> usize {
        self.length
    }

    /// Primitive `length`-th root of unity.
    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn modulus(&self) -> u64 {
        NTT_MODULUS
    }

    pub fn forward(&self, values: &mut [u64]) {
        self.transform(values, &self.twiddles);
    }

    pub fn inverse(&self, values: &mut [u64]) {
        self.transform(values, &self.inverse_twiddles);
        for v in values.iter_mut() {
            *v = mul_mod(*v, self.length_inv);
        }
    }

    /// Iterative Cooley-Tukey: bit-reversal permutation, then butterflies of
    /// doubling span.
    fn transform(&self, values: &mut [u64], twiddles: &[u64]) {
        let n = self.length;
        assert_eq!(values.len(), n, "input length must match the plan");
        if n == 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                values.swap(i, j);
            }
        }
        let mut span = 1;
        while span < n {
            let stride = n / (2 * span);
            for start in (0..n).step_by(2 * span) {
                for k in 0..span {
                    let w = twiddles[k * stride];
                    let u = values[start + k];
                    let v = mul_mod(values[start + k + span], w);
                    values[start + k] = if u + v >= NTT_MODULUS { u + v - NTT_MODULUS } else { u + v };
                    values[start + k + span] = if u >= v { u - v } else { u + NTT_MODULUS - v };
                }
            }
            span *= 2;
        }
    }
}

/// Widest digit size for which no convolution sum can wrap the modulus.
fn chunk_width(a_bits: u64, b_bits: u64) -> Option<(u32, usize)> {
    let capacity = 1u64 << TWO_ADICITY;
    (1..=MAX_CHUNK_BITS).rev().find_map(|width| {
        let na = a_bits.div_ceil(u64::from(width));
        let nb = b_bits.div_ceil(u64::from(width));
        let terms = u128::from(na.min(nb));
        let digit = (1u128 << width) - 1;
        let len = na + nb - 1;
        (terms * digit * digit < u128::from(NTT_MODULUS) && len <= capacity)
            .then_some((width, len as usize))
    })
}

/// Product through forward transforms, pointwise multiplication, inverse
/// transform and carry propagation.
pub fn ntt_mul(a: &LimbNumber, b: &LimbNumber) -> Result<LimbNumber> {
    if a.is_zero() || b.is_zero() {
        return Ok(LimbNumber::default());
    }
    let (width, len) = chunk_width(a.bits(), b.bits()).ok_or(Error::NttCapacity {
        requested: (a.bits() + b.bits()) as usize,
        capacity: 1 << TWO_ADICITY,
    })?;
    let plan = plan_ntt(len)?;
    let mut fa = a.to_chunks(width);
    let mut fb = b.to_chunks(width);
    fa.resize(plan.length(), 0);
    fb.resize(plan.length(), 0);
    plan.forward(&mut fa);
    plan.forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul_mod(*x, *y);
    }
    plan.inverse(&mut fa);
    fa.truncate(len);
    Ok(LimbNumber::from_chunks(&fa, width))
}
