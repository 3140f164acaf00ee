use super::{schoolbook_into, trim, LimbNumber};

/// Operands at or below this many limbs fall back to schoolbook.
pub const DEFAULT_KARATSUBA_CUTOFF: usize = 32;

pub fn karatsuba_mul(a: &LimbNumber, b: &LimbNumber) -> LimbNumber {
    karatsuba_mul_with(a, b, DEFAULT_KARATSUBA_CUTOFF)
}

pub fn karatsuba_mul_with(a: &LimbNumber, b: &LimbNumber, cutoff: usize) -> LimbNumber {
    if a.is_zero() || b.is_zero() {
        return LimbNumber::default();
    }
    let mut out = vec![0u32; a.limbs().len() + b.limbs().len()];
    mul_into(a.limbs(), b.limbs(), &mut out, cutoff.max(1));
    LimbNumber::from_limbs(out)
}

/// Adds `a * b` into `out[..a.len() + b.len()]`.
fn mul_into(a: &[u32], b: &[u32], out: &mut [u32], cutoff: usize) {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.len() <= cutoff {
        schoolbook_into(long, short, out);
        return;
    }
    let half = long.len().div_ceil(2);
    if short.len() <= half {
        // Unbalanced: slice the long operand into short-sized blocks.
        for (k, block) in long.chunks(short.len()).enumerate() {
            let offset = k * short.len();
            let mut partial = vec![0u32; block.len() + short.len()];
            mul_into(block, short, &mut partial, cutoff);
            add_into(&mut out[offset..], &partial);
        }
        return;
    }

    let (a0, a1) = long.split_at(half);
    let (b0, b1) = short.split_at(half);

    let mut z0 = vec![0u32; a0.len() + b0.len()];
    mul_into(a0, b0, &mut z0, cutoff);
    let mut z2 = vec![0u32; a1.len() + b1.len()];
    mul_into(a1, b1, &mut z2, cutoff);

    let sa = add_slices(a0, a1);
    let sb = add_slices(b0, b1);
    let mut z1 = vec![0u32; sa.len() + sb.len()];
    mul_into(&sa, &sb, &mut z1, cutoff);
    sub_assign(&mut z1, &z0);
    sub_assign(&mut z1, &z2);
    trim(&mut z1);
    trim(&mut z0);
    trim(&mut z2);

    add_into(out, &z0);
    add_into(&mut out[half..], &z1);
    add_into(&mut out[2 * half..], &z2);
}

fn add_slices(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = Vec::with_capacity(long.len() + 1);
    let mut carry = 0u64;
    for (k, &x) in long.iter().enumerate() {
        let t = u64::from(x) + u64::from(short.get(k).copied().unwrap_or(0)) + carry;
        out.push(t as u32);
        carry = t >> 32;
    }
    if carry != 0 {
        out.push(carry as u32);
    }
    out
}

/// `dst += src`; the sum must fit in `dst`.
fn add_into(dst: &mut [u32], src: &[u32]) {
    let mut carry = 0u64;
    for (k, &x) in src.iter().enumerate() {
        let t = u64::from(dst[k]) + u64::from(x) + carry;
        dst[k] = t as u32;
        carry = t >> 32;
    }
    let mut k = src.len();
    while carry != 0 {
        let t = u64::from(dst[k]) + carry;
        dst[k] = t as u32;
        carry = t >> 32;
        k += 1;
    }
}

/// `dst -= src`; requires `dst >= src`.
fn sub_assign(dst: &mut [u32], src: &[u32]) {
    let mut borrow = 0i64;
    for (k, d) in dst.iter_mut().enumerate() {
        let t = i64::from(*d) - i64::from(src.get(k).copied().unwrap_or(0)) - borrow;
        if t < 0 {
            *d = (t + (1 << 32)) as u32;
            borrow = 1;
        } else {
            *d = t as u32;
            borrow = 0;
        }
        if k >= src.len() && borrow == 0 {
            break;
        }
    }
    debug_assert_eq!(borrow, 0);
}
