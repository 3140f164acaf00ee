//! Little-endian `u64` limb accumulator shared by the reconstruct and
//! product paths.

use num_bigint::BigUint;

#[derive(Debug, Default, Clone)]
pub(crate) struct LimbAccumulator {
    limbs: Vec<u64>,
}

impl LimbAccumulator {
    /// Accumulator sized to hold bits `0..=top_bit` without growing.
    pub(crate) fn with_top_bit(top_bit: u64) -> Self {
        let words = usize::try_from(top_bit / 64 + 1).expect("index exceeds address space");
        LimbAccumulator {
            limbs: vec![0; words + 1],
        }
    }

    /// Adds `2^bit`, rippling the carry upward.
    #[inline]
    pub(crate) fn add_power_of_two(&mut self, bit: u64) {
        let mut word = (bit / 64) as usize;
        let mut addend = 1u64 << (bit % 64);
        loop {
            if word >= self.limbs.len() {
                self.limbs.resize(word + 1, 0);
            }
            let (sum, carry) = self.limbs[word].overflowing_add(addend);
            self.limbs[word] = sum;
            if !carry {
                return;
            }
            addend = 1;
            word += 1;
        }
    }

    /// Two's-complement limb addition of another little-endian value.
    pub(crate) fn add_limbs(&mut self, other: &[u64]) {
        if other.len() >= self.limbs.len() {
            self.limbs.resize(other.len() + 1, 0);
        }
        let mut carry = false;
        for (k, &limb) in other.iter().enumerate() {
            let (s1, c1) = self.limbs[k].overflowing_add(limb);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            self.limbs[k] = s2;
            carry = c1 | c2;
        }
        let mut k = other.len();
        while carry {
            if k == self.limbs.len() {
                self.limbs.push(0);
            }
            let (s, c) = self.limbs[k].overflowing_add(1);
            self.limbs[k] = s;
            carry = c;
            k += 1;
        }
    }

    pub(crate) fn into_biguint(self) -> BigUint {
        limbs_to_biguint(&self.limbs)
    }
}

pub(crate) fn limbs_to_biguint(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &limb in limbs {
        digits.push(limb as u32);
        digits.push((limb >> 32) as u32);
    }
    BigUint::new(digits)
}
