//! Conversion between integers and sparse radix-2 index lists.
//!
//! An [`IndexList`] stores only the exponents `k` where bit `k` of the
//! integer is set, most significant first. Zero is the empty list.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::accum::LimbAccumulator;
use crate::error::{Error, Result};

/// Largest index an entry may hold. Index sums must stay inside a signed
/// machine word, so everything at or above `2^63 - 1` is rejected.
pub const MAX_INDEX: u64 = (1 << 63) - 2;

/// Canonical index list: strictly decreasing exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct IndexList(Vec<u64>);

impl IndexList {
    /// Validates `indices` as strictly decreasing and within [`MAX_INDEX`].
    pub fn new(indices: Vec<u64>) -> Result<Self> {
        if let Some(&top) = indices.first() {
            if top > MAX_INDEX {
                return Err(Error::IndexOverflow(top as u128));
            }
        }
        if let Some(pos) = indices.windows(2).position(|w| w[0] <= w[1]) {
            return Err(Error::InvalidIndexList(format!(
                "entries must be strictly decreasing, found {} then {} at position {}",
                indices[pos],
                indices[pos + 1],
                pos + 1
            )));
        }
        Ok(IndexList(indices))
    }

    pub(crate) fn from_canonical(indices: Vec<u64>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] > w[1]));
        IndexList(indices)
    }

    /// Builds a list from entries in any order; duplicates are rejected.
    pub fn from_unsorted(mut indices: Vec<u64>) -> Result<Self> {
        indices.sort_unstable_by(|a, b| b.cmp(a));
        IndexList::new(indices)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The most significant index, `None` for zero.
    pub fn leading(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.0.iter()
    }

    pub fn contains(&self, index: u64) -> bool {
        self.0.binary_search_by(|probe| index.cmp(probe)).is_ok()
    }

    pub fn to_biguint(&self) -> BigUint {
        reconstruct_sum(&self.0)
    }
}

impl TryFrom<Vec<u64>> for IndexList {
    type Error = Error;

    fn try_from(value: Vec<u64>) -> Result<Self> {
        IndexList::new(value)
    }
}

impl From<IndexList> for Vec<u64> {
    fn from(value: IndexList) -> Self {
        value.0
    }
}

impl AsRef<[u64]> for IndexList {
    fn as_ref(&self) -> &[u64] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a IndexList {
    type Item = &'a u64;
    type IntoIter = std::slice::Iter<'a, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for IndexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, index) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{index}")?;
        }
        f.write_str("]")
    }
}

/// Accepts a JSON array (`[6,5,0]`) or a bare comma-separated list (`6,5,0`).
impl FromStr for IndexList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let body = match trimmed.strip_prefix('[') {
            Some(rest) => rest
                .strip_suffix(']')
                .ok_or_else(|| Error::InvalidIndexList("unterminated '['".into()))?,
            None => trimmed,
        };
        if body.trim().is_empty() {
            return Ok(IndexList::default());
        }
        let entries = body
            .split(',')
            .map(|item| {
                let item = item.trim();
                if item.is_empty() || !item.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::InvalidIndexList(format!(
                        "entry {item:?} is not a non-negative integer"
                    )));
                }
                item.parse::<u64>()
                    .map_err(|_| Error::InvalidIndexList(format!("entry {item} is too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        IndexList::new(entries)
    }
}

/// Coefficient bit vector, least significant bit first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positions holding a 1, highest first.
    pub fn set_positions(&self) -> Vec<u64> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &bit)| bit == 1)
            .map(|(k, _)| k as u64)
            .collect()
    }
}

/// Coefficients `C_k` of `n = Σ C_k 2^k`, emitted up to the most
/// significant 1. Zero gives an empty vector.
pub fn divide_by_2(n: &BigUint) -> BitVector {
    let len = n.bits();
    let mut bits = Vec::with_capacity(len as usize);
    for (word, limb) in n.iter_u64_digits().enumerate() {
        let remaining = len - word as u64 * 64;
        for b in 0..remaining.min(64) {
            bits.push(((limb >> b) & 1) as u8);
        }
    }
    BitVector(bits)
}

/// Exact `floor(log2(n))` for `n >= 1`.
pub fn ilog2(n: &BigUint) -> Result<u64> {
    match n.bits() {
        0 => Err(Error::ZeroLogarithm),
        len => Ok(len - 1),
    }
}

/// Index list of `n`, most significant index first.
///
/// Peeling off `2^ilog2(rest)` until nothing is left visits exactly the set
/// bits from the top, so the scan walks limbs from the high end.
pub fn deconstruct(n: &BigUint) -> IndexList {
    let limbs: Vec<u64> = n.iter_u64_digits().collect();
    let weight: u32 = limbs.iter().map(|l| l.count_ones()).sum();
    let mut indices = Vec::with_capacity(weight as usize);
    for (word, &limb) in limbs.iter().enumerate().rev() {
        let mut rest = limb;
        while rest != 0 {
            let top = 63 - u64::from(rest.leading_zeros());
            indices.push(word as u64 * 64 + top);
            rest ^= 1 << top;
        }
    }
    IndexList(indices)
}

/// `Σ 2^index` over the entries. Duplicates and any ordering are accepted.
pub fn reconstruct_sum(indices: &[u64]) -> BigUint {
    let Some(&top) = indices.iter().max() else {
        return BigUint::default();
    };
    let mut acc = LimbAccumulator::with_top_bit(top);
    for &index in indices {
        acc.add_power_of_two(index);
    }
    acc.into_biguint()
}

/// Reconstructs by spelling each index as the binary digit string
/// `"1" + "0" * index`, reading it back as a base-2 integer and summing
/// with limb-wise two's-complement addition.
pub fn reconstruct_strings(list: &IndexList) -> BigUint {
    let Some(top) = list.leading() else {
        return BigUint::default();
    };
    let mut acc = LimbAccumulator::with_top_bit(top);
    let mut digits: Vec<u8> = Vec::with_capacity(top as usize + 1);
    for &index in list {
        digits.clear();
        digits.push(b'1');
        digits.resize(index as usize + 1, b'0');
        let value = parse_binary_digits(&digits).expect("digit string is binary");
        acc.add_limbs(&value);
    }
    acc.into_biguint()
}

/// Parses a string of `'0'`/`'1'` bytes into little-endian `u64` limbs.
fn parse_binary_digits(digits: &[u8]) -> Option<Vec<u64>> {
    const ZEROS: u64 = u64::from_ne_bytes([b'0'; 8]);
    let mut limbs = Vec::with_capacity(digits.len() / 64 + 1);
    for chunk in digits.rchunks(64) {
        let mut limb = 0u64;
        let mut shift = 0u32;
        for octet in chunk.rchunks(8) {
            if octet.len() == 8 && u64::from_ne_bytes(octet.try_into().ok()?) == ZEROS {
                shift += 8;
                continue;
            }
            for &byte in octet.iter().rev() {
                match byte {
                    b'0' => {}
                    b'1' => limb |= 1 << shift,
                    _ => return None,
                }
                shift += 1;
            }
        }
        limbs.push(limb);
    }
    Some(limbs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radix {
    Decimal,
    Hex,
}

/// Parses an unsigned literal. With [`Radix::Hex`] the `0x` prefix is
/// optional.
pub fn parse_number(text: &str, radix: Radix) -> Result<BigUint> {
    let fail = |reason| Error::Parse {
        literal: text.to_owned(),
        reason,
    };
    let (digits, base) = match radix {
        Radix::Decimal => (text, 10),
        Radix::Hex => (
            text.strip_prefix("0x")
                .or_else(|| text.strip_prefix("0X"))
                .unwrap_or(text),
            16,
        ),
    };
    if digits.is_empty() {
        return Err(fail("empty literal"));
    }
    if digits.starts_with('-') {
        return Err(fail("negative numbers are not supported"));
    }
    if !digits.bytes().all(|b| (b as char).is_digit(base)) {
        return Err(fail("unexpected character"));
    }
    BigUint::parse_bytes(digits.as_bytes(), base).ok_or_else(|| fail("unexpected character"))
}

/// Decimal unless the literal starts with `0x`.
pub fn parse_number_auto(text: &str) -> Result<BigUint> {
    let text = text.trim();
    if text.starts_with("0x") || text.starts_with("0X") {
        parse_number(text, Radix::Hex)
    } else {
        parse_number(text, Radix::Decimal)
    }
}

pub fn format_number(n: &BigUint, radix: Radix) -> String {
    match radix {
        Radix::Decimal => n.to_str_radix(10),
        Radix::Hex => format!("0x{}", n.to_str_radix(16)),
    }
}
