//! Addition by concatenation, carry normalization with `2^n + 2^n = 2^(n+1)`
//! and multiplication as the multiset of pairwise index sums.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::PrimInt;

use crate::error::{Error, Result};
use crate::index_repr::{deconstruct, reconstruct_sum, IndexList, MAX_INDEX};

/// Unnormalized multiset of indices. Duplicates are expected.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawIndexBag(Vec<u64>);

impl RawIndexBag {
    pub fn new(entries: Vec<u64>) -> Self {
        RawIndexBag(entries)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ 2^entry`, duplicates counted.
    pub fn value(&self) -> BigUint {
        reconstruct_sum(&self.0)
    }
}

impl From<&IndexList> for RawIndexBag {
    fn from(list: &IndexList) -> Self {
        RawIndexBag(list.as_slice().to_vec())
    }
}

/// Addition without carries: the multiset union of both lists.
pub fn concat_add(a: &IndexList, b: &IndexList) -> RawIndexBag {
    let mut entries = Vec::with_capacity(a.len() + b.len());
    entries.extend_from_slice(a.as_slice());
    entries.extend_from_slice(b.as_slice());
    RawIndexBag(entries)
}

fn bump(index: u64) -> Result<u64> {
    if index >= MAX_INDEX {
        Err(Error::IndexOverflow(index as u128 + 1))
    } else {
        Ok(index + 1)
    }
}

/// Carry-normalizes a bag into a canonical list.
///
/// Entries are counted per index and `count >> 1` carries move one index
/// up, which is the pairwise replacement `n, n -> n + 1` applied in bulk.
pub fn normalize(bag: &RawIndexBag) -> Result<IndexList> {
    let entries = bag.entries();
    let (Some(&min), Some(&max)) = (entries.iter().min(), entries.iter().max()) else {
        return Ok(IndexList::default());
    };
    if max > MAX_INDEX {
        return Err(Error::IndexOverflow(max as u128));
    }
    let span = max - min;
    let mut ascending = if span <= 4 * entries.len() as u64 + 64 {
        normalize_dense(entries, min, span)?
    } else {
        normalize_sorted(entries)?
    };
    ascending.reverse();
    Ok(IndexList::from_canonical(ascending))
}

fn normalize_dense(entries: &[u64], min: u64, span: u64) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; span as usize + 1];
    for &e in entries {
        counts[(e - min) as usize] += 1;
    }
    let mut out = Vec::new();
    let mut carry = 0u64;
    let mut offset = 0usize;
    while offset < counts.len() || carry > 0 {
        let index = min + offset as u64;
        let count = carry + counts.get(offset).copied().unwrap_or(0);
        if count & 1 == 1 {
            out.push(index);
        }
        carry = count >> 1;
        if carry > 0 {
            bump(index)?;
        }
        offset += 1;
    }
    Ok(out)
}

fn normalize_sorted(entries: &[u64]) -> Result<Vec<u64>> {
    let mut sorted = entries.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut carry = 0u64;
    let mut next = 0usize;
    let mut index = 0u64;
    while next < sorted.len() || carry > 0 {
        if carry == 0 {
            index = sorted[next];
        }
        let mut count = carry;
        while next < sorted.len() && sorted[next] == index {
            count += 1;
            next += 1;
        }
        if count & 1 == 1 {
            out.push(index);
        }
        carry = count >> 1;
        if carry > 0 {
            index = bump(index)?;
        }
    }
    Ok(out)
}

/// Smallest index `>= target` not present in `occupied`.
pub fn look_ahead(target: u64, occupied: &IndexList) -> u64 {
    probe(target, |index| occupied.contains(index))
}

fn probe(mut target: u64, present: impl Fn(u64) -> bool) -> u64 {
    while present(target) {
        target += 1;
    }
    target
}

/// Entry-by-entry simplifier: each incoming index `e` probes upward for the
/// first free slot `t`, removes the occupied run `e..t` and takes `t`.
/// Since `2^e + Σ_{e<=k<t} 2^k = 2^t` the value is preserved at every step.
///
/// Quadratic in the worst case; kept as the reference semantics that
/// [`normalize`] is checked against.
pub fn simplify_reference(bag: &RawIndexBag) -> Result<IndexList> {
    let mut result = BTreeSet::new();
    for &entry in bag.entries() {
        if entry > MAX_INDEX {
            return Err(Error::IndexOverflow(entry as u128));
        }
        let target = probe(entry, |index| result.contains(&index));
        if target > MAX_INDEX {
            return Err(Error::IndexOverflow(target as u128));
        }
        for index in entry..target {
            result.remove(&index);
        }
        result.insert(target);
    }
    Ok(IndexList::from_canonical(result.into_iter().rev().collect()))
}

pub fn add(a: &IndexList, b: &IndexList) -> Result<IndexList> {
    if a.is_empty() {
        return Ok(b.clone());
    }
    if b.is_empty() {
        return Ok(a.clone());
    }
    normalize(&concat_add(a, b))
}

/// The raw product multiset `{ i + j : i in a, j in b }`, `|a|·|b|` entries.
pub fn cross_sum_bag(a: &IndexList, b: &IndexList) -> Result<RawIndexBag> {
    check_product_bound(a, b)?;
    let mut entries = Vec::with_capacity(a.len() * b.len());
    for &i in a {
        entries.extend(b.iter().map(|&j| i + j));
    }
    Ok(RawIndexBag(entries))
}

fn check_product_bound(a: &IndexList, b: &IndexList) -> Result<()> {
    if let (Some(top_a), Some(top_b)) = (a.leading(), b.leading()) {
        let top = top_a as u128 + top_b as u128;
        if top > MAX_INDEX as u128 {
            return Err(Error::IndexOverflow(top));
        }
    }
    Ok(())
}

/// Index list of `value(a) · value(b)`.
///
/// Every pairwise sum `i + j` is counted in a bucket per index and the
/// buckets are then carried upward, so the `|a|·|b|` bag is never
/// materialized. Products below `2^64` accumulate directly in one machine
/// word, whose adder does the carrying. Very sparse operands, whose bucket
/// range would dwarf the number of pairs, go through [`normalize`].
pub fn multiply_indices(a: &IndexList, b: &IndexList) -> Result<IndexList> {
    let (Some(top_a), Some(top_b)) = (a.leading(), b.leading()) else {
        return Ok(IndexList::default());
    };
    let top = top_a as u128 + top_b as u128;
    if top > MAX_INDEX as u128 {
        return Err(Error::IndexOverflow(top));
    }
    let top = top as u64;

    if top < 63 {
        let mut acc = 0u64;
        for &i in a {
            for &j in b {
                acc += 1 << (i + j);
            }
        }
        return Ok(IndexList::from_canonical(set_bits_u64(acc)));
    }

    let low = a.as_slice()[a.len() - 1] + b.as_slice()[b.len() - 1];
    let span = top - low;
    let pairs = (a.len() * b.len()) as u64;
    if span / 8 > pairs + 4096 {
        return normalize(&cross_sum_bag(a, b)?);
    }
    let ascending = if pairs < u64::from(u32::MAX) {
        carry_counts(&pair_counts::<u32>(a, b, low, span), low)?
    } else {
        carry_counts(&pair_counts::<u64>(a, b, low, span), low)?
    };
    Ok(IndexList::from_canonical(ascending.into_iter().rev().collect()))
}

fn pair_counts<C: PrimInt>(a: &IndexList, b: &IndexList, low: u64, span: u64) -> Vec<C> {
    let mut counts = vec![C::zero(); span as usize + 1];
    let b_low = b.as_slice()[b.len() - 1];
    let b_rel: Vec<usize> = b.iter().map(|&j| (j - b_low) as usize).collect();
    let a_low = a.as_slice()[a.len() - 1];
    debug_assert_eq!(a_low + b_low, low);
    for &i in a {
        let row = &mut counts[(i - a_low) as usize..];
        for &j in &b_rel {
            row[j] = row[j] + C::one();
        }
    }
    counts
}

/// Resolves bucket counts (bucket `k` holds index `low + k`) into
/// ascending set indices.
fn carry_counts<C: PrimInt>(counts: &[C], low: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut carry = 0u64;
    let mut k = 0usize;
    while k < counts.len() || carry > 0 {
        let here = counts.get(k).map_or(0, |c| c.to_u64().expect("count fits u64"));
        let total = carry + here;
        let index = low + k as u64;
        if total & 1 == 1 {
            if index > MAX_INDEX {
                return Err(Error::IndexOverflow(index as u128));
            }
            out.push(index);
        }
        carry = total >> 1;
        k += 1;
    }
    Ok(out)
}

fn set_bits_u64(mut value: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(value.count_ones() as usize);
    while value != 0 {
        let top = 63 - value.leading_zeros();
        out.push(u64::from(top));
        value ^= 1 << top;
    }
    out
}

pub fn multiply_integers(a: &BigUint, b: &BigUint) -> Result<BigUint> {
    let product = multiply_indices(&deconstruct(a), &deconstruct(b))?;
    Ok(product.to_biguint())
}
