//! Binary fractions as lists of negative indices: `[-2,-3,-6]` is
//! `2^-2 + 2^-3 + 2^-6 = 0.390625`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index_repr::{deconstruct, parse_number, IndexList, Radix};

pub const DEFAULT_SENSITIVITY: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct FractionIndexList {
    indices: Vec<i64>,
    sensitivity: usize,
}

impl FractionIndexList {
    pub fn new(indices: Vec<i64>, sensitivity: usize) -> Result<Self> {
        if sensitivity == 0 {
            return Err(Error::ZeroSensitivity);
        }
        if indices.iter().any(|&i| i > -1) {
            return Err(Error::InvalidIndexList(
                "fraction indices must be negative".into(),
            ));
        }
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidIndexList(
                "fraction indices must be strictly decreasing".into(),
            ));
        }
        if indices.len() > sensitivity {
            return Err(Error::InvalidIndexList(format!(
                "{} indices exceed sensitivity {sensitivity}",
                indices.len()
            )));
        }
        Ok(FractionIndexList {
            indices,
            sensitivity,
        })
    }

    pub fn empty(sensitivity: usize) -> Self {
        FractionIndexList {
            indices: Vec::new(),
            sensitivity: sensitivity.max(1),
        }
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn sensitivity(&self) -> usize {
        self.sensitivity
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The value as `numerator / 2^denominator_exp`.
    pub fn as_dyadic(&self) -> (BigUint, u64) {
        let Some(&last) = self.indices.last() else {
            return (BigUint::zero(), 0);
        };
        let exp = last.unsigned_abs();
        let mut numerator = BigUint::zero();
        for &i in &self.indices {
            numerator.set_bit(exp - i.unsigned_abs(), true);
        }
        (numerator, exp)
    }
}

impl TryFrom<Vec<i64>> for FractionIndexList {
    type Error = Error;

    fn try_from(indices: Vec<i64>) -> Result<Self> {
        let sensitivity = indices.len().max(DEFAULT_SENSITIVITY);
        FractionIndexList::new(indices, sensitivity)
    }
}

impl From<FractionIndexList> for Vec<i64> {
    fn from(value: FractionIndexList) -> Self {
        value.indices
    }
}

/// Splits `"I.F"` or `"I"` into digit strings.
fn split_decimal(text: &str) -> Result<(&str, &str)> {
    let fail = |reason| Error::Parse {
        literal: text.to_owned(),
        reason,
    };
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => {
            if f.is_empty() {
                return Err(fail("missing digits after '.'"));
            }
            (i, f)
        }
        None => (text, ""),
    };
    if int_part.is_empty() {
        return Err(fail("missing integer digits"));
    }
    let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !digits(int_part.strip_prefix('-').unwrap_or(int_part)) || !digits(frac_part) {
        return Err(fail("unexpected character"));
    }
    Ok((int_part, frac_part))
}

/// Multiply-by-two bit extraction of the fraction `d / 10^k`, most
/// significant bit first. Stops once the residue is zero or `sensitivity`
/// indices have been emitted; the tail is truncated, never rounded.
pub fn dec2binary(fraction: &str, sensitivity: usize) -> Result<FractionIndexList> {
    if sensitivity == 0 {
        return Err(Error::ZeroSensitivity);
    }
    let (int_part, frac_part) = split_decimal(fraction.trim())?;
    if let Some(magnitude) = int_part.strip_prefix('-') {
        let magnitude_zero = magnitude.bytes().all(|b| b == b'0')
            && frac_part.bytes().all(|b| b == b'0');
        if !magnitude_zero {
            return Err(Error::FractionOutOfRange(fraction.to_owned()));
        }
        return Ok(FractionIndexList::empty(sensitivity));
    }
    if int_part.bytes().any(|b| b != b'0') {
        return Err(Error::FractionOutOfRange(fraction.to_owned()));
    }
    extract_bits(frac_part, sensitivity)
}

fn extract_bits(frac_digits: &str, sensitivity: usize) -> Result<FractionIndexList> {
    if frac_digits.is_empty() {
        return Ok(FractionIndexList::empty(sensitivity));
    }
    let mut residue = parse_number(frac_digits, Radix::Decimal)?;
    let denominator = BigUint::from(10u8).pow(frac_digits.len() as u32);
    let mut indices = Vec::new();
    let mut position: i64 = 0;
    while !residue.is_zero() && indices.len() < sensitivity {
        residue <<= 1u8;
        position -= 1;
        if residue >= denominator {
            residue -= &denominator;
            indices.push(position);
        }
    }
    FractionIndexList::new(indices, sensitivity)
}

/// Exact decimal expansion of the fraction. Always terminates because the
/// denominator is a power of two.
pub fn reconstruct_fraction(v: &FractionIndexList) -> String {
    let (numerator, exp) = v.as_dyadic();
    if numerator.is_zero() {
        return "0".to_owned();
    }
    // n / 2^m == n * 5^m / 10^m
    let scaled = numerator * BigUint::from(5u8).pow(exp as u32);
    let digits = scaled.to_str_radix(10);
    let width = exp as usize;
    let mut text = String::with_capacity(width + 2);
    text.push_str("0.");
    text.extend(std::iter::repeat_n('0', width - digits.len()));
    text.push_str(digits.trim_end_matches('0'));
    text
}

/// Splits a non-negative decimal literal into integer and fraction index
/// lists.
pub fn deconstruct_real(text: &str, sensitivity: usize) -> Result<(IndexList, FractionIndexList)> {
    if sensitivity == 0 {
        return Err(Error::ZeroSensitivity);
    }
    let text = text.trim();
    let (int_part, frac_part) = split_decimal(text)?;
    if int_part.starts_with('-') {
        return Err(Error::Parse {
            literal: text.to_owned(),
            reason: "negative numbers are not supported",
        });
    }
    let integer = parse_number(int_part, Radix::Decimal)?;
    Ok((deconstruct(&integer), extract_bits(frac_part, sensitivity)?))
}
