//! Big-number arithmetic over sparse radix-2 index lists.
//!
//! An integer is stored as the descending list of exponents at which its
//! binary expansion holds a 1 (`97 = [6,5,0]`). Addition concatenates
//! lists, multiplication takes every pairwise index sum, and both finish by
//! resolving duplicates with `2^n + 2^n = 2^(n+1)`.
//!
//! ```
//! use indexradix::{add, deconstruct, multiply_indices};
//!
//! let a = deconstruct(&17u32.into());
//! let b = deconstruct(&21u32.into());
//! assert_eq!(add(&a, &b).unwrap().as_slice(), &[5, 2, 1]);
//!
//! let c = deconstruct(&19u32.into());
//! assert_eq!(multiply_indices(&a, &c).unwrap().to_biguint(), 323u32.into());
//! ```

mod accum;
pub mod arith;
pub mod baselines;
pub mod bench;
pub mod cli;
mod error;
pub mod fraction;
pub mod index_repr;
pub mod parallel;

pub use num_bigint::BigUint;

pub use arith::{
    add, concat_add, cross_sum_bag, look_ahead, multiply_indices, multiply_integers, normalize,
    simplify_reference, RawIndexBag,
};
pub use baselines::{karatsuba_mul, ntt_mul, plan_ntt, schoolbook_mul, LimbNumber, NttPlan};
pub use error::{Error, Result};
pub use fraction::{dec2binary, deconstruct_real, reconstruct_fraction, FractionIndexList};
pub use index_repr::{
    deconstruct, divide_by_2, format_number, ilog2, parse_number, parse_number_auto,
    reconstruct_strings, reconstruct_sum, BitVector, IndexList, Radix, MAX_INDEX,
};
pub use parallel::{dispatch, parallel_multiply, parallel_multiply_with, split, PartitionSet};
