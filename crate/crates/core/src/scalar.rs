//! Integer scalar abstraction.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable as a lattice coordinate.
///
/// Fixed-width implementations advertise a coordinate bound; inputs beyond it
/// are rejected so products in 3x3 determinants cannot wrap.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Largest coordinate magnitude accepted by polytope constructors, if any.
    fn coord_bound() -> Option<Self>;

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every scalar")
    }
}

impl Scalar for i64 {
    fn coord_bound() -> Option<Self> {
        Some(1 << 15)
    }
}

impl Scalar for i128 {
    fn coord_bound() -> Option<Self> {
        Some(1 << 31)
    }
}

impl Scalar for BigInt {
    fn coord_bound() -> Option<Self> {
        None
    }
}

/// Converts between scalar types, failing when the value does not fit.
pub fn cast<T: Scalar, U: Scalar>(v: &T) -> Option<U> {
    match v.to_i64() {
        Some(x) => U::from_i64(x),
        None => v.to_string().parse().ok(),
    }
}

pub(crate) fn within_bound<T: Scalar>(v: &T) -> bool {
    match T::coord_bound() {
        Some(b) => v.abs() <= b,
        None => true,
    }
}
