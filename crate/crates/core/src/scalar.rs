use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer type backing every exponent, threshold and length value.
///
/// All exact rationals in this crate are `Ratio<I>` for some `I: ExpInt`.
/// `num_bigint::BigInt` is the default (see the aliases at the crate root);
/// `i64`/`i128` work as long as denominators stay below the native range.
pub trait ExpInt:
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
}

impl<T> ExpInt for T where
    T: Integer
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
}

pub(crate) fn int<I: ExpInt>(n: i64) -> I {
    I::from_i64(n).expect("integer out of range for exponent type")
}
