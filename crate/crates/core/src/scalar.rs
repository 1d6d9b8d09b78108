//! Exact integer coefficient types.
//!
//! Everything that touches matrix entries (chains, boundary matrices, Smith
//! normal form) is generic over [`Coefficient`]. Fixed-width types are fast
//! and report overflow through the checked operations; [`BigInt`] never
//! overflows but is slower. Homology computations start on `i64` and promote
//! to `BigInt` when an intermediate value no longer fits.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// An exact, signed, Euclidean integer type usable as a chain coefficient.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + Hash
    + Ord
    + Signed
    + Integer
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Bit length of the absolute value (0 for zero).
    fn bit_len(&self) -> u64;

    /// Lossless widening to an arbitrary-precision integer.
    fn to_bigint(&self) -> BigInt;

    /// Narrowing from an arbitrary-precision integer, `None` if out of range.
    fn from_bigint(value: &BigInt) -> Option<Self>;

    fn from_small(value: i64) -> Self {
        <Self as FromPrimitive>::from_i64(value).expect("every coefficient type holds an i64")
    }
}

macro_rules! impl_fixed {
    ($t:ty) => {
        impl Coefficient for $t {
            fn bit_len(&self) -> u64 {
                u64::from(<$t>::BITS - self.unsigned_abs().leading_zeros())
            }

            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }

            fn from_bigint(value: &BigInt) -> Option<Self> {
                <$t>::try_from(value).ok()
            }
        }
    };
}

impl_fixed!(i64);
impl_fixed!(i128);

impl Coefficient for BigInt {
    fn bit_len(&self) -> u64 {
        self.bits()
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

/// Converts between coefficient types, `None` if a value does not fit.
pub fn convert<S: Coefficient, T: Coefficient>(value: &S) -> Option<T> {
    T::from_bigint(&value.to_bigint())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_lengths() {
        assert_eq!(0i64.bit_len(), 0);
        assert_eq!(1i64.bit_len(), 1);
        assert_eq!((-8i64).bit_len(), 4);
        assert_eq!(i64::MIN.bit_len(), 64);
        assert_eq!(BigInt::from(-8).bit_len(), 4);
        assert_eq!(255i128.bit_len(), 8);
    }

    #[test]
    fn narrowing_fails_out_of_range() {
        let big = BigInt::from(i64::MAX) + 1;
        assert_eq!(<i64 as Coefficient>::from_bigint(&big), None);
        assert_eq!(convert::<BigInt, i128>(&big), Some(i64::MAX as i128 + 1));
    }
}
