//! Exact ordered-field scalars.
//!
//! Everything in this crate that touches equilibrium arithmetic is written
//! against [`Scalar`]. The default instantiation is [`BigRational`]; the
//! fixed-width `Ratio<i64>` / `Ratio<i128>` impls are handy for small
//! verification jobs but will panic on overflow, so the solver pipeline should
//! stay on the arbitrary-precision type.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {input:?}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: String,
}

/// An exact, totally ordered field element.
pub trait Scalar:
    Clone + Debug + Display + Ord + Hash + Num + Signed + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_frac(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }

    /// Bit length of the numerator plus bit length of the denominator.
    fn bit_size(&self) -> u64;

    fn to_f64(&self) -> f64;

    /// Canonical `"p/q"` form with `q > 0` and `gcd(p, q) = 1`; integers keep the `/1`.
    fn canonical(&self) -> String;

    /// Accepts `"p/q"` or a bare integer `"p"`; the result is always reduced.
    fn parse(text: &str) -> Result<Self, ParseScalarError>;
}

fn parse_ratio<T>(text: &str) -> Result<Ratio<T>, ParseScalarError>
where
    T: Clone + Integer + std::str::FromStr,
{
    let err = |reason: &str| ParseScalarError {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    let (numer, denom) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let numer: T = numer.parse().map_err(|_| err("bad numerator"))?;
    let denom: T = denom.parse().map_err(|_| err("bad denominator"))?;
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Ratio::new(numer, denom))
}

macro_rules! impl_fixed_width {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(v as $int)
            }

            fn bit_size(&self) -> u64 {
                let bits = |v: $int| u64::from(<$int>::BITS - v.unsigned_abs().leading_zeros());
                bits(*self.numer()) + bits(*self.denom())
            }

            fn to_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }

            fn canonical(&self) -> String {
                format!("{}/{}", self.numer(), self.denom())
            }

            fn parse(text: &str) -> Result<Self, ParseScalarError> {
                parse_ratio::<$int>(text)
            }
        }
    };
}

impl_fixed_width!(i64);
impl_fixed_width!(i128);

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn bit_size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn canonical(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse(text: &str) -> Result<Self, ParseScalarError> {
        parse_ratio::<BigInt>(text)
    }
}

/// `x^(2^k)` by `k` squarings.
pub fn pow_two_power<T: Scalar>(x: &T, k: u32) -> T {
    let mut acc = x.clone();
    for _ in 0..k {
        acc = acc.clone() * acc;
    }
    acc
}

/// `x^e` by binary exponentiation.
pub fn pow<T: Scalar>(x: &T, mut e: u64) -> T {
    let mut base = x.clone();
    let mut acc = T::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        e >>= 1;
    }
    acc
}

/// `[y]^+`
pub(crate) fn positive_part<T: Scalar>(y: T) -> T {
    if y.is_positive() {
        y
    } else {
        T::zero()
    }
}

pub(crate) fn half<T: Scalar>() -> T {
    T::one() / T::from_i64(2)
}

pub(crate) fn is_unit_interval<T: Scalar>(v: &T) -> bool {
    !v.is_negative() && *v <= T::one()
}
