use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, ExpInt};

/// An element of the value group Z[1/p], stored as an exact reduced rational.
///
/// The type itself does not know `p`; callers that need the power-of-p
/// denominator invariant check it against a descriptor with
/// [`Exponent::p_depth`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent<I: ExpInt>(Ratio<I>);

// Cross-multiplication instead of `Ratio`'s division-based comparison: term
// lists are kept sorted, so this is the hottest path in the crate.
impl<I: ExpInt> Ord for Exponent<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.0.numer(), self.0.denom());
        let (c, d) = (other.0.numer(), other.0.denom());
        if b == d {
            return a.cmp(c);
        }
        if let (Some(a), Some(b), Some(c), Some(d)) = (a.to_i64(), b.to_i64(), c.to_i64(), d.to_i64()) {
            return (a as i128 * d as i128).cmp(&(c as i128 * b as i128));
        }
        (a.clone() * d.clone()).cmp(&(c.clone() * b.clone()))
    }
}

impl<I: ExpInt> PartialOrd for Exponent<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: ExpInt> Exponent<I> {
    pub fn new(numer: I, denom: I) -> Self {
        Exponent(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<I>) -> Self {
        Exponent(r)
    }

    pub fn from_int(n: i64) -> Self {
        Exponent(Ratio::from_integer(int(n)))
    }

    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(int(numer), int(denom))
    }

    /// `1 / p^k`.
    pub fn inv_p_pow(p: u32, k: u32) -> Self {
        Exponent(Ratio::new(I::one(), p_pow(p, k)))
    }

    pub fn zero() -> Self {
        Exponent(Ratio::zero())
    }

    pub fn one() -> Self {
        Exponent(Ratio::one())
    }

    pub fn ratio(&self) -> &Ratio<I> {
        &self.0
    }

    pub fn numer(&self) -> &I {
        self.0.numer()
    }

    pub fn denom(&self) -> &I {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0 < Ratio::zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0 > Ratio::zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The `k` with denominator `p^k`, if the denominator is a power of `p`.
    pub fn p_depth(&self, p: u32) -> Option<u32> {
        let mut d = self.0.denom().clone();
        let pi: I = int(p as i64);
        let mut k = 0;
        while !d.is_one() {
            let (q, r) = d.div_rem(&pi);
            if !r.is_zero() {
                return None;
            }
            d = q;
            k += 1;
        }
        Some(k)
    }

    pub fn scale(&self, n: i64) -> Self {
        Exponent(&self.0 * Ratio::from_integer(int::<I>(n)))
    }

    pub fn div_int(&self, n: i64) -> Self {
        Exponent(&self.0 / Ratio::from_integer(int::<I>(n)))
    }

    pub fn floor(&self) -> I {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> I {
        self.0.ceil().to_integer()
    }

    pub fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Parses `INT` or `INT/INT` (optionally signed).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidInput(format!("malformed rational {text:?}"));
        let (n, d) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let n: I = n.parse().map_err(|_| bad())?;
        let d: I = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Exponent::new(n, d))
    }

    /// Converts to another integer backend.
    pub fn convert<J: ExpInt>(&self) -> Option<Exponent<J>> {
        let n = J::from_i128(self.numer().to_i128()?)?;
        let d = J::from_i128(self.denom().to_i128()?)?;
        Some(Exponent::new(n, d))
    }
}

pub(crate) fn p_pow<I: ExpInt>(p: u32, k: u32) -> I {
    let pi: I = int(p as i64);
    let mut acc = I::one();
    for _ in 0..k {
        acc = acc * pi.clone();
    }
    acc
}

impl<I: ExpInt> fmt::Display for Exponent<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl<I: ExpInt> fmt::Debug for Exponent<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a, I: ExpInt> Add<&'a Exponent<I>> for &'a Exponent<I> {
    type Output = Exponent<I>;
    fn add(self, rhs: &'a Exponent<I>) -> Exponent<I> {
        Exponent(&self.0 + &rhs.0)
    }
}

impl<I: ExpInt> Add for Exponent<I> {
    type Output = Exponent<I>;
    fn add(self, rhs: Exponent<I>) -> Exponent<I> {
        Exponent(self.0 + rhs.0)
    }
}

impl<'a, I: ExpInt> Sub<&'a Exponent<I>> for &'a Exponent<I> {
    type Output = Exponent<I>;
    fn sub(self, rhs: &'a Exponent<I>) -> Exponent<I> {
        Exponent(&self.0 - &rhs.0)
    }
}

impl<I: ExpInt> Sub for Exponent<I> {
    type Output = Exponent<I>;
    fn sub(self, rhs: Exponent<I>) -> Exponent<I> {
        Exponent(self.0 - rhs.0)
    }
}

impl<'a, I: ExpInt> Mul<&'a Exponent<I>> for &'a Exponent<I> {
    type Output = Exponent<I>;
    fn mul(self, rhs: &'a Exponent<I>) -> Exponent<I> {
        Exponent(&self.0 * &rhs.0)
    }
}

impl<I: ExpInt> Neg for Exponent<I> {
    type Output = Exponent<I>;
    fn neg(self) -> Exponent<I> {
        Exponent(-self.0)
    }
}

impl<I: ExpInt> std::iter::Sum for Exponent<I> {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Exponent::zero(), |a, b| a + b)
    }
}

/// Valuation of a truncated element: exact below the cap, or unknown.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ValResult<I: ExpInt> {
    Exact(Exponent<I>),
    BelowPrecision(Exponent<I>),
}

impl<I: ExpInt> ValResult<I> {
    pub fn exact(&self) -> Option<&Exponent<I>> {
        match self {
            ValResult::Exact(r) => Some(r),
            ValResult::BelowPrecision(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ValResult::Exact(_))
    }

    /// Lower bound for the valuation: the exact value or the precision cap.
    pub fn lower_bound(&self) -> &Exponent<I> {
        match self {
            ValResult::Exact(r) | ValResult::BelowPrecision(r) => r,
        }
    }

    /// Total order treating `BelowPrecision` as +infinity.
    pub fn cmp_inf(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ValResult::Exact(a), ValResult::Exact(b)) => a.cmp(b),
            (ValResult::Exact(_), ValResult::BelowPrecision(_)) => Ordering::Less,
            (ValResult::BelowPrecision(_), ValResult::Exact(_)) => Ordering::Greater,
            (ValResult::BelowPrecision(_), ValResult::BelowPrecision(_)) => Ordering::Equal,
        }
    }
}

impl<I: ExpInt> fmt::Display for ValResult<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValResult::Exact(r) => write!(f, "{r}"),
            ValResult::BelowPrecision(n) => write!(f, ">={n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type E = Exponent<BigInt>;

    #[test]
    fn p_depth_detects_power_denominators() {
        assert_eq!(E::frac(3, 8).p_depth(2), Some(3));
        assert_eq!(E::from_int(5).p_depth(3), Some(0));
        assert_eq!(E::frac(1, 6).p_depth(2), None);
        assert_eq!(E::frac(2, 9).p_depth(3), Some(2));
    }

    #[test]
    fn display_reduces() {
        assert_eq!(E::frac(2, 4).to_string(), "1/2");
        assert_eq!(E::frac(6, 3).to_string(), "2");
        assert_eq!(E::parse(" 10 / 4 ").unwrap().to_string(), "5/2");
        assert!(E::parse("1/0").is_err());
    }

    #[test]
    fn below_precision_is_infinite() {
        let a = ValResult::Exact(E::from_int(3));
        let b = ValResult::BelowPrecision(E::from_int(2));
        assert_eq!(a.cmp_inf(&b), Ordering::Less);
    }

    #[test]
    fn converts_between_backends() {
        let e = E::frac(7, 27);
        let small: Exponent<i64> = e.convert().unwrap();
        assert_eq!(small.to_string(), "7/27");
    }
}
