use std::fmt;

use crate::error::{Error, Result};
use crate::ring_core::Exponent;
use crate::scalar::ExpInt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Mode {
    /// Completion of F_p[t^{1/p^∞}], normalized by v(t) = 1.
    CharP,
    /// Completion of Z_p[p^{1/p^∞}], normalized by v(p) = 1.
    Mixed,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::CharP => "char_p",
            Mode::Mixed => "mixed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "char_p" | "charp" | "char-p" => Ok(Mode::CharP),
            "mixed" => Ok(Mode::Mixed),
            other => Err(Error::InvalidInput(format!("unknown ring mode {other:?}"))),
        }
    }

    pub fn base_symbol(self) -> char {
        match self {
            Mode::CharP => 't',
            Mode::Mixed => 'p',
        }
    }
}

/// Which model ring an element lives in, and the precision cap `N`.
///
/// Everything is computed in the quotient by the ideal of elements of
/// valuation `>= N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingDescriptor<I: ExpInt> {
    mode: Mode,
    prime: u32,
    precision: Exponent<I>,
}

impl<I: ExpInt> RingDescriptor<I> {
    pub fn new(mode: Mode, prime: u32, precision: Exponent<I>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidDescriptor(format!("{prime} is not prime")));
        }
        if !precision.is_positive() {
            return Err(Error::InvalidDescriptor(format!(
                "precision {precision} must be positive"
            )));
        }
        if precision.p_depth(prime).is_none() {
            return Err(Error::BadExponent(precision.to_string()));
        }
        Ok(RingDescriptor {
            mode,
            prime,
            precision,
        })
    }

    pub fn char_p(prime: u32, precision: Exponent<I>) -> Result<Self> {
        Self::new(Mode::CharP, prime, precision)
    }

    pub fn mixed(prime: u32, precision: Exponent<I>) -> Result<Self> {
        Self::new(Mode::Mixed, prime, precision)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn precision(&self) -> &Exponent<I> {
        &self.precision
    }

    pub fn with_precision(&self, precision: Exponent<I>) -> Result<Self> {
        Self::new(self.mode, self.prime, precision)
    }

    /// v(ϖ): ϖ = t in characteristic p, ϖ = p^{1/p} (so ϖ^p = p) in mixed
    /// characteristic.
    pub fn varpi_valuation(&self) -> Exponent<I> {
        match self.mode {
            Mode::CharP => Exponent::one(),
            Mode::Mixed => Exponent::inv_p_pow(self.prime, 1),
        }
    }

    /// Cap used by Frobenius: `min(N, 1)` in mixed mode (V/pV), `N` otherwise.
    pub fn frobenius_cap(&self) -> Exponent<I> {
        match self.mode {
            Mode::CharP => self.precision.clone(),
            Mode::Mixed => Exponent::min_of(&self.precision, &Exponent::one()),
        }
    }

    pub fn check_exponent(&self, e: &Exponent<I>) -> Result<()> {
        if e.p_depth(self.prime).is_none() {
            return Err(Error::BadExponent(e.to_string()));
        }
        Ok(())
    }
}

impl<I: ExpInt> fmt::Debug for RingDescriptor<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(p={}, N={})",
            self.mode.name(),
            self.prime,
            self.precision
        )
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rejects_bad_descriptors() {
        assert!(RingDescriptor::<BigInt>::char_p(4, Exponent::from_int(2)).is_err());
        assert!(RingDescriptor::<BigInt>::char_p(3, Exponent::zero()).is_err());
        assert!(RingDescriptor::<BigInt>::mixed(3, Exponent::frac(1, 2)).is_err());
        assert!(RingDescriptor::<BigInt>::mixed(3, Exponent::frac(4, 3)).is_ok());
    }

    #[test]
    fn varpi_normalization() {
        let d = RingDescriptor::<BigInt>::mixed(5, Exponent::from_int(4)).unwrap();
        assert_eq!(d.varpi_valuation(), Exponent::frac(1, 5));
        let d = RingDescriptor::<BigInt>::char_p(5, Exponent::from_int(4)).unwrap();
        assert_eq!(d.varpi_valuation(), Exponent::one());
    }
}
