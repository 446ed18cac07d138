use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring_core::{Exponent, RingElement, ValResult};
use crate::scalar::ExpInt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    /// `{x : v(x) >= r}`
    Closed,
    /// `{x : v(x) > r}`
    Open,
}

/// An ideal of V described by a valuation threshold.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CutIdeal<I: ExpInt> {
    threshold: Exponent<I>,
    endpoint: Endpoint,
}

impl<I: ExpInt> CutIdeal<I> {
    pub fn new(threshold: Exponent<I>, endpoint: Endpoint) -> Self {
        CutIdeal {
            threshold,
            endpoint,
        }
    }

    pub fn closed(threshold: Exponent<I>) -> Self {
        Self::new(threshold, Endpoint::Closed)
    }

    pub fn open(threshold: Exponent<I>) -> Self {
        Self::new(threshold, Endpoint::Open)
    }

    /// The maximal ideal `m_V`, which is also the ideal `I` of the basic
    /// setup: the open cut at 0.
    pub fn maximal() -> Self {
        Self::open(Exponent::zero())
    }

    pub fn threshold(&self) -> &Exponent<I> {
        &self.threshold
    }

    pub fn endpoint(&self) -> Endpoint {
        self.endpoint
    }

    /// Whether `V/I` is the zero module (`I = V`).
    pub fn is_unit(&self) -> bool {
        self.endpoint == Endpoint::Closed && !self.threshold.is_positive()
    }

    /// Whether an element of valuation `v` lies in the ideal.
    pub fn contains_valuation(&self, v: &Exponent<I>) -> bool {
        match self.endpoint {
            Endpoint::Closed => v >= &self.threshold,
            Endpoint::Open => v > &self.threshold,
        }
    }
}

impl<I: ExpInt> fmt::Display for CutIdeal<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.endpoint {
            Endpoint::Closed => write!(f, "[{}", self.threshold),
            Endpoint::Open => write!(f, "({}", self.threshold),
        }
    }
}

impl<I: ExpInt> fmt::Debug for CutIdeal<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `⊕_i V/I_i`, in canonical form: zero summands dropped, sorted.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CutModule<I: ExpInt> {
    summands: Vec<CutIdeal<I>>,
}

impl<I: ExpInt> CutModule<I> {
    pub fn new(summands: impl IntoIterator<Item = CutIdeal<I>>) -> Result<Self> {
        let mut out: Vec<CutIdeal<I>> = Vec::new();
        for s in summands {
            if s.threshold.is_negative() {
                return Err(Error::InvalidInput(format!(
                    "cut threshold {} is negative",
                    s.threshold
                )));
            }
            if !s.is_unit() {
                out.push(s);
            }
        }
        out.sort();
        Ok(CutModule { summands: out })
    }

    pub fn zero() -> Self {
        CutModule {
            summands: Vec::new(),
        }
    }

    pub fn cyclic(ideal: CutIdeal<I>) -> Self {
        Self::new([ideal]).expect("thresholds of valid ideals are nonnegative")
    }

    pub fn summands(&self) -> &[CutIdeal<I>] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut all = self.summands.clone();
        all.extend(other.summands.iter().cloned());
        all.sort();
        CutModule { summands: all }
    }

    /// `b·M` for `v(b) = vb`: `b·V/I(r, e) ≅ V/I(r - vb, e)`, which is zero
    /// once `b ∈ I(r, e)`.
    pub fn scalar_image_val(&self, vb: &Exponent<I>) -> Self {
        let summands = self
            .summands
            .iter()
            .filter(|s| !s.contains_valuation(vb))
            .map(|s| CutIdeal::new(&s.threshold - vb, s.endpoint))
            .collect::<Vec<_>>();
        Self::new(summands).expect("thresholds stay nonnegative")
    }

    pub fn scalar_image(&self, b: &RingElement<I>) -> Result<Self> {
        match b.valuation() {
            ValResult::Exact(v) => Ok(self.scalar_image_val(&v)),
            ValResult::BelowPrecision(_) => Err(Error::PrecisionExhausted(
                "scalar has no exact valuation".into(),
            )),
        }
    }

    /// `Ann(M) = ∩ I_i`: the largest threshold, open winning ties. The unit
    /// ideal for the zero module.
    pub fn annihilator(&self) -> CutIdeal<I> {
        match self.summands.iter().max_by(|a, b| {
            a.threshold
                .cmp(&b.threshold)
                .then(a.endpoint.cmp(&b.endpoint))
        }) {
            Some(s) => s.clone(),
            None => CutIdeal::closed(Exponent::zero()),
        }
    }
}

impl<I: ExpInt> fmt::Display for CutModule<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "V/{s}")?;
        }
        Ok(())
    }
}

impl<I: ExpInt> fmt::Debug for CutModule<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `0 → V/aV → V/abV → V/bV → 0`, as cut modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTriple<I: ExpInt> {
    pub sub: CutModule<I>,
    pub middle: CutModule<I>,
    pub quotient: CutModule<I>,
}

impl<I: ExpInt> ExactTriple<I> {
    pub fn from_valuations(va: &Exponent<I>, vb: &Exponent<I>) -> Self {
        ExactTriple {
            sub: CutModule::cyclic(CutIdeal::closed(va.clone())),
            middle: CutModule::cyclic(CutIdeal::closed(va + vb)),
            quotient: CutModule::cyclic(CutIdeal::closed(vb.clone())),
        }
    }
}

pub fn quotient_ses<I: ExpInt>(a: &RingElement<I>, b: &RingElement<I>) -> Result<ExactTriple<I>> {
    let (va, vb) = match (a.valuation(), b.valuation()) {
        (ValResult::Exact(x), ValResult::Exact(y)) => (x, y),
        _ => {
            return Err(Error::PrecisionExhausted(
                "quotient_ses needs exact valuations".into(),
            ))
        }
    };
    if &(&va + &vb) >= a.precision() {
        return Err(Error::PrecisionExhausted(format!(
            "v(a) + v(b) = {} reaches precision {}",
            &va + &vb,
            a.precision()
        )));
    }
    Ok(ExactTriple::from_valuations(&va, &vb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type E = Exponent<BigInt>;

    fn closed(n: i64, d: i64) -> CutIdeal<BigInt> {
        CutIdeal::closed(E::frac(n, d))
    }

    fn open(n: i64, d: i64) -> CutIdeal<BigInt> {
        CutIdeal::open(E::frac(n, d))
    }

    #[test]
    fn canonical_form() {
        let m = CutModule::new([closed(1, 2), closed(0, 1), open(0, 1), closed(1, 4)]).unwrap();
        assert_eq!(m.summands(), &[open(0, 1), closed(1, 4), closed(1, 2)]);
        assert!(CutModule::new([open(-1, 2)]).is_err());
    }

    #[test]
    fn scalar_image_examples() {
        let m = CutModule::cyclic(closed(1, 1));
        assert_eq!(
            m.scalar_image_val(&E::frac(1, 4)),
            CutModule::cyclic(closed(3, 4))
        );
        assert!(m.scalar_image_val(&E::from_int(1)).is_zero());
        assert!(m.scalar_image_val(&E::from_int(2)).is_zero());
        assert_eq!(m.scalar_image_val(&E::zero()), m);
    }

    #[test]
    fn scalar_image_open_edges() {
        let m = CutModule::cyclic(open(1, 2));
        // b of valuation exactly r is not in the open ideal: image V/m_V
        assert_eq!(
            m.scalar_image_val(&E::frac(1, 2)),
            CutModule::cyclic(open(0, 1))
        );
        assert!(m.scalar_image_val(&E::frac(3, 4)).is_zero());
    }

    #[test]
    fn scalar_image_composes() {
        let m = CutModule::new([closed(1, 2), open(1, 3), closed(5, 4)]).unwrap();
        let (b, c) = (E::frac(1, 9), E::frac(2, 9));
        assert_eq!(
            m.scalar_image_val(&c).scalar_image_val(&b),
            m.scalar_image_val(&(&b + &c))
        );
    }

    #[test]
    fn annihilators() {
        let m = CutModule::new([closed(1, 2), open(1, 2), closed(1, 4)]).unwrap();
        assert_eq!(m.annihilator(), open(1, 2));
        assert!(CutModule::<BigInt>::zero().annihilator().is_unit());
    }

    #[test]
    fn triples() {
        let t = ExactTriple::<BigInt>::from_valuations(&E::frac(1, 2), &E::frac(1, 3));
        assert_eq!(t.middle, CutModule::cyclic(closed(5, 6)));
        let u = ExactTriple::<BigInt>::from_valuations(&E::zero(), &E::frac(1, 3));
        assert!(u.sub.is_zero());
        assert_eq!(u.middle, u.quotient);
        assert_eq!(CutModule::zero().direct_sum(&t.sub), t.sub);
    }
}
